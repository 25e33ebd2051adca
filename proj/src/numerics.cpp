#include "asianrec/numerics.hpp"

#include "asianrec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace asianrec {

std::vector<double> UniformGrid::points() const {
    std::vector<double> out(size);
    for (std::size_t i = 0; i < size; ++i) {
        out[i] = (*this)[i];
    }
    return out;
}

UniformGrid snap_even(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo)) {
        throw PricingError(ErrorCode::BadGrid, "grid requires lo < hi and step > 0");
    }
    auto n = 2 * static_cast<std::size_t>(std::llround(0.5 * (hi - lo) / step));
    if (n == 0) {
        n = 2;
    }
    return UniformGrid{lo, step, n + 1};
}

std::vector<double> simpson_weights(std::size_t n_samples, double step) {
    if (n_samples < 3 || n_samples % 2 == 0) {
        throw PricingError(ErrorCode::BadGrid, "Simpson's rule needs an even number of subintervals");
    }
    std::vector<double> w(n_samples);
    const double third = step / 3.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (i == 0 || i + 1 == n_samples) {
            w[i] = third;
        } else {
            w[i] = (i % 2 == 1 ? 4.0 : 2.0) * third;
        }
    }
    return w;
}

double simpson(std::span<const double> samples, double step) {
    const std::size_t n = samples.size();
    if (n < 3 || n % 2 == 0) {
        throw PricingError(ErrorCode::BadGrid, "Simpson's rule needs an even number of subintervals");
    }
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        (i % 2 == 1 ? odd : even) += samples[i];
    }
    return step / 3.0 * (samples.front() + 4.0 * odd + 2.0 * even + samples.back());
}

std::vector<double> second_differences(std::span<const double> y, double step) {
    const std::size_t n = y.size();
    if (n < 4) {
        throw PricingError(ErrorCode::GridTooCoarse, "second differences need at least 4 samples");
    }
    const double inv_h2 = 1.0 / (step * step);
    std::vector<double> d2(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d2[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) * inv_h2;
    }
    d2[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) * inv_h2;
    d2[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) * inv_h2;
    return d2;
}

double convex_minorant(std::span<double> y) {
    const std::size_t n = y.size();
    if (n < 3) {
        return 0.0;
    }
    // Monotone chain on (i, y_i); abscissae are indices since the grid is uniform.
    std::vector<std::size_t> hull;
    hull.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2];
            const std::size_t b = hull.back();
            const double cross = (y[b] - y[a]) * static_cast<double>(i - a) - (y[i] - y[a]) * static_cast<double>(b - a);
            if (cross < 0.0) {
                break;
            }
            hull.pop_back();
        }
        hull.push_back(i);
    }
    double moved = 0.0;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const std::size_t a = hull[h];
        const std::size_t b = hull[h + 1];
        const double slope = (y[b] - y[a]) / static_cast<double>(b - a);
        for (std::size_t i = a + 1; i < b; ++i) {
            const double v = y[a] + slope * static_cast<double>(i - a);
            moved = std::max(moved, y[i] - v);
            y[i] = v;
        }
    }
    return moved;
}

std::vector<double> first_differences(std::span<const double> y, double step) {
    const std::size_t n = y.size();
    if (n < 3) {
        throw PricingError(ErrorCode::GridTooCoarse, "first differences need at least 3 samples");
    }
    const double inv_2h = 0.5 / step;
    std::vector<double> d1(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d1[i] = (y[i + 1] - y[i - 1]) * inv_2h;
    }
    d1[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) * inv_2h;
    d1[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) * inv_2h;
    return d1;
}

UniformInterpolant::UniformInterpolant(UniformGrid grid, std::vector<double> values, Interpolation kind)
    : grid_(grid), values_(std::move(values)), kind_(kind), inv_step_(1.0 / grid.step) {
    const std::size_t n = values_.size();
    if (n < 2 || n != grid_.size) {
        throw PricingError(ErrorCode::GridTooCoarse, "interpolant needs at least two samples matching its grid");
    }
    if (kind_ == Interpolation::Linear) {
        return;
    }
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        secant[i] = (values_[i + 1] - values_[i]) * inv_step_;
    }
    slopes_.assign(n, 0.0);
    slopes_[0] = secant[0];
    slopes_[n - 1] = secant[n - 2];
    // harmonic mean of neighbouring secants keeps each cell monotone
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double a = secant[i - 1];
        const double b = secant[i];
        if (a * b > 0.0) {
            slopes_[i] = 2.0 * a * b / (a + b);
        }
    }
    // end slopes limited to three times the secant (Fritsch-Carlson bound)
    for (std::size_t end : {std::size_t{0}, n - 1}) {
        const double s = end == 0 ? secant[0] : secant[n - 2];
        if (s == 0.0) {
            slopes_[end] = 0.0;
        } else if (std::abs(slopes_[end]) > 3.0 * std::abs(s)) {
            slopes_[end] = 3.0 * s;
        }
    }
}

double UniformInterpolant::operator()(double x) const noexcept {
    const double t = (x - grid_.start) * inv_step_;
    const auto last_cell = static_cast<std::ptrdiff_t>(values_.size()) - 2;
    auto i = static_cast<std::ptrdiff_t>(std::floor(t));
    i = std::clamp<std::ptrdiff_t>(i, 0, last_cell);
    const double s = t - static_cast<double>(i);
    const double y0 = values_[static_cast<std::size_t>(i)];
    const double y1 = values_[static_cast<std::size_t>(i) + 1];
    if (kind_ == Interpolation::Linear) {
        return y0 + s * (y1 - y0);
    }
    const double m0 = slopes_[static_cast<std::size_t>(i)] * grid_.step;
    const double m1 = slopes_[static_cast<std::size_t>(i) + 1] * grid_.step;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 +
           (s3 - s2) * m1;
}

double UniformInterpolant::derivative(double x) const noexcept {
    const double t = (x - grid_.start) * inv_step_;
    const auto last_cell = static_cast<std::ptrdiff_t>(values_.size()) - 2;
    auto i = static_cast<std::ptrdiff_t>(std::floor(t));
    i = std::clamp<std::ptrdiff_t>(i, 0, last_cell);
    const double s = t - static_cast<double>(i);
    const double y0 = values_[static_cast<std::size_t>(i)];
    const double y1 = values_[static_cast<std::size_t>(i) + 1];
    if (kind_ == Interpolation::Linear) {
        return (y1 - y0) * inv_step_;
    }
    const double m0 = slopes_[static_cast<std::size_t>(i)];
    const double m1 = slopes_[static_cast<std::size_t>(i) + 1];
    const double s2 = s * s;
    return (6.0 * s2 - 6.0 * s) * (y0 - y1) * inv_step_ + (3.0 * s2 - 4.0 * s + 1.0) * m0 +
           (3.0 * s2 - 2.0 * s) * m1;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    const auto w = static_cast<std::size_t>(std::max(1, workers));
    if (w == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(w);
    {
        std::vector<std::jthread> pool;
        pool.reserve(w);
        for (std::size_t t = 0; t < w; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < n; i += w) {
                        body(i);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace asianrec
