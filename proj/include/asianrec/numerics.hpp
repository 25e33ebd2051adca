#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace asianrec {

/// Equally spaced abscissae start + i*step, i = 0..size-1.
struct UniformGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t size = 0;

    double operator[](std::size_t i) const noexcept { return start + static_cast<double>(i) * step; }
    double front() const noexcept { return start; }
    double back() const noexcept { return (*this)[size - 1]; }
    std::size_t intervals() const noexcept { return size == 0 ? 0 : size - 1; }
    bool contains(double x) const noexcept { return x >= front() && x <= back(); }
    std::vector<double> points() const;
};

/// Grid on [lo, lo + n*step] where n is the number of whole steps in
/// [lo, hi] rounded to the nearest even count.
UniformGrid snap_even(double lo, double hi, double step);

/// Composite Simpson over samples on a uniform grid with an even number of
/// subintervals (odd number of samples).
double simpson(std::span<const double> samples, double step);

/// Simpson weights (1,4,2,...,4,1)*h/3 for `n_samples` (odd) samples.
std::vector<double> simpson_weights(std::size_t n_samples, double step);

/// Second differences: central on the interior, one-sided second order at
/// both ends. Requires at least 4 samples.
std::vector<double> second_differences(std::span<const double> y, double step);

/// First differences: central on the interior, one-sided second order at the ends.
std::vector<double> first_differences(std::span<const double> y, double step);

/// Greatest convex minorant of samples on a uniform grid (lower convex hull,
/// linear between hull vertices). Returns the largest pointwise decrease.
double convex_minorant(std::span<double> y);

enum class Interpolation { Linear, MonotoneCubic };

/// Piecewise interpolant over a uniform grid. The monotone cubic variant is a
/// Fritsch-Carlson Hermite spline: on every cell the interpolant stays
/// within the range of the two end samples.
class UniformInterpolant {
public:
    UniformInterpolant() = default;
    UniformInterpolant(UniformGrid grid, std::vector<double> values,
                       Interpolation kind = Interpolation::MonotoneCubic);

    const UniformGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    Interpolation kind() const noexcept { return kind_; }

    /// x must lie inside the grid (callers handle extrapolation).
    double operator()(double x) const noexcept;

    /// Derivative of the interpolant.
    double derivative(double x) const noexcept;

private:
    UniformGrid grid_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    Interpolation kind_ = Interpolation::MonotoneCubic;
    double inv_step_ = 1.0;
};

/// Runs body(i) for i in [0, n) on `workers` threads. Each index is handled
/// exactly once; work assignment is static.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

} // namespace asianrec
