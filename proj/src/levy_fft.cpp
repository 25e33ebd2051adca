#include "asianrec/levy_fft.hpp"

#include "asianrec/errors.hpp"

#include <fftw3.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace asianrec {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// FFTW planning is not thread safe.
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

/// sum_m weight_m * f(v_m) e^{-i v_m k_j} dv on the conjugate grid k_j = -b + j dk.
std::vector<cplx> fourier_sum(const FFTConfig& config, const std::function<cplx(double)>& integrand) {
    const std::size_t n = config.n_points;
    const double dv = config.v_step();
    const double b = 0.5 * static_cast<double>(n) * config.k_step();

    auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t m = 0; m < n; ++m) {
        const double v = static_cast<double>(m) * dv;
        const double weight = (m == 0 ? 0.5 : 1.0) * dv;
        const cplx x = std::exp(kI * (b * v)) * integrand(v) * weight;
        in[m][0] = x.real();
        in[m][1] = x.imag();
    }
    fftw_execute(plan);
    std::vector<cplx> result(n);
    for (std::size_t j = 0; j < n; ++j) {
        result[j] = cplx{out[j][0], out[j][1]};
    }
    {
        std::lock_guard lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return result;
}

UniformGrid conjugate_grid(const FFTConfig& config) {
    const double dk = config.k_step();
    const double b = 0.5 * static_cast<double>(config.n_points) * dk;
    return UniformGrid{-b, dk, config.n_points};
}

void check_config_shape(const FFTConfig& config) {
    if (!is_power_of_two(config.n_points) || config.n_points < 16) {
        throw PricingError(ErrorCode::BadFFTConfig, "n_points must be a power of two >= 16");
    }
    if (!(config.v_max > 0.0) || !std::isfinite(config.v_max)) {
        throw PricingError(ErrorCode::BadFFTConfig, "v_max must be positive");
    }
    if (!(config.alpha > 0.0)) {
        throw PricingError(ErrorCode::BadFFTConfig, "alpha must be positive");
    }
}

/// (e^{-alpha k} / pi) Re sum, unclamped.
std::vector<double> invert(const FFTConfig& config, double alpha, const CharacteristicFunction& psi, double r,
                           double tau) {
    const auto sums = fourier_sum(config, [&](double v) { return dampened_transform(v, alpha, psi, r, tau); });
    const UniformGrid grid = conjugate_grid(config);
    std::vector<double> values(config.n_points);
    for (std::size_t j = 0; j < config.n_points; ++j) {
        values[j] = std::exp(-alpha * grid[j]) / std::numbers::pi * sums[j].real();
    }
    return values;
}

} // namespace

double FFTConfig::k_step() const noexcept {
    return 2.0 * std::numbers::pi / (static_cast<double>(n_points) * v_step());
}

void validate_fft_config(const FFTConfig& config, const VarianceGammaParams& vg) {
    check_config_shape(config);
    const double a = config.alpha + 1.0;
    const double margin = 1.0 - vg.theta * vg.nu * a - 0.5 * vg.sigma * vg.sigma * vg.nu * a * a;
    if (!(margin > 0.0)) {
        throw PricingError(ErrorCode::VGInadmissible,
                           "damping alpha=" + std::to_string(config.alpha) +
                               " makes psi(-(alpha+1)i) infinite; reduce alpha");
    }
}

double vg_omega(double sigma, double nu, double theta) {
    const double arg = 1.0 - theta * nu - 0.5 * sigma * sigma * nu;
    if (!(arg > 0.0) || !(nu > 0.0)) {
        throw PricingError(ErrorCode::VGInadmissible, "1 - theta*nu - sigma^2*nu/2 must be positive");
    }
    return std::log1p(-theta * nu - 0.5 * sigma * sigma * nu) / nu;
}

std::complex<double> vg_characteristic(std::complex<double> u, const VarianceGammaParams& vg, double r,
                                       double tau) {
    const double omega = vg_omega(vg.sigma, vg.nu, vg.theta);
    const cplx base = 1.0 - kI * vg.theta * vg.nu * u + 0.5 * vg.sigma * vg.sigma * vg.nu * u * u;
    if (!(base.real() > 0.0)) {
        throw PricingError(ErrorCode::BranchCut, "VG characteristic base left the right half plane");
    }
    return std::exp(kI * u * (r + omega) * tau - (tau / vg.nu) * std::log(base));
}

CharacteristicFunction vg_characteristic_function(const VarianceGammaParams& vg, double r, double tau) {
    validate_model(vg);
    return [vg, r, tau](cplx u) { return vg_characteristic(u, vg, r, tau); };
}

std::complex<double> dampened_transform(double v, double alpha, const CharacteristicFunction& psi, double r,
                                        double tau) {
    const cplx denom{alpha * alpha + alpha - v * v, (2.0 * alpha + 1.0) * v};
    return std::exp(-r * tau) * psi(cplx{v, -(alpha + 1.0)}) / denom;
}

std::complex<double> dampened_transform(double v, double alpha, const VarianceGammaParams& vg, double r,
                                        double tau) {
    validate_fft_config(FFTConfig{1 << 4, 1.0, alpha}, vg);
    return dampened_transform(v, alpha, vg_characteristic_function(vg, r, tau), r, tau);
}

LogStrikeCurve fft_call_curve(const FFTConfig& config, const CharacteristicFunction& psi, double r, double tau) {
    check_config_shape(config);
    if (!(tau > 0.0)) {
        throw PricingError(ErrorCode::DomainError, "maturity must be positive");
    }
    const auto raw_values = invert(config, config.alpha, psi, r, tau);
    LogStrikeCurve curve;
    curve.k_grid = conjugate_grid(config);
    curve.rate = r;
    curve.tau = tau;
    curve.cbar_values.resize(config.n_points);

    double worst_band = 0.0;
    double worst_monotone = 0.0;
    for (std::size_t j = 0; j < config.n_points; ++j) {
        const double k = curve.k_grid[j];
        const double raw = raw_values[j];
        const double lower = std::max(0.0, -std::expm1(k - r * tau));
        double c = std::clamp(raw, lower, 1.0);
        // far from the money e^{-alpha k} amplifies the truncation error
        const bool watched = std::abs(k) <= 2.5;
        if (watched) {
            worst_band = std::max(worst_band, std::abs(c - raw));
        }
        if (j > 0 && c > curve.cbar_values[j - 1]) {
            if (watched) {
                worst_monotone = std::max(worst_monotone, c - curve.cbar_values[j - 1]);
            }
            c = curve.cbar_values[j - 1];
        }
        curve.cbar_values[j] = c;
    }
    curve.max_clamp = std::max(worst_band, worst_monotone);
    if (curve.max_clamp > 1e-7) {
        spdlog::debug("fft_call_curve: clamped by up to {:.3e} (bounds) and {:.3e} (monotonicity)", worst_band,
                      worst_monotone);
    }
    return curve;
}

LogStrikeCurve fft_call_curve(const FFTConfig& config, const VarianceGammaParams& vg, double r, double tau) {
    validate_model(vg);
    validate_fft_config(config, vg);
    return fft_call_curve(config, vg_characteristic_function(vg, r, tau), r, tau);
}

std::vector<double> fft_put_values(const FFTConfig& config, const VarianceGammaParams& vg, double r, double tau) {
    validate_model(vg);
    validate_fft_config(config, vg);
    const double a = 1.0 - config.alpha;
    if (!(1.0 - vg.theta * vg.nu * a - 0.5 * vg.sigma * vg.sigma * vg.nu * a * a > 0.0)) {
        throw PricingError(ErrorCode::VGInadmissible, "put damping makes psi infinite; reduce alpha");
    }
    return invert(config, -config.alpha, vg_characteristic_function(vg, r, tau), r, tau);
}

void fft_call_derivatives(LogStrikeCurve& curve, const FFTConfig& config, const VarianceGammaParams& vg,
                          double r, double tau) {
    validate_fft_config(config, vg);
    const auto psi = vg_characteristic_function(vg, r, tau);
    const double alpha = config.alpha;
    auto zeta = [&](double v) { return dampened_transform(v, alpha, psi, r, tau); };
    const auto s0 = fourier_sum(config, zeta);
    const auto s1 = fourier_sum(config, [&](double v) { return -kI * v * zeta(v); });
    const auto s2 = fourier_sum(config, [&](double v) { return -v * v * zeta(v); });

    const std::size_t n = config.n_points;
    curve.dcbar_dk.resize(n);
    curve.d2cbar_dk2.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = curve.k_grid[j];
        const double damp = std::exp(-alpha * k) / std::numbers::pi;
        const double c = damp * s0[j].real();
        const double dz = damp * s1[j].real();
        const double d2z = damp * s2[j].real();
        // z = e^{alpha k} c  =>  c' = e^{-alpha k} z' - alpha c,  c'' = e^{-alpha k} z'' - 2 alpha c' - alpha^2 c
        const double dc = dz - alpha * c;
        curve.dcbar_dk[j] = dc;
        curve.d2cbar_dk2[j] = d2z - 2.0 * alpha * dc - alpha * alpha * c;
    }
}

CurvePricer::CurvePricer(LogStrikeCurve curve, Interpolation kind)
    : curve_(std::move(curve)), interp_(curve_.k_grid, curve_.cbar_values, kind) {}

double CurvePricer::call(double x, double K) const {
    if (!(x > 0.0) || !(K >= 0.0)) {
        throw PricingError(ErrorCode::DomainError, "spot must be positive and strike nonnegative");
    }
    if (K == 0.0) {
        return x;
    }
    const double k = std::log(K / x);
    if (!curve_.k_grid.contains(k)) {
        throw PricingError(ErrorCode::OutOfCoverage,
                           "log strike " + std::to_string(k) + " outside the FFT curve");
    }
    return x * interp_(k);
}

std::shared_ptr<const CurvePricer> curve_to_pricer(LogStrikeCurve curve) {
    return std::make_shared<const CurvePricer>(std::move(curve));
}

} // namespace asianrec
