#pragma once

#include "asianrec/domain.hpp"
#include "asianrec/european.hpp"
#include "asianrec/numerics.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace asianrec {

/// FFT inversion of the dampened call transform. The Fourier integral is
/// truncated at v_max and sampled at n_points nodes.
struct FFTConfig {
    std::size_t n_points = std::size_t{1} << 14;
    double v_max = 2000.0;
    double alpha = 1.5;

    double v_step() const noexcept { return v_max / static_cast<double>(n_points); }
    /// Conjugate log-strike spacing 2*pi / (n_points * v_step).
    double k_step() const noexcept;

    bool operator==(const FFTConfig&) const = default;
};

void validate_fft_config(const FFTConfig& config, const VarianceGammaParams& vg);

/// Call prices at unit spot as a function of log strike k = log(K/x).
struct LogStrikeCurve {
    UniformGrid k_grid;
    std::vector<double> cbar_values;
    std::vector<double> dcbar_dk;   // empty unless fft_call_derivatives ran
    std::vector<double> d2cbar_dk2; // empty unless fft_call_derivatives ran
    double rate = 0.0;
    double tau = 0.0;
    /// Largest change made by clamping to the price bounds and by the
    /// monotone pass, over |k| <= 2.5.
    double max_clamp = 0.0;
};

/// Characteristic function of log S_tau for S_0 = 1, evaluated off the real axis.
using CharacteristicFunction = std::function<std::complex<double>(std::complex<double>)>;

/// omega = log(1 - theta*nu - sigma^2*nu/2) / nu, so that e^{X_t + omega t} is a martingale.
double vg_omega(double sigma, double nu, double theta);

std::complex<double> vg_characteristic(std::complex<double> u, const VarianceGammaParams& vg, double r,
                                       double tau);

CharacteristicFunction vg_characteristic_function(const VarianceGammaParams& vg, double r, double tau);

/// Fourier transform of the dampened call price e^{alpha k} c(k):
/// e^{-r tau} psi(v - (alpha+1)i) / (alpha^2 + alpha - v^2 + i(2 alpha + 1)v).
std::complex<double> dampened_transform(double v, double alpha, const CharacteristicFunction& psi, double r,
                                        double tau);
std::complex<double> dampened_transform(double v, double alpha, const VarianceGammaParams& vg, double r,
                                        double tau);

LogStrikeCurve fft_call_curve(const FFTConfig& config, const CharacteristicFunction& psi, double r, double tau);
LogStrikeCurve fft_call_curve(const FFTConfig& config, const VarianceGammaParams& vg, double r, double tau);

/// Put prices at unit spot on the same log-strike grid as fft_call_curve,
/// from the transform with damping -alpha (no clamping).
std::vector<double> fft_put_values(const FFTConfig& config, const VarianceGammaParams& vg, double r, double tau);

/// First and second log-strike derivatives by FFT with -iv and -v^2 kernels
/// on the dampened price, undamped by the product rule.
void fft_call_derivatives(LogStrikeCurve& curve, const FFTConfig& config, const VarianceGammaParams& vg,
                          double r, double tau);

/// European pricer on top of a log-strike curve: c(x, K) = x cbar(log(K/x)).
class CurvePricer final : public EuropeanPricer {
public:
    CurvePricer(LogStrikeCurve curve, Interpolation kind = Interpolation::MonotoneCubic);

    double call(double x, double K) const override;

    double rate() const noexcept override { return curve_.rate; }
    double tau() const noexcept override { return curve_.tau; }
    const LogStrikeCurve& curve() const noexcept { return curve_; }

private:
    LogStrikeCurve curve_;
    UniformInterpolant interp_;
};

std::shared_ptr<const CurvePricer> curve_to_pricer(LogStrikeCurve curve);

} // namespace asianrec
