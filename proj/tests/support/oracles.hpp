#pragma once

// Reference values computed without the library's pricing code paths:
// adaptive quadrature, Gamma-mixture integrals and closed forms.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

inline double bs_call(double x, double K, double r, double sigma, double tau) {
    const double sd = sigma * std::sqrt(tau);
    const double d1 = (std::log(x / K) + (r + 0.5 * sigma * sigma) * tau) / sd;
    return x * norm_cdf(d1) - K * std::exp(-r * tau) * norm_cdf(d1 - sd);
}

inline double bs_put(double x, double K, double r, double sigma, double tau) {
    return bs_call(x, K, r, sigma, tau) - x + K * std::exp(-r * tau);
}

struct VG {
    double sigma;
    double nu;
    double theta;
};

inline double vg_drift(const VG& p, double r) {
    return r + std::log(1.0 - p.theta * p.nu - 0.5 * p.sigma * p.sigma * p.nu) / p.nu;
}

/// Unit-spot VG call by conditioning on the Gamma clock: given G = g the log
/// price is Gaussian, so the call is a Black-Scholes-type expression; the
/// outer expectation runs over the Gamma quantile p in (0, 1).
inline double vg_call_gamma_mixture(double K, const VG& p, double r, double tau) {
    const double shape = tau / p.nu;
    const double mu = vg_drift(p, r) * tau;
    auto conditional = [&](double g) {
        const double mean_log = mu + p.theta * g;
        if (g <= 0.0) {
            return std::max(std::exp(mean_log) - K, 0.0);
        }
        const double sd = p.sigma * std::sqrt(g);
        const double fwd = std::exp(mean_log + 0.5 * sd * sd);
        const double d1 = (std::log(fwd / K) + 0.5 * sd * sd) / sd;
        return fwd * norm_cdf(d1) - K * norm_cdf(d1 - sd);
    };
    auto integrand = [&](double q) {
        const double g = p.nu * boost::math::gamma_p_inv(shape, q);
        return conditional(g);
    };
    boost::math::quadrature::tanh_sinh<double> ts(15);
    return std::exp(-r * tau) * ts.integrate(integrand, 0.0, 1.0, 1e-12);
}

/// (e^{-alpha k} / pi) int_0^inf Re(e^{-ivk} zeta(v)) dv by panel-wise
/// Gauss-Kronrod on [0, v_end]; the remainder is O(1 / v_end).
inline double vg_call_inversion(double k, const VG& p, double r, double tau, double alpha = 1.5,
                                double v_end = 1e5, double panel = 20.0) {
    using cplx = std::complex<double>;
    const cplx i{0.0, 1.0};
    const double mu = vg_drift(p, r) * tau;
    auto psi = [&](cplx u) {
        const cplx base = 1.0 - i * p.theta * p.nu * u + 0.5 * p.sigma * p.sigma * p.nu * u * u;
        return std::exp(i * u * mu - (tau / p.nu) * std::log(base));
    };
    auto f = [&](double v) {
        const cplx zeta = std::exp(-r * tau) * psi(cplx{v, -(alpha + 1.0)}) /
                          cplx{alpha * alpha + alpha - v * v, (2.0 * alpha + 1.0) * v};
        return (std::exp(-i * v * k) * zeta).real();
    };
    double total = 0.0;
    for (double a = 0.0; a < v_end; a += panel) {
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, a + panel, 0);
    }
    return std::exp(-alpha * k) / std::numbers::pi * total;
}

/// Two-observation Black-Scholes Asian call at time 0 (first fixing tau
/// ahead, second 2 tau ahead) from the closed-form g'' of the one-period
/// continuation value, integrated against out-of-the-money one-period prices.
inline double two_fixing_asian(double S, double E, double r, double sigma, double tau) {
    const double sd = sigma * std::sqrt(tau);
    const double df = std::exp(-r * tau);
    auto d1 = [&](double x, double K) { return (std::log(x / K) + (r + 0.5 * sigma * sigma) * tau) / sd; };
    auto g1 = [&](double x) {
        // sure exercise: e^{-r tau} ((x + x e^{r tau}) / 2 - E), continuous with the call branch at 2E
        return x < 2.0 * E ? 0.5 * bs_call(x, 2.0 * E - x, r, sigma, tau) : 0.5 * x * (1.0 + df) - df * E;
    };
    auto g1_second = [&](double x) {
        if (x >= 2.0 * E) {
            return 0.0;
        }
        const double K = 2.0 * E - x;
        const double a = d1(x, K);
        const double c_xx = norm_pdf(a) / (x * sd);
        const double c_KK = df * norm_pdf(a - sd) / (K * sd);
        const double c_xK = -norm_pdf(a) / (K * sd);
        return 0.5 * (c_xx + c_KK - 2.0 * c_xK);
    };
    const double fwd = S / df;
    auto phi = [&](double K) { return K <= fwd ? bs_put(S, K, r, sigma, tau) : bs_call(S, K, r, sigma, tau); };
    auto integrand = [&](double K) { return g1_second(K) * phi(K); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    // split at the forward, where phi has a kink
    const double lo = std::max(1e-9, fwd * std::exp(-40.0 * sd));
    const double hi = std::min(2.0 * E, fwd * std::exp(40.0 * sd));
    double integral = 0.0;
    if (fwd > lo) {
        integral += GK::integrate(integrand, lo, std::min(fwd, hi), 20, 1e-13);
    }
    if (hi > fwd) {
        integral += GK::integrate(integrand, std::max(fwd, lo), hi, 20, 1e-13);
    }
    return df * g1(fwd) + integral;
}

} // namespace oracle
