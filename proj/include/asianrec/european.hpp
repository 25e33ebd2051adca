#pragma once

namespace asianrec {

double norm_cdf(double x) noexcept;
double norm_pdf(double x) noexcept;

/// Black-Scholes call x N(d1) - K e^{-r tau} N(d2). K = 0 gives x; when
/// sigma*sqrt(tau) underflows the deterministic limit is returned.
double bs_call(double x, double K, double r, double sigma, double tau);

/// Put by parity, floored at zero.
double put_from_call(double call, double x, double K, double r, double tau) noexcept;

struct BSGreeks {
    double dc_dx = 0.0;
    double dc_dK = 0.0;
    double d2c_dx2 = 0.0;
    double d2c_dK2 = 0.0;
    double d2c_dxdK = 0.0;
};

BSGreeks bs_greeks(double x, double K, double r, double sigma, double tau);

/// European prices for one maturity under a fixed model and rate.
class EuropeanPricer {
public:
    virtual ~EuropeanPricer() = default;

    virtual double call(double x, double K) const = 0;
    virtual double put(double x, double K) const;

    /// Out-of-the-money price: put for K <= e^{r tau} x, call above.
    double phi(double x, double K) const;

    virtual double rate() const noexcept = 0;
    virtual double tau() const noexcept = 0;
};

double phi(double x, double K, const EuropeanPricer& pricer);

class BlackScholesPricer final : public EuropeanPricer {
public:
    BlackScholesPricer(double sigma, double rate, double tau);

    double call(double x, double K) const override;
    double put(double x, double K) const override;

    double rate() const noexcept override { return rate_; }
    double tau() const noexcept override { return tau_; }
    double sigma() const noexcept { return sigma_; }

private:
    double sigma_;
    double rate_;
    double tau_;
};

} // namespace asianrec
