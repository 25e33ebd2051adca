#include "asianrec/random.hpp"

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

namespace asianrec {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

using NoPromotion = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

} // namespace

Philox4x32::Counter Philox4x32::generate(Counter c, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

double normal_quantile(double p) noexcept {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p, NoPromotion());
}

PathRandom::PathRandom(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

void PathRandom::refill() noexcept {
    const Philox4x32::Counter counter{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const auto out = Philox4x32::generate(counter, key_);
    ++block_;
    buffer_[0] = to_unit(out[0], out[1]);
    buffer_[1] = to_unit(out[2], out[3]);
    buffered_ = 2;
}

double PathRandom::uniform() noexcept {
    if (buffered_ == 0) {
        refill();
    }
    return buffer_[static_cast<std::size_t>(--buffered_)];
}

double PathRandom::normal() noexcept { return normal_quantile(uniform()); }

double PathRandom::gamma(double shape, double scale) noexcept {
    if (shape < 1.0) {
        const double boosted = gamma(shape + 1.0, 1.0);
        return scale * boosted * std::exp(std::log(uniform()) / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double z = normal();
        const double t = 1.0 + c * z;
        if (t <= 0.0) {
            continue;
        }
        const double v = t * t * t;
        const double u = uniform();
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
            return scale * d * v;
        }
    }
}

} // namespace asianrec
