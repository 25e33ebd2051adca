#pragma once

#include <array>
#include <cstdint>

namespace asianrec {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) noexcept;
};

/// Random stream owned by a single path: the Philox key is the seed and the
/// counter is (draw block, stream index), so any path can be regenerated
/// without touching the others.
class PathRandom {
public:
    PathRandom(std::uint64_t seed, std::uint64_t stream) noexcept;

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal by inverting the normal CDF at uniform().
    double normal() noexcept;

    /// Gamma(shape, scale). Marsaglia-Tsang, with the U^{1/shape} boost for shape < 1.
    double gamma(double shape, double scale) noexcept;

private:
    void refill() noexcept;

    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<double, 2> buffer_{};
    int buffered_ = 0;
};

/// Standard normal quantile.
double normal_quantile(double p) noexcept;

} // namespace asianrec
