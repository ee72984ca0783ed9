#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "einsvd/dense_tensor.hpp"

namespace einsvd {

/// xorshift64* generator.  Chosen over std::mt19937 because the whole state
/// is one word and the output sequence is trivially reproducible from the
/// documented recurrence, which file formats and CLI runs rely on:
///
///   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  out = x * 0x2545F4914F6CDD1D
///
/// A seed of 0 (the one forbidden state) is replaced by 0x9E3779B97F4A7C15.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed) noexcept
        : state_(seed == 0 ? 0x9E3779B97F4A7C15ULL : seed) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform double in [0, 1) from the top 53 bits of the next word.
    double next_uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via the Box-Muller transform.  Each pair of uniforms
    /// (u1 drawn first, then u2) produces r*cos(theta) immediately and caches
    /// r*sin(theta) for the following call, with r = sqrt(-2 log(1-u1)) and
    /// theta = 2*pi*u2.  The draw order is part of the reproducibility
    /// contract.
    double next_normal() noexcept {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Tensor with i.i.d. standard normal entries filled in flat storage order.
[[nodiscard]] inline DenseTensor normal_tensor(const Shape& shape, Xorshift64Star& rng) {
    DenseTensor t(shape);
    for (double& x : t.data()) x = rng.next_normal();
    return t;
}

[[nodiscard]] inline DenseTensor normal_tensor(const Shape& shape, std::uint64_t seed) {
    Xorshift64Star rng(seed);
    return normal_tensor(shape, rng);
}

/// Tensor with i.i.d. uniform [0, 1) entries filled in flat storage order.
[[nodiscard]] inline DenseTensor uniform_tensor(const Shape& shape, Xorshift64Star& rng) {
    DenseTensor t(shape);
    for (double& x : t.data()) x = rng.next_uniform();
    return t;
}

[[nodiscard]] inline DenseTensor uniform_tensor(const Shape& shape, std::uint64_t seed) {
    Xorshift64Star rng(seed);
    return uniform_tensor(shape, rng);
}

} // namespace einsvd
