#pragma once

#include <cstdint>

namespace sparserec {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Independent seed for a named sub-stream of `seed` (matrix, signal, noise, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Counter-based generator: draw k is mix64(key + k·γ), so any draw is a pure
// function of (seed, k) and streams never share state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Uniform integer in [0, bound), unbiased. bound must be ≥ 1.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Standard normal via Box–Muller; both outputs of each pair are used.
    double normal() noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace sparserec
