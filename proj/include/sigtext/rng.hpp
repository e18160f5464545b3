#pragma once

#include <cstdint>

namespace sigtext {

// Counter-based generator: output n is a stateless mix of (key, n), so any
// stream can be split into independent child streams by deriving a new key.
// Draws are bit-identical across platforms; no std:: distributions are used.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    std::uint64_t next_u64() noexcept;

    // Uniform in [0, 1).
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] (inclusive).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;

    // Standard normal via Box-Muller; the second variate is cached.
    double normal() noexcept;

    // Child stream for index `stream`; independent of this stream's position.
    CounterRng split(std::uint64_t stream) const noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

    static std::uint64_t mix(std::uint64_t z) noexcept;

private:
    struct Key {};
    CounterRng(Key, std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// Seed for item `index` of a batch driven by `master_seed`.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

} // namespace sigtext
