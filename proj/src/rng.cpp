#include "sigtext/rng.hpp"

#include <cmath>
#include <numbers>

namespace sigtext {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t CounterRng::mix(std::uint64_t z) noexcept
{
    // Stafford variant 13 finalizer.
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() noexcept
{
    const std::uint64_t n = counter_++;
    return mix(key_ + (n + 1) * kGolden);
}

double CounterRng::uniform() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi) noexcept
{
    if (hi <= lo) {
        return lo;
    }
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = span == 0 ? 0 : (~std::uint64_t{0} - span + 1) % span;
    std::uint64_t v = next_u64();
    while (v < limit) {
        v = next_u64();
    }
    return lo + static_cast<std::int64_t>(v % span);
}

double CounterRng::normal() noexcept
{
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

CounterRng CounterRng::split(std::uint64_t stream) const noexcept
{
    return CounterRng(Key{}, mix(key_ ^ mix(stream + kGolden)));
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept
{
    return CounterRng::mix(CounterRng::mix(master_seed) ^ (index * kGolden + 0x632be59bd9b4e019ULL));
}

} // namespace sigtext
