#include "sigtext/error.hpp"
#include "sigtext/fft.hpp"
#include "sigtext/rng.hpp"
#include "sigtext/signal.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace sigtext;

TEST_CASE("counter rng is deterministic and splits into distinct streams")
{
    CounterRng a(42);
    CounterRng b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    CounterRng c(43);
    CHECK(CounterRng(42).next_u64() != c.next_u64());
    CHECK(a.split(1).next_u64() != a.split(2).next_u64());
    // A child stream does not depend on the parent's position.
    CounterRng p(7);
    const auto before = p.split(3).next_u64();
    p.next_u64();
    CHECK(p.split(3).next_u64() == before);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}

TEST_CASE("counter rng draws stay in range and have sane moments")
{
    CounterRng r(9);
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 200000;
    std::set<std::int64_t> ints;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const auto k = r.uniform_int(-2, 2);
        REQUIRE(k >= -2);
        REQUIRE(k <= 2);
        ints.insert(k);
        const double z = r.normal();
        sum += z;
        sum2 += z * z;
    }
    CHECK(ints.size() == 5);
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("sample grid and sampled signal invariants")
{
    const SampleGrid g(1000.0, 500);
    CHECK(g.time(250) == doctest::Approx(0.25));
    CHECK(g.duration_s() == doctest::Approx(0.5));
    CHECK(g.resolution_hz() == doctest::Approx(2.0));
    CHECK_THROWS_AS(SampleGrid(0.0, 10), InvalidArgument);
    CHECK_THROWS_AS(SampleGrid(10.0, 1), InvalidArgument);

    SampledSignal s({1.0, std::nan(""), 2.0}, 10.0);
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    SampledSignal a({1.0, 2.0}, 10.0);
    SampledSignal b({3.0, 5.0}, 10.0);
    CHECK((a + b).samples == std::vector<double>{4.0, 7.0});
    CHECK((b - a).samples == std::vector<double>{2.0, 3.0});
    CHECK((2.0 * a).samples == std::vector<double>{2.0, 4.0});
    SampledSignal c({1.0, 2.0}, 20.0);
    CHECK_THROWS(a + c);
}

TEST_CASE("fft matches the direct DFT and convolution sum")
{
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    std::vector<double> x(37);
    for (auto& v : x) {
        v = nd(gen);
    }
    const auto bins = fft::forward_real(x);
    const auto amp = oracle::dft_amplitudes(x);
    for (std::size_t k = 1; k < bins.size(); ++k) {
        CHECK(2.0 * std::abs(bins[k]) / 37.0 == doctest::Approx(amp[k]).epsilon(1e-10));
    }
    const auto back = fft::inverse_real(bins, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
    std::vector<double> h{1.0, -2.0, 0.5};
    const auto y = fft::convolve(x, h);
    REQUIRE(y.size() == x.size() + h.size() - 1);
    for (std::size_t i = 0; i < y.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < h.size(); ++j) {
            if (i >= j && i - j < x.size()) {
                acc += x[i - j] * h[j];
            }
        }
        CHECK(y[i] == doctest::Approx(acc).epsilon(1e-10));
    }
}

TEST_CASE("analytic envelope of an AM tone follows the modulation")
{
    const double fs = 1000.0;
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i) / fs;
        x[i] = (1.0 + 0.5 * std::cos(2 * std::numbers::pi * 5 * t)) * std::sin(2 * std::numbers::pi * 100 * t);
    }
    const auto env = fft::analytic_envelope(x);
    for (std::size_t i = 100; i < 900; ++i) {
        const double t = static_cast<double>(i) / fs;
        CHECK(env[i] == doctest::Approx(1.0 + 0.5 * std::cos(2 * std::numbers::pi * 5 * t)).epsilon(1e-6));
    }
}
