#include "sigtext/error.hpp"
#include "sigtext/siggen.hpp"
#include "sigtext/ssa.hpp"

#include "support.hpp"

#include <Eigen/SVD>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace sigtext;

namespace {

double rel_err(const std::vector<double>& got, const std::vector<double>& want)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        num += (got[i] - want[i]) * (got[i] - want[i]);
        den += want[i] * want[i];
    }
    return std::sqrt(num / den);
}

std::vector<double> sum_parts(const HankelDecomposition& d)
{
    std::vector<double> total = d.residual.samples;
    for (const auto& c : d.components) {
        for (std::size_t i = 0; i < total.size(); ++i) {
            total[i] += c.series.samples[i];
        }
    }
    return total;
}

} // namespace

TEST_CASE("hankel embedding and anti-diagonal averaging are inverse")
{
    SampledSignal x({1, 2, 3, 4, 5, 6, 7}, 10.0);
    const Eigen::MatrixXd h = hankel_embed(x, 3);
    CHECK(h.rows() == 3);
    CHECK(h.cols() == 5);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 5; ++j) {
            CHECK(h(i, j) == x.samples[static_cast<std::size_t>(i + j)]);
        }
    }
    const SampledSignal back = diagonal_average(h, 10.0);
    CHECK(back.samples == x.samples);
    CHECK_THROWS_AS(hankel_embed(x, 1), InvalidArgument);
    CHECK_THROWS_AS(hankel_embed(x, 7), InvalidArgument);

    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    // Anti-diagonals: {1}, {2,4}, {3,5}, {6}.
    CHECK(diagonal_average(m).samples == std::vector<double>{1.0, 3.0, 4.0, 6.0});
}

TEST_CASE("default window length follows the band resolution rule")
{
    SSAConfig c;
    c.bands = std::vector<Band>{{100.0, 5.0}};
    // fs / half-width = 200, below N/2 and the cap.
    CHECK(default_window_len(1000, 1000.0, c) == 200);
    c.bands = std::vector<Band>{{100.0, 0.5}};
    CHECK(default_window_len(1000, 1000.0, c) == 500);
    c.max_window = 64;
    CHECK(default_window_len(1000, 1000.0, c) == 64);
    CHECK(default_window_len(5, 1000.0, c) >= 2);
}

TEST_CASE("dominant frequency of an eigenvector-like sinusoid")
{
    std::vector<double> v(200);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::sin(2 * std::numbers::pi * 37.0 * static_cast<double>(i) / 1000.0);
    }
    CHECK(dominant_frequency(v, 1000.0) == doctest::Approx(37.0).epsilon(0.02));
}

TEST_CASE("SSA singular values agree with a matrix SVD of the trajectory matrix")
{
    std::mt19937_64 gen(12);
    std::normal_distribution<double> nd;
    std::vector<double> x(300);
    for (auto& v : x) {
        v = nd(gen);
    }
    const SampledSignal s(x, 100.0);
    SSAConfig c;
    c.window_len = 40;
    const auto d = ssa_decompose(s, c);
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(hankel_embed(s, 40)).singularValues();
    REQUIRE(d.singular_values.size() == 40);
    for (int i = 0; i < 40; ++i) {
        CHECK(std::abs(d.singular_values[static_cast<std::size_t>(i)] - sv(i)) <= 1e-8 * sv(0));
    }
}

TEST_CASE("components plus residual reconstruct the input")
{
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    const SampleGrid g(1000.0, 1000);
    for (int trial = 0; trial < 5; ++trial) {
        auto s = synthesize(MultiHarmonicParams{50.0 + 10.0 * trial, {2.0, 1.0, 0.5}, {}}, g);
        for (auto& v : s.samples) {
            v += nd(gen);
        }
        SSAConfig c;
        if (trial % 2 == 0) {
            c.bands = std::vector<Band>{{50.0 + 10.0 * trial, 4.0}, {300.0, 10.0}};
        }
        c.window_len = 100;
        const auto d = ssa_decompose(s, c);
        CHECK(rel_err(sum_parts(d), s.samples) <= 1e-9);
        // A band claims each eigentriple at most once.
        std::set<std::size_t> seen;
        for (const auto& comp : d.components) {
            CHECK(comp.index_set.size() <= c.max_components_per_band);
            for (auto i : comp.index_set) {
                CHECK(seen.insert(i).second);
            }
        }
    }
}

TEST_CASE("a band with no matching eigentriple yields a flagged zero series")
{
    const SampleGrid g(1000.0, 1000);
    const auto s = synthesize(HarmonicParams{1.0, 50.0, 0.0}, g);
    SSAConfig c;
    c.window_len = 100;
    c.bands = std::vector<Band>{{50.0, 5.0}, {400.0, 5.0}};
    const auto d = ssa_decompose(s, c);
    REQUIRE(d.components.size() == 2);
    CHECK_FALSE(d.components[0].empty_band);
    CHECK(d.components[1].empty_band);
    CHECK(std::all_of(d.components[1].series.samples.begin(), d.components[1].series.samples.end(),
                      [](double v) { return v == 0.0; }));
    CHECK(rel_err(d.components[0].series.samples, s.samples) < 1e-6);
}

TEST_CASE("denoising a 0 dB sinusoid gains at least 10 dB")
{
    const SampleGrid g(1000.0, 2000);
    const auto clean = synthesize(HarmonicParams{1.0, 50.0, 0.0}, g);
    const auto noisy = add_noise(clean, 0.0, 99);
    const auto r = denoise(noisy, SSAConfig{});
    double e_in = 0.0;
    double e_out = 0.0;
    double p = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        p += clean.samples[i] * clean.samples[i];
        e_in += (noisy.samples[i] - clean.samples[i]) * (noisy.samples[i] - clean.samples[i]);
        e_out += (r.clean.samples[i] - clean.samples[i]) * (r.clean.samples[i] - clean.samples[i]);
    }
    const double gain_db = 10.0 * std::log10(p / e_out) - 10.0 * std::log10(p / e_in);
    CHECK(gain_db >= 10.0);
    CHECK(pearson_correlation(r.clean.view(), clean.view()) >= 0.95);
    for (std::size_t i = 0; i < clean.size(); ++i) {
        REQUIRE(r.clean.samples[i] + r.residual.samples[i] == doctest::Approx(noisy.samples[i]).epsilon(1e-9));
    }
}

TEST_CASE("SSA config validation")
{
    SSAConfig c;
    c.energy_fraction = 0.0;
    CHECK_THROWS_AS(c.validate(100), InvalidArgument);
    c = SSAConfig{};
    c.window_len = 80;
    CHECK_THROWS_AS(c.validate(100), InvalidArgument);
    c = SSAConfig{};
    c.bands = std::vector<Band>{{10.0, 0.0}};
    CHECK_THROWS_AS(c.validate(100), InvalidArgument);
    c = SSAConfig{};
    c.bands = AutoBands{0};
    CHECK_THROWS_AS(c.validate(100), InvalidArgument);
}
