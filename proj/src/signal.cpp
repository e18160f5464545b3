#include "sigtext/signal.hpp"

#include "sigtext/error.hpp"

#include <cmath>
#include <numeric>

namespace sigtext {

AliasingError::AliasingError(double frequency_hz, double sample_rate_hz)
    : Error("aliasing",
            "frequency " + std::to_string(frequency_hz) + " Hz is at or above the Nyquist limit " +
                std::to_string(0.5 * sample_rate_hz) + " Hz"),
      frequency_hz_(frequency_hz), sample_rate_hz_(sample_rate_hz)
{
}

DivisionError::DivisionError(std::size_t sample_index)
    : Error("division_by_zero",
            "denominator is numerically zero at sample " + std::to_string(sample_index)),
      sample_index_(sample_index)
{
}

SampleGrid::SampleGrid(double fs, std::size_t n) : sample_rate_hz(fs), n_samples(n)
{
    if (!(fs > 0.0) || !std::isfinite(fs)) {
        throw InvalidArgument("sample rate must be positive and finite");
    }
    if (n < 2) {
        throw InvalidArgument("a sample grid needs at least 2 samples");
    }
}

SampleGrid SampleGrid::from_duration(double fs, double duration_s)
{
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw InvalidArgument("duration must be positive and finite");
    }
    return SampleGrid(fs, static_cast<std::size_t>(std::llround(fs * duration_s)));
}

SampledSignal::SampledSignal(std::vector<double> values, double fs, std::string unit_label)
    : samples(std::move(values)), sample_rate_hz(fs), unit(std::move(unit_label))
{
}

void SampledSignal::validate() const
{
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        throw InvalidArgument("sample rate must be positive and finite");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            throw InvalidArgument("sample " + std::to_string(i) + " is not finite");
        }
    }
}

namespace {
void require_same_shape(const SampledSignal& a, const SampledSignal& b)
{
    if (a.size() != b.size()) {
        throw DimensionMismatch("signal lengths differ: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
    }
    if (a.sample_rate_hz != b.sample_rate_hz) {
        throw DimensionMismatch("signal sample rates differ");
    }
}
} // namespace

SampledSignal operator+(const SampledSignal& a, const SampledSignal& b)
{
    require_same_shape(a, b);
    SampledSignal out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.samples[i] += b.samples[i];
    }
    return out;
}

SampledSignal operator-(const SampledSignal& a, const SampledSignal& b)
{
    require_same_shape(a, b);
    SampledSignal out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.samples[i] -= b.samples[i];
    }
    return out;
}

SampledSignal operator*(double gain, const SampledSignal& s)
{
    SampledSignal out = s;
    for (double& v : out.samples) {
        v *= gain;
    }
    return out;
}

double energy(std::span<const double> x) noexcept
{
    double e = 0.0;
    for (double v : x) {
        e += v * v;
    }
    return e;
}

double mean(std::span<const double> x) noexcept
{
    if (x.empty()) {
        return 0.0;
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double pearson_correlation(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.empty()) {
        throw DimensionMismatch("correlation needs two equal-length, non-empty series");
    }
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        return 0.0;
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace sigtext
