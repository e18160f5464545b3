#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sigtext {

// Uniform sampling grid; sample i sits at t_i = i / sample_rate_hz.
struct SampleGrid {
    double sample_rate_hz = 10000.0;
    std::size_t n_samples = 10000;

    SampleGrid() = default;
    SampleGrid(double fs, std::size_t n);

    static SampleGrid from_duration(double fs, double duration_s);

    double time(std::size_t i) const noexcept { return static_cast<double>(i) / sample_rate_hz; }
    double nyquist_hz() const noexcept { return 0.5 * sample_rate_hz; }
    double duration_s() const noexcept { return static_cast<double>(n_samples) / sample_rate_hz; }
    double resolution_hz() const noexcept { return sample_rate_hz / static_cast<double>(n_samples); }
};

struct SampledSignal {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    std::string unit = "mm/sec";

    SampledSignal() = default;
    SampledSignal(std::vector<double> values, double fs, std::string unit_label = "mm/sec");

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }
    std::span<const double> view() const noexcept { return samples; }
    SampleGrid grid() const { return SampleGrid(sample_rate_hz, samples.size()); }

    // Throws InvalidArgument on a non-positive rate or non-finite samples.
    void validate() const;
};

SampledSignal operator+(const SampledSignal& a, const SampledSignal& b);
SampledSignal operator-(const SampledSignal& a, const SampledSignal& b);
SampledSignal operator*(double gain, const SampledSignal& s);

double energy(std::span<const double> x) noexcept;
double mean(std::span<const double> x) noexcept;
double pearson_correlation(std::span<const double> a, std::span<const double> b);

} // namespace sigtext
