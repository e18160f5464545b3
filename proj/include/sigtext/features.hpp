#pragma once

#include "sigtext/signal.hpp"

#include <optional>
#include <vector>

namespace sigtext {

enum class Window { Rectangular, Hann };

// Single-sided amplitude spectrum. An integer-period sinusoid of amplitude A
// shows up as a bin of amplitude A; Hann spectra are coherent-gain corrected.
struct Spectrum {
    std::vector<double> freqs_hz;
    std::vector<double> amplitudes;
    std::vector<double> phases_rad;  // arg of the DFT bin (cosine reference)
    double resolution_hz = 0.0;
    double sample_rate_hz = 0.0;
    std::size_t n_samples = 0;
    Window window = Window::Rectangular;

    std::size_t size() const noexcept { return amplitudes.size(); }
};

Spectrum spectrum(const SampledSignal& signal, Window window = Window::Rectangular);

// Mean power implied by a rectangular-window spectrum: A0^2 + sum A_k^2 / 2 (+ A_nyq^2).
double spectral_power(const Spectrum& spec);

struct TimeFeatures {
    double rms = 0.0;
    double mean = 0.0;
    std::optional<double> kurtosis;
    std::optional<double> linear_kurtosis;
    std::optional<double> margin;
    double min = 0.0;
    double max = 0.0;
    double peak_to_peak = 0.0;
    std::optional<double> skewness;
    double root_square_amplitude = 0.0;
    double absolute_mean = 0.0;
    double variance = 0.0;
    std::optional<double> waveform_indicator;
    double peak = 0.0;
};

TimeFeatures time_features(const SampledSignal& signal);

struct FreqStatFeatures {
    double rms = 0.0;
    std::optional<double> kurtosis;
    std::optional<double> linear_kurtosis;
    std::optional<double> gravity_center_freq_hz;
    double std_dev = 0.0;
    double mean = 0.0;
    std::optional<double> freq_variance;
    std::optional<double> freq_std_dev;
    double energy = 0.0;
};

FreqStatFeatures freq_features(const Spectrum& spec);

struct Peak {
    double freq_hz = 0.0;  // parabolically refined
    double amplitude = 0.0;
    std::size_t bin = 0;
};

using PeakList = std::vector<Peak>;

// max(3% of the largest amplitude, 5 x the median amplitude).
double significance_floor(const Spectrum& spec);

// Every local maximum above the floor (DC and the last bin excluded), by
// descending amplitude; equal amplitudes keep the lower frequency first.
PeakList significant_peaks(const Spectrum& spec);

PeakList top_peaks(const Spectrum& spec, std::size_t n = 5);

// Matching tolerance for order k around fundamental f0: max(0.02 f0, one bin).
double harmonic_tolerance(double f0_hz, double resolution_hz);

// True when hi is within tolerance of k * lo for some k in 1..max_order.
bool harmonically_related(double a_hz, double b_hz, double resolution_hz, unsigned max_order = 10);

struct HarmonicEntry {
    unsigned order = 1;
    double freq_hz = 0.0;
    double amplitude = 0.0;
    double phase_rad = 0.0;  // sine reference: A sin(2 pi f t + phase)
};

struct Subharmonic {
    double ratio = 0.5;
    double freq_hz = 0.0;
    double amplitude = 0.0;
};

struct HarmonicSeries {
    std::optional<double> fundamental_hz;
    std::vector<HarmonicEntry> entries;
    std::vector<Subharmonic> subharmonics;
    double tolerance_hz = 0.0;

    bool contains(double freq_hz) const noexcept;
};

HarmonicSeries detect_harmonics(const Spectrum& spec, std::optional<double> f0_hint = std::nullopt,
                                unsigned n1 = 10);

// Second family seeded at the strongest significant peak outside `primary`;
// empty when every significant peak belongs to the primary family.
HarmonicSeries secondary_harmonics(const Spectrum& spec, const HarmonicSeries& primary, unsigned n3 = 5);

struct SidebandLine {
    unsigned order = 1;
    double freq_hz = 0.0;
    double amplitude = 0.0;
};

struct SidebandPattern {
    double carrier_hz = 0.0;
    double carrier_amplitude = 0.0;
    double spacing_hz = 0.0;
    unsigned matched_pairs = 0;
    std::vector<SidebandLine> left;   // orders 1..5 that were found
    std::vector<SidebandLine> right;
};

// Patterns ordered by ascending carrier frequency.
std::vector<SidebandPattern> detect_sidebands(const Spectrum& spec, std::optional<double> carrier_hint = std::nullopt);

// Periodic-shock rule: kurtosis above this and an envelope line >= 6 dB over the median.
inline constexpr double kShockKurtosis = 4.0;
inline constexpr double kShockProminenceDb = 6.0;

struct WaveFeatures {
    std::optional<double> fundamental_period_s;
    std::optional<double> am_period_s;
    bool periodic_shock = false;
    double shock_strength = 0.0;  // dB of the strongest envelope line over the median
    std::optional<double> shock_freq_hz;
};

// Spectrum of the mean-removed analytic envelope.
Spectrum envelope_spectrum(const SampledSignal& signal);

WaveFeatures wave_features(const SampledSignal& signal);

} // namespace sigtext
