#pragma once

#include "sigtext/signal.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <variant>
#include <vector>

namespace sigtext {

// Frequency band [center - half_width, center + half_width].
struct Band {
    double center_hz = 0.0;
    double half_width_hz = 0.0;
};

// Bands centred on the top_k significant spectral peaks of the input.
struct AutoBands {
    std::size_t top_k = 3;
};

struct SSAConfig {
    std::size_t window_len = 0;  // 0 selects the default window
    std::variant<std::vector<Band>, AutoBands> bands = AutoBands{};
    double energy_fraction = 0.95;
    std::size_t max_components_per_band = 8;
    std::size_t max_window = 1024;  // cap on the default window only

    // Throws InvalidArgument for a malformed config or one unusable on n samples.
    void validate(std::size_t n_samples) const;
};

struct SSAComponent {
    Band band;
    std::vector<std::size_t> index_set;
    std::vector<double> singular_values;
    double dominant_freq_hz = 0.0;
    SampledSignal series;
    bool empty_band = false;
};

struct HankelDecomposition {
    std::size_t window_len = 0;
    std::vector<double> singular_values;  // every eigentriple, descending
    std::vector<double> dominant_freqs_hz;  // per eigentriple; NaN where sigma is numerically zero
    std::vector<SSAComponent> components;
    SampledSignal residual;
};

struct DenoiseResult {
    SampledSignal clean;
    SampledSignal residual;
    HankelDecomposition decomposition;
};

// L x (N - L + 1) trajectory matrix with entry (i, j) = x[i + j].
Eigen::MatrixXd hankel_embed(const SampledSignal& signal, std::size_t window_len);

// Mean over each anti-diagonal i + j = s of an L x K matrix.
SampledSignal diagonal_average(const Eigen::MatrixXd& m, double sample_rate_hz = 1.0);

// Window used when config.window_len == 0.
std::size_t default_window_len(std::size_t n_samples, double sample_rate_hz, const SSAConfig& config);

// Frequency of the largest |DFT| bin of v (zero-padded to at least 4 |v|); ties go to the lower frequency.
double dominant_frequency(std::span<const double> v, double sample_rate_hz);

HankelDecomposition ssa_decompose(const SampledSignal& signal, const SSAConfig& config);

DenoiseResult denoise(const SampledSignal& signal, const SSAConfig& config);

} // namespace sigtext
