#include "sigtext/ssa.hpp"

#include "sigtext/error.hpp"
#include "sigtext/features.hpp"
#include "sigtext/fft.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigtext {

void SSAConfig::validate(std::size_t n_samples) const
{
    if (!(energy_fraction > 0.0 && energy_fraction <= 1.0)) {
        throw InvalidArgument("energy_fraction must lie in (0, 1]");
    }
    if (max_components_per_band < 1) {
        throw InvalidArgument("max_components_per_band must be >= 1");
    }
    if (max_window < 2) {
        throw InvalidArgument("max_window must be >= 2");
    }
    if (window_len != 0 && (window_len < 2 || window_len + 1 > n_samples)) {
        throw InvalidArgument("window length must satisfy 2 <= L <= N - 1");
    }
    if (window_len != 0 && 2 * window_len > n_samples) {
        throw InvalidArgument("signal length must be at least twice the window length");
    }
    if (n_samples < 4) {
        throw InvalidArgument("SSA needs at least 4 samples");
    }
    if (const auto* list = std::get_if<std::vector<Band>>(&bands)) {
        for (const Band& b : *list) {
            if (!(b.half_width_hz > 0.0) || !std::isfinite(b.center_hz) || !std::isfinite(b.half_width_hz)) {
                throw InvalidArgument("band half-width must be positive and finite");
            }
        }
    } else if (std::get<AutoBands>(bands).top_k < 1) {
        throw InvalidArgument("automatic band selection needs top_k >= 1");
    }
}

Eigen::MatrixXd hankel_embed(const SampledSignal& signal, std::size_t window_len)
{
    const std::size_t n = signal.size();
    if (window_len < 2 || window_len + 1 > n) {
        throw InvalidArgument("window length must satisfy 2 <= L <= N - 1");
    }
    const std::size_t k = n - window_len + 1;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(window_len), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < window_len; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = signal.samples[i + j];
        }
    }
    return m;
}

SampledSignal diagonal_average(const Eigen::MatrixXd& m, double sample_rate_hz)
{
    const auto rows = static_cast<std::size_t>(m.rows());
    const auto cols = static_cast<std::size_t>(m.cols());
    if (rows == 0 || cols == 0) {
        return SampledSignal({}, sample_rate_hz);
    }
    std::vector<double> sum(rows + cols - 1, 0.0);
    std::vector<double> count(rows + cols - 1, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            sum[i + j] += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            count[i + j] += 1.0;
        }
    }
    for (std::size_t s = 0; s < sum.size(); ++s) {
        sum[s] /= count[s];
    }
    return SampledSignal(std::move(sum), sample_rate_hz);
}

std::size_t default_window_len(std::size_t n_samples, double sample_rate_hz, const SSAConfig& config)
{
    std::size_t l = n_samples / 2;
    if (const auto* list = std::get_if<std::vector<Band>>(&config.bands); list != nullptr && !list->empty()) {
        double narrowest = std::numeric_limits<double>::infinity();
        for (const Band& b : *list) {
            narrowest = std::min(narrowest, b.half_width_hz);
        }
        l = std::min(l, static_cast<std::size_t>(std::floor(sample_rate_hz / narrowest)));
    }
    l = std::min(l, config.max_window);
    return std::max<std::size_t>(l, 2);
}

double dominant_frequency(std::span<const double> v, double sample_rate_hz)
{
    if (v.empty()) {
        return 0.0;
    }
    std::vector<double> padded(4 * v.size(), 0.0);
    std::copy(v.begin(), v.end(), padded.begin());
    const auto bins = fft::forward_real(padded);
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const double mag = std::abs(bins[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    return static_cast<double>(best) * sample_rate_hz / static_cast<double>(padded.size());
}

namespace {

// Lag-covariance X X^T of the L x K trajectory matrix, via the Hankel recurrence
// C[i+1][j+1] = C[i][j] - x[i] x[j] + x[i+K] x[j+K].
Eigen::MatrixXd hankel_gram(std::span<const double> x, std::size_t l)
{
    const std::size_t k = x.size() - l + 1;
    Eigen::MatrixXd c(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
    for (std::size_t j = 0; j < l; ++j) {
        double acc = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
            acc += x[t] * x[t + j];
        }
        c(0, static_cast<Eigen::Index>(j)) = acc;
    }
    for (std::size_t i = 0; i + 1 < l; ++i) {
        for (std::size_t j = i; j + 1 < l; ++j) {
            c(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(j + 1)) =
                c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - x[i] * x[j] + x[i + k] * x[j + k];
        }
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        }
    }
    return c;
}

std::vector<Band> auto_bands(const SampledSignal& signal, std::size_t l, std::size_t top_k)
{
    if (signal.size() < 16) {
        return {};
    }
    const Spectrum spec = spectrum(signal, Window::Rectangular);
    const double half_width = std::max(2.0 * signal.sample_rate_hz / static_cast<double>(l), 3.0 * spec.resolution_hz);
    std::vector<Band> out;
    for (const Peak& p : top_peaks(spec, top_k)) {
        out.push_back(Band{p.freq_hz, half_width});
    }
    return out;
}

} // namespace

HankelDecomposition ssa_decompose(const SampledSignal& signal, const SSAConfig& config)
{
    signal.validate();
    config.validate(signal.size());
    const std::size_t n = signal.size();
    const std::size_t l = config.window_len != 0 ? config.window_len
                                                 : default_window_len(n, signal.sample_rate_hz, config);
    if (2 * l > n) {
        throw InvalidArgument("signal length must be at least twice the window length");
    }
    const std::size_t k = n - l + 1;
    const double fs = signal.sample_rate_hz;

    HankelDecomposition out;
    out.window_len = l;

    const Eigen::MatrixXd gram = hankel_gram(signal.samples, l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw InvalidArgument("eigendecomposition of the lag covariance did not converge");
    }
    const auto& evals = solver.eigenvalues();
    const auto& evecs = solver.eigenvectors();
    const auto li = static_cast<Eigen::Index>(l);

    std::vector<Eigen::VectorXd> u(l);
    out.singular_values.resize(l);
    out.dominant_freqs_hz.resize(l);
    for (std::size_t i = 0; i < l; ++i) {
        const Eigen::Index col = li - 1 - static_cast<Eigen::Index>(i);
        u[i] = evecs.col(col);
        out.singular_values[i] = std::sqrt(std::max(0.0, evals(col)));
    }
    const double sigma_floor = 1e-12 * out.singular_values.front();
    for (std::size_t i = 0; i < l; ++i) {
        if (out.singular_values[i] <= sigma_floor || out.singular_values.front() == 0.0) {
            out.dominant_freqs_hz[i] = std::numeric_limits<double>::quiet_NaN();
        } else {
            out.dominant_freqs_hz[i] = dominant_frequency(std::span<const double>(u[i].data(), l), fs);
        }
    }

    std::vector<Band> bands;
    if (const auto* list = std::get_if<std::vector<Band>>(&config.bands)) {
        bands = *list;
    } else {
        bands = auto_bands(signal, l, std::get<AutoBands>(config.bands).top_k);
    }

    // Anti-diagonal counts for averaging an L x K rank-one sum.
    std::vector<double> counts(n);
    for (std::size_t s = 0; s < n; ++s) {
        counts[s] = static_cast<double>(std::min({s + 1, l, k, n - s}));
    }

    std::vector<bool> claimed(l, false);
    std::vector<double> residual = signal.samples;
    for (const Band& band : bands) {
        SSAComponent comp;
        comp.band = band;
        comp.dominant_freq_hz = band.center_hz;

        std::vector<std::size_t> candidates;
        double in_band_energy = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            const double f = out.dominant_freqs_hz[i];
            if (!claimed[i] && !std::isnan(f) && std::abs(f - band.center_hz) <= band.half_width_hz) {
                candidates.push_back(i);
                in_band_energy += out.singular_values[i] * out.singular_values[i];
            }
        }
        double kept = 0.0;
        for (std::size_t i : candidates) {
            if (comp.index_set.size() >= config.max_components_per_band ||
                kept >= config.energy_fraction * in_band_energy) {
                break;
            }
            comp.index_set.push_back(i);
            comp.singular_values.push_back(out.singular_values[i]);
            kept += out.singular_values[i] * out.singular_values[i];
            claimed[i] = true;
        }

        std::vector<double> series(n, 0.0);
        if (comp.index_set.empty()) {
            comp.empty_band = true;
        } else {
            comp.dominant_freq_hz = out.dominant_freqs_hz[comp.index_set.front()];
            for (std::size_t i : comp.index_set) {
                // v = X^T u, i.e. v[j] = sum_a u[a] x[a + j], then the anti-diagonal sums of u v^T.
                std::vector<double> u_rev(u[i].data(), u[i].data() + l);
                std::reverse(u_rev.begin(), u_rev.end());
                const auto corr = fft::convolve(u_rev, signal.samples);
                const std::vector<double> v(corr.begin() + static_cast<std::ptrdiff_t>(l - 1),
                                            corr.begin() + static_cast<std::ptrdiff_t>(l - 1 + k));
                const auto sums = fft::convolve(std::span<const double>(u[i].data(), l), v);
                for (std::size_t s = 0; s < n; ++s) {
                    series[s] += sums[s];
                }
            }
            for (std::size_t s = 0; s < n; ++s) {
                series[s] /= counts[s];
                residual[s] -= series[s];
            }
        }
        comp.series = SampledSignal(std::move(series), fs, signal.unit);
        out.components.push_back(std::move(comp));
    }
    out.residual = SampledSignal(std::move(residual), fs, signal.unit);
    return out;
}

DenoiseResult denoise(const SampledSignal& signal, const SSAConfig& config)
{
    DenoiseResult r;
    r.decomposition = ssa_decompose(signal, config);
    std::vector<double> clean(signal.size(), 0.0);
    for (const auto& c : r.decomposition.components) {
        for (std::size_t s = 0; s < clean.size(); ++s) {
            clean[s] += c.series.samples[s];
        }
    }
    std::vector<double> residual(signal.size());
    for (std::size_t s = 0; s < residual.size(); ++s) {
        residual[s] = signal.samples[s] - clean[s];
    }
    r.clean = SampledSignal(std::move(clean), signal.sample_rate_hz, signal.unit);
    r.residual = SampledSignal(std::move(residual), signal.sample_rate_hz, signal.unit);
    return r;
}

} // namespace sigtext
