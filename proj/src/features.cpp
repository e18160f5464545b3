#include "sigtext/features.hpp"

#include "sigtext/error.hpp"
#include "sigtext/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sigtext {

namespace {

double wrap_phase(double p)
{
    p = std::remainder(p, 2.0 * std::numbers::pi);
    if (p <= -std::numbers::pi) {
        p += 2.0 * std::numbers::pi;
    }
    return p;
}

double median(std::vector<double> v)
{
    if (v.empty()) {
        return 0.0;
    }
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

} // namespace

Spectrum spectrum(const SampledSignal& signal, Window window)
{
    signal.validate();
    const std::size_t n = signal.size();
    if (n < 16) {
        throw InvalidArgument("spectrum needs at least 16 samples");
    }
    std::vector<double> x = signal.samples;
    double gain = 1.0;
    if (window == Window::Hann) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
            x[i] *= w;
            sum += w;
        }
        gain = sum / static_cast<double>(n);
    }
    const auto bins = fft::forward_real(x);
    Spectrum s;
    s.sample_rate_hz = signal.sample_rate_hz;
    s.n_samples = n;
    s.window = window;
    s.resolution_hz = signal.sample_rate_hz / static_cast<double>(n);
    s.freqs_hz.resize(bins.size());
    s.amplitudes.resize(bins.size());
    s.phases_rad.resize(bins.size());
    const double scale = 1.0 / (static_cast<double>(n) * gain);
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
        s.freqs_hz[k] = static_cast<double>(k) * s.resolution_hz;
        s.amplitudes[k] = (single ? 1.0 : 2.0) * std::abs(bins[k]) * scale;
        s.phases_rad[k] = std::arg(bins[k]);
    }
    return s;
}

double spectral_power(const Spectrum& spec)
{
    double p = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const bool single = k == 0 || (spec.n_samples % 2 == 0 && k + 1 == spec.size());
        const double a = spec.amplitudes[k];
        p += single ? a * a : 0.5 * a * a;
    }
    return p;
}

TimeFeatures time_features(const SampledSignal& signal)
{
    signal.validate();
    if (signal.empty()) {
        throw InvalidArgument("time features need a non-empty signal");
    }
    const auto& x = signal.samples;
    const double n = static_cast<double>(x.size());
    TimeFeatures f;
    f.min = *std::min_element(x.begin(), x.end());
    f.max = *std::max_element(x.begin(), x.end());
    f.peak_to_peak = f.max - f.min;
    f.peak = std::max(std::abs(f.min), std::abs(f.max));

    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_abs = 0.0;
    double sum_sqrt = 0.0;
    for (double v : x) {
        sum += v;
        sum_sq += v * v;
        sum_abs += std::abs(v);
        sum_sqrt += std::sqrt(std::abs(v));
    }
    f.mean = sum / n;
    f.rms = std::sqrt(sum_sq / n);
    f.absolute_mean = sum_abs / n;
    f.root_square_amplitude = (sum_sqrt / n) * (sum_sqrt / n);

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : x) {
        const double d = v - f.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    f.variance = m2;

    const double degenerate = 1e-12 * f.peak;
    if (m2 > degenerate * degenerate && m2 > 0.0) {
        f.kurtosis = m4 / (m2 * m2);
        f.linear_kurtosis = *f.kurtosis - 3.0;
        f.skewness = m3 / std::pow(m2, 1.5);
    }
    if (f.root_square_amplitude > 0.0) {
        f.margin = f.peak / f.root_square_amplitude;
    }
    if (f.absolute_mean > 0.0) {
        f.waveform_indicator = f.rms / f.absolute_mean;
    }
    return f;
}

FreqStatFeatures freq_features(const Spectrum& spec)
{
    FreqStatFeatures f;
    const auto& a = spec.amplitudes;
    if (a.empty()) {
        return f;
    }
    const double n = static_cast<double>(a.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_fa = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += a[k];
        sum_sq += a[k] * a[k];
        sum_fa += spec.freqs_hz[k] * a[k];
    }
    f.mean = sum / n;
    f.rms = std::sqrt(sum_sq / n);
    f.energy = sum_sq;

    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : a) {
        const double d = v - f.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    f.std_dev = std::sqrt(m2);
    if (m2 > 0.0) {
        f.kurtosis = m4 / (m2 * m2);
        f.linear_kurtosis = *f.kurtosis - 3.0;
    }
    if (sum > 0.0) {
        const double fc = sum_fa / sum;
        double var = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = spec.freqs_hz[k] - fc;
            var += d * d * a[k];
        }
        var /= sum;
        f.gravity_center_freq_hz = fc;
        f.freq_variance = var;
        f.freq_std_dev = std::sqrt(var);
    }
    return f;
}

double significance_floor(const Spectrum& spec)
{
    if (spec.amplitudes.empty()) {
        return 0.0;
    }
    const double max_a = *std::max_element(spec.amplitudes.begin(), spec.amplitudes.end());
    return std::max(0.03 * max_a, 5.0 * median(spec.amplitudes));
}

PeakList significant_peaks(const Spectrum& spec)
{
    PeakList out;
    const auto& a = spec.amplitudes;
    if (a.size() < 3) {
        return out;
    }
    const double floor = significance_floor(spec);
    for (std::size_t k = 1; k + 1 < a.size(); ++k) {
        if (a[k] > floor && a[k] > 0.0 && a[k] > a[k - 1] && a[k] >= a[k + 1]) {
            double delta = 0.0;
            const double denom = a[k - 1] - 2.0 * a[k] + a[k + 1];
            if (denom < 0.0) {
                delta = std::clamp(0.5 * (a[k - 1] - a[k + 1]) / denom, -0.5, 0.5);
            }
            out.push_back(Peak{(static_cast<double>(k) + delta) * spec.resolution_hz, a[k], k});
        }
    }
    // Amplitudes equal up to roundoff count as ties and keep ascending frequency.
    std::stable_sort(out.begin(), out.end(), [](const Peak& p, const Peak& q) {
        return p.amplitude - q.amplitude > 1e-9 * std::max(p.amplitude, q.amplitude);
    });
    return out;
}

PeakList top_peaks(const Spectrum& spec, std::size_t n)
{
    auto peaks = significant_peaks(spec);
    if (peaks.size() > n) {
        peaks.resize(n);
    }
    return peaks;
}

double harmonic_tolerance(double f0_hz, double resolution_hz)
{
    return std::max(0.02 * f0_hz, resolution_hz);
}

bool harmonically_related(double a_hz, double b_hz, double resolution_hz, unsigned max_order)
{
    const double lo = std::min(a_hz, b_hz);
    const double hi = std::max(a_hz, b_hz);
    if (!(lo > 0.0)) {
        return false;
    }
    const double tol = harmonic_tolerance(lo, resolution_hz);
    for (unsigned k = 1; k <= max_order; ++k) {
        if (std::abs(hi - k * lo) <= tol) {
            return true;
        }
    }
    return false;
}

bool HarmonicSeries::contains(double freq_hz) const noexcept
{
    for (const auto& e : entries) {
        if (std::abs(e.freq_hz - freq_hz) <= 1e-9 * std::max(1.0, freq_hz)) {
            return true;
        }
    }
    return false;
}

namespace {

// Nearest significant peak within tol of target.
const Peak* line_near(const PeakList& peaks, double target, double tol)
{
    const Peak* best = nullptr;
    for (const Peak& p : peaks) {
        const double d = std::abs(p.freq_hz - target);
        if (d <= tol && (best == nullptr || d < std::abs(best->freq_hz - target))) {
            best = &p;
        }
    }
    return best;
}

struct FamilyScore {
    std::size_t members = 0;
    double amplitude = 0.0;
};

FamilyScore score_family(const PeakList& peaks, double f0, double res, unsigned n1)
{
    FamilyScore s;
    const double tol = harmonic_tolerance(f0, res);
    for (unsigned k = 1; k <= n1; ++k) {
        if (const Peak* p = line_near(peaks, k * f0, tol)) {
            ++s.members;
            s.amplitude += p->amplitude;
        }
    }
    return s;
}

HarmonicSeries build_series(const Spectrum& spec, const PeakList& peaks, double f0, unsigned n1)
{
    HarmonicSeries h;
    h.fundamental_hz = f0;
    h.tolerance_hz = harmonic_tolerance(f0, spec.resolution_hz);
    for (unsigned k = 1; k <= n1; ++k) {
        if (const Peak* p = line_near(peaks, k * f0, h.tolerance_hz)) {
            h.entries.push_back(HarmonicEntry{k, p->freq_hz, p->amplitude,
                                              wrap_phase(spec.phases_rad[p->bin] + 0.5 * std::numbers::pi)});
        }
    }
    for (unsigned k = 0; k < n1; ++k) {
        const double ratio = k + 0.5;
        if (const Peak* p = line_near(peaks, ratio * f0, h.tolerance_hz)) {
            h.subharmonics.push_back(Subharmonic{ratio, p->freq_hz, p->amplitude});
        }
    }
    return h;
}

} // namespace

HarmonicSeries detect_harmonics(const Spectrum& spec, std::optional<double> f0_hint, unsigned n1)
{
    if (n1 < 1) {
        throw InvalidArgument("harmonic order limit must be >= 1");
    }
    const PeakList peaks = significant_peaks(spec);
    if (f0_hint) {
        if (!(*f0_hint > 0.0)) {
            throw InvalidArgument("fundamental hint must be positive");
        }
        return build_series(spec, peaks, *f0_hint, n1);
    }
    if (peaks.empty()) {
        return {};
    }
    const Peak* best = nullptr;
    FamilyScore best_score;
    for (const Peak& p : peaks) {
        const FamilyScore s = score_family(peaks, p.freq_hz, spec.resolution_hz, n1);
        bool better = false;
        if (best == nullptr) {
            better = true;
        } else if ((s.members >= 2) != (best_score.members >= 2)) {
            better = s.members >= 2;
        } else if (s.amplitude != best_score.amplitude) {
            better = s.amplitude > best_score.amplitude;
        } else {
            better = p.freq_hz < best->freq_hz;
        }
        if (better) {
            best = &p;
            best_score = s;
        }
    }
    return build_series(spec, peaks, best->freq_hz, n1);
}

HarmonicSeries secondary_harmonics(const Spectrum& spec, const HarmonicSeries& primary, unsigned n3)
{
    const PeakList peaks = significant_peaks(spec);
    for (const Peak& p : peaks) {
        bool taken = primary.contains(p.freq_hz);
        for (const auto& s : primary.subharmonics) {
            taken = taken || std::abs(s.freq_hz - p.freq_hz) <= 1e-9 * std::max(1.0, p.freq_hz);
        }
        if (!taken) {
            return build_series(spec, peaks, p.freq_hz, n3);
        }
    }
    return {};
}

namespace {

constexpr unsigned kSidebandOrders = 5;
constexpr double kSidebandBalance = 4.0;

double sideband_tolerance(double spacing, double res)
{
    return std::max(res, 0.02 * spacing);
}

// True when carrier and spacing are both low-order multiples of an existing line,
// i.e. the "sidebands" are members of an ordinary harmonic family.
bool explained_by_family(const PeakList& peaks, double carrier, double spacing, double res)
{
    for (const Peak& f : peaks) {
        if (f.freq_hz > spacing + sideband_tolerance(spacing, res)) {
            continue;
        }
        const double tol = harmonic_tolerance(f.freq_hz, res);
        const double jc = std::round(carrier / f.freq_hz);
        const double jd = std::round(spacing / f.freq_hz);
        if (jc >= 1.0 && jc <= 10.0 && jd >= 1.0 && std::abs(carrier - jc * f.freq_hz) <= tol &&
            std::abs(spacing - jd * f.freq_hz) <= tol) {
            return true;
        }
    }
    return false;
}

std::optional<SidebandPattern> match_pattern(const PeakList& peaks, const Peak& carrier, double spacing, double res)
{
    const double tol = sideband_tolerance(spacing, res);
    SidebandPattern pat;
    pat.carrier_hz = carrier.freq_hz;
    pat.carrier_amplitude = carrier.amplitude;
    pat.spacing_hz = spacing;
    for (unsigned m = 1; m <= kSidebandOrders; ++m) {
        const Peak* l = line_near(peaks, carrier.freq_hz - m * spacing, tol);
        const Peak* r = line_near(peaks, carrier.freq_hz + m * spacing, tol);
        if (l == &carrier) {
            l = nullptr;
        }
        if (r == &carrier) {
            r = nullptr;
        }
        if (m == 1) {
            if (l == nullptr || r == nullptr) {
                return std::nullopt;
            }
            if (carrier.amplitude < l->amplitude || carrier.amplitude < r->amplitude) {
                return std::nullopt;
            }
        }
        if (l != nullptr) {
            pat.left.push_back(SidebandLine{m, l->freq_hz, l->amplitude});
        }
        if (r != nullptr) {
            pat.right.push_back(SidebandLine{m, r->freq_hz, r->amplitude});
        }
        if (l != nullptr && r != nullptr) {
            const double hi = std::max(l->amplitude, r->amplitude);
            const double lo = std::min(l->amplitude, r->amplitude);
            if (hi <= kSidebandBalance * lo) {
                ++pat.matched_pairs;
            } else if (m == 1) {
                return std::nullopt;
            }
        }
    }
    return pat;
}

} // namespace

std::vector<SidebandPattern> detect_sidebands(const Spectrum& spec, std::optional<double> carrier_hint)
{
    const PeakList peaks = significant_peaks(spec);
    const double res = spec.resolution_hz;
    std::vector<const Peak*> carriers;
    if (carrier_hint) {
        if (const Peak* p = line_near(peaks, *carrier_hint, harmonic_tolerance(*carrier_hint, res))) {
            carriers.push_back(p);
        }
    } else {
        for (const Peak& p : peaks) {
            carriers.push_back(&p);
        }
    }

    std::vector<SidebandPattern> out;
    for (const Peak* c : carriers) {
        bool is_sideband = false;
        for (const auto& pat : out) {
            const double tol = sideband_tolerance(pat.spacing_hz, res);
            for (const auto* side : {&pat.left, &pat.right}) {
                for (const auto& line : *side) {
                    is_sideband = is_sideband || std::abs(line.freq_hz - c->freq_hz) <= tol;
                }
            }
        }
        if (is_sideband) {
            continue;
        }
        std::optional<SidebandPattern> best;
        for (const Peak& p : peaks) {
            const double d = std::abs(p.freq_hz - c->freq_hz);
            if (&p == c || d < 2.0 * res || d >= c->freq_hz) {
                continue;
            }
            if (explained_by_family(peaks, c->freq_hz, d, res)) {
                continue;
            }
            auto pat = match_pattern(peaks, *c, d, res);
            if (!pat || pat->matched_pairs < 1) {
                continue;
            }
            if (!best || pat->matched_pairs > best->matched_pairs ||
                (pat->matched_pairs == best->matched_pairs && d < best->spacing_hz)) {
                best = std::move(pat);
            }
        }
        if (best) {
            out.push_back(std::move(*best));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const SidebandPattern& a, const SidebandPattern& b) { return a.carrier_hz < b.carrier_hz; });
    return out;
}

namespace {

// Lag of the first autocorrelation maximum reaching `threshold` after the initial dip.
std::optional<double> first_prominent_lag(std::span<const double> x, double threshold)
{
    const std::size_t n = x.size();
    if (n < 8) {
        return std::nullopt;
    }
    const double m = mean(x);
    std::vector<double> centred(x.begin(), x.end());
    for (double& v : centred) {
        v -= m;
    }
    auto r = fft::autocorrelation(centred);
    if (!(r[0] > 0.0)) {
        return std::nullopt;
    }
    const double r0 = r[0];
    for (double& v : r) {
        v /= r0;
    }
    const std::size_t limit = n / 2;
    std::size_t k = 1;
    while (k < limit && r[k] <= r[k - 1]) {
        ++k;
    }
    for (; k + 1 < limit; ++k) {
        if (r[k] >= threshold && r[k] >= r[k - 1] && r[k] > r[k + 1]) {
            const double denom = r[k - 1] - 2.0 * r[k] + r[k + 1];
            double delta = 0.0;
            if (denom < 0.0) {
                delta = std::clamp(0.5 * (r[k - 1] - r[k + 1]) / denom, -0.5, 0.5);
            }
            return static_cast<double>(k) + delta;
        }
    }
    return std::nullopt;
}

std::vector<double> centred_envelope(const SampledSignal& signal, double* env_mean, double* env_std)
{
    auto env = fft::analytic_envelope(signal.samples);
    const double m = mean(env);
    double var = 0.0;
    for (double& v : env) {
        v -= m;
        var += v * v;
    }
    if (env_mean != nullptr) {
        *env_mean = m;
    }
    if (env_std != nullptr) {
        *env_std = std::sqrt(var / static_cast<double>(env.size()));
    }
    return env;
}

} // namespace

Spectrum envelope_spectrum(const SampledSignal& signal)
{
    signal.validate();
    SampledSignal env(centred_envelope(signal, nullptr, nullptr), signal.sample_rate_hz, signal.unit);
    return spectrum(env, Window::Rectangular);
}

WaveFeatures wave_features(const SampledSignal& signal)
{
    signal.validate();
    if (signal.size() < 64) {
        throw InvalidArgument("wave features need at least 64 samples");
    }
    const double fs = signal.sample_rate_hz;
    WaveFeatures w;
    if (auto lag = first_prominent_lag(signal.samples, 0.5)) {
        w.fundamental_period_s = *lag / fs;
    }

    double env_mean = 0.0;
    double env_std = 0.0;
    const auto env = centred_envelope(signal, &env_mean, &env_std);
    if (env_mean > 0.0 && env_std > 1e-3 * env_mean) {
        if (auto lag = first_prominent_lag(env, 0.5)) {
            w.am_period_s = *lag / fs;
        }
        const Spectrum es = spectrum(SampledSignal(env, fs, signal.unit), Window::Rectangular);
        std::vector<double> body(es.amplitudes.begin() + 1, es.amplitudes.end());
        const auto peak_it = std::max_element(body.begin(), body.end());
        const double med = median(body);
        const double peak = *peak_it;
        if (peak > 0.0) {
            const double ratio_db = med > 0.0 ? 20.0 * std::log10(peak / med) : 120.0;
            w.shock_strength = std::clamp(ratio_db, 0.0, 120.0);
            w.shock_freq_hz = es.freqs_hz[static_cast<std::size_t>(peak_it - body.begin()) + 1];
        }
    }
    const TimeFeatures tf = time_features(signal);
    w.periodic_shock = tf.kurtosis.has_value() && *tf.kurtosis > kShockKurtosis &&
                       w.shock_strength >= kShockProminenceDb;
    return w;
}

} // namespace sigtext
