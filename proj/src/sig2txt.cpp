#include "sigtext/sig2txt.hpp"

#include "sigtext/error.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace sigtext {

std::string to_string(SignalKind kind)
{
    switch (kind) {
    case SignalKind::SingleHarmonic: return "single_harmonic";
    case SignalKind::MultiHarmonic: return "multi_harmonic";
    case SignalKind::RandomHarmonic: return "random_harmonic";
    case SignalKind::CompositeHarmonic: return "composite_harmonic";
    case SignalKind::AmplitudeModulated: return "amplitude_modulated";
    case SignalKind::Unknown: return "unknown";
    }
    return "unknown";
}

SignalKind signal_kind_from_string(const std::string& name)
{
    for (SignalKind k : kAllSignalKinds) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw InvalidArgument("unknown signal kind '" + name + "'");
}

std::string kind_label(SignalKind kind)
{
    switch (kind) {
    case SignalKind::SingleHarmonic: return "simple harmonic periodic signal";
    case SignalKind::MultiHarmonic: return "multi-harmonic periodic signal";
    case SignalKind::RandomHarmonic: return "random harmonic signal";
    case SignalKind::CompositeHarmonic: return "composite harmonic signal";
    case SignalKind::AmplitudeModulated: return "amplitude-modulated signal";
    case SignalKind::Unknown: return "signal outside the standard templates";
    }
    return "signal outside the standard templates";
}

SignalKind expected_kind(SignalClass generator_class) noexcept
{
    switch (generator_class) {
    case SignalClass::SingleHarmonic: return SignalKind::SingleHarmonic;
    case SignalClass::MultiHarmonic: return SignalKind::MultiHarmonic;
    case SignalClass::RandomHarmonic: return SignalKind::RandomHarmonic;
    case SignalClass::CompositeHarmonic: return SignalKind::CompositeHarmonic;
    case SignalClass::AmplitudeModulated:
    case SignalClass::Bearing:
    case SignalClass::Gear: return SignalKind::AmplitudeModulated;
    }
    return SignalKind::Unknown;
}

void DescribeConfig::validate() const
{
    if (precision.frequency < 1 || precision.amplitude < 1 || precision.period < 1 || precision.phase < 1) {
        throw InvalidArgument("precision must be at least 1 significant figure");
    }
    if (n1 < 1 || n2 < 1 || n3 < 1) {
        throw InvalidArgument("feature counts n1, n2, n3 must be >= 1");
    }
}

std::string format_sig(double value, int significant_figures)
{
    if (!std::isfinite(value)) {
        throw InvalidArgument("cannot format a non-finite value");
    }
    if (significant_figures < 1) {
        throw InvalidArgument("significant figures must be >= 1");
    }
    if (std::abs(value) < kFormatZero) {
        return "0";
    }
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
    const int decimals = significant_figures - 1 - magnitude;
    char buf[64];
    if (decimals <= 0) {
        const double step = std::pow(10.0, -decimals);
        std::snprintf(buf, sizeof buf, "%.0f", std::round(value / step) * step);
    } else {
        std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    }
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') {
            s.pop_back();
        }
        if (s.back() == '.') {
            s.pop_back();
        }
    }
    if (s == "-0") {
        s = "0";
    }
    return s;
}

FeatureBundle extract_features(const SampledSignal& signal, const DescribeConfig& config)
{
    config.validate();
    FeatureBundle b;
    b.unit = config.amplitude_unit.empty() ? signal.unit : config.amplitude_unit;
    b.spectrum = spectrum(signal, config.window);
    b.time = time_features(signal);
    b.freq = freq_features(b.spectrum);
    if (signal.size() >= 64) {
        b.wave = wave_features(signal);
    }
    b.peaks = significant_peaks(b.spectrum);
    b.harmonics = detect_harmonics(b.spectrum, std::nullopt, config.n1);
    b.secondary = secondary_harmonics(b.spectrum, b.harmonics, config.n3);
    b.sidebands = detect_sidebands(b.spectrum);
    return b;
}

SignalKind classify(const Spectrum& spec, const HarmonicSeries& harm, const std::vector<SidebandPattern>& side,
                    const PeakList& peaks)
{
    if (peaks.empty()) {
        return SignalKind::Unknown;
    }
    if (peaks.size() == 1) {
        return SignalKind::SingleHarmonic;
    }
    if (!side.empty()) {
        return SignalKind::AmplitudeModulated;
    }
    const double res = spec.resolution_hz;
    const bool family = harm.fundamental_hz.has_value() && harm.entries.size() >= 2;
    bool all_in_family = family;
    for (const Peak& p : peaks) {
        all_in_family = all_in_family && harm.contains(p.freq_hz);
    }
    if (all_in_family) {
        return SignalKind::MultiHarmonic;
    }
    bool any_related = false;
    for (std::size_t a = 0; a < peaks.size() && !any_related; ++a) {
        for (std::size_t b = a + 1; b < peaks.size() && !any_related; ++b) {
            any_related = harmonically_related(peaks[a].freq_hz, peaks[b].freq_hz, res);
        }
    }
    if (!any_related) {
        return SignalKind::RandomHarmonic;
    }
    if (family) {
        for (const Peak& p : peaks) {
            if (!harm.contains(p.freq_hz) && !harmonically_related(p.freq_hz, *harm.fundamental_hz, res)) {
                return SignalKind::CompositeHarmonic;
            }
        }
    }
    return SignalKind::Unknown;
}

namespace {

std::string ordinal_suffix(unsigned k)
{
    const unsigned tens = k % 100;
    const char* suffix = "th";
    if (tens < 11 || tens > 13) {
        switch (k % 10) {
        case 1: suffix = "st"; break;
        case 2: suffix = "nd"; break;
        case 3: suffix = "rd"; break;
        default: break;
        }
    }
    return std::to_string(k) + suffix;
}

std::string ordinal_word(unsigned k)
{
    static const char* words[] = {"first", "second", "third",   "fourth", "fifth",
                                  "sixth", "seventh", "eighth", "ninth",  "tenth"};
    return k >= 1 && k <= 10 ? words[k - 1] : ordinal_suffix(k);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

// Formats numbers per the configured precision and records each one.
class Writer {
public:
    Writer(const Precision& precision, Description& desc) : precision_(precision), desc_(desc) {}

    std::string num(const std::string& name, Quantity q, double value)
    {
        std::string text;
        switch (q) {
        case Quantity::Frequency: text = format_sig(value, precision_.frequency); break;
        case Quantity::Amplitude: text = format_sig(value, precision_.amplitude); break;
        case Quantity::Period: text = format_sig(value, precision_.period); break;
        case Quantity::Phase: text = format_sig(value, precision_.phase); break;
        case Quantity::Count: text = std::to_string(static_cast<long long>(std::llround(value))); break;
        }
        desc_.values.push_back(DescribedValue{name, q, value, text});
        return text;
    }

private:
    const Precision& precision_;
    Description& desc_;
};

const HarmonicEntry& fundamental_entry(const HarmonicSeries& h)
{
    if (!h.fundamental_hz || h.entries.empty() || h.entries.front().order != 1) {
        throw MissingFeature("harmonics.fundamental_hz");
    }
    return h.entries.front();
}

void note_period_mismatch(const FeatureBundle& f, double spectral_period, Description& d)
{
    if (f.wave.fundamental_period_s) {
        const double rel = std::abs(*f.wave.fundamental_period_s - spectral_period) / spectral_period;
        if (rel > 0.02) {
            d.notes.push_back("autocorrelation period " + format_sig(*f.wave.fundamental_period_s, 4) +
                              " s differs from the spectral period " + format_sig(spectral_period, 4) + " s by " +
                              format_sig(100.0 * rel, 3) + "%");
        }
    }
}

void render_single(const FeatureBundle& f, Writer& w, Description& d)
{
    const HarmonicEntry& e = fundamental_entry(f.harmonics);
    const std::string& u = f.unit;
    const double period = 1.0 / e.freq_hz;
    const std::string freq = w.num("frequency_hz", Quantity::Frequency, e.freq_hz);
    d.sections.composition = "This signal is a simple harmonic periodic signal.";
    d.sections.time_quant = "In the time-domain waveform of this signal, the period is " +
                            w.num("period_s", Quantity::Period, period) + " seconds, the amplitude is " +
                            w.num("time_amplitude", Quantity::Amplitude, 0.5 * f.time.peak_to_peak) + " " + u +
                            ", and the phase is " + w.num("phase_rad", Quantity::Phase, e.phase_rad) + " radians.";
    d.sections.freq_quant = "In the spectrum of this signal, the frequency is " + freq +
                            " Hz, the amplitude of the frequency is " +
                            w.num("amplitude", Quantity::Amplitude, e.amplitude) + " " + u + ", and the phase is " +
                            w.num("spectral_phase_rad", Quantity::Phase, e.phase_rad) + " radians.";
    d.sections.linking = "In the time-domain waveform of this signal, the waveform is a harmonic signal, so in the "
                         "frequency spectrum, only a single frequency of " +
                         freq + " Hz can be observed.";
    note_period_mismatch(f, period, d);
}

void render_multi(const FeatureBundle& f, Writer& w, Description& d)
{
    const HarmonicEntry& fund = fundamental_entry(f.harmonics);
    const std::string& u = f.unit;
    const double period = 1.0 / fund.freq_hz;
    d.sections.composition =
        "This signal is a multi-harmonic periodic signal, that is, a non-simple harmonic periodic signal.";
    d.sections.time_quant = "In the time-domain waveform of this signal, the signal period is " +
                            w.num("period_s", Quantity::Period, period) + " seconds, and the amplitude is " +
                            w.num("time_amplitude", Quantity::Amplitude, 0.5 * f.time.peak_to_peak) + " " + u + ".";
    std::vector<std::string> parts;
    std::string f0_text;
    for (const HarmonicEntry& e : f.harmonics.entries) {
        const std::string k = std::to_string(e.order);
        const std::string freq = w.num("harmonic_" + k + "_freq_hz", Quantity::Frequency, e.freq_hz);
        const std::string amp = w.num("harmonic_" + k + "_amplitude", Quantity::Amplitude, e.amplitude);
        const std::string ph = w.num("harmonic_" + k + "_phase_rad", Quantity::Phase, e.phase_rad);
        if (e.order == 1) {
            f0_text = freq;
            parts.push_back("the frequency of the fundamental (1st harmonic) is " + freq + " Hz, amplitude is " + amp +
                            " " + u + ", phase is " + ph + " radians");
        } else {
            parts.push_back("the frequency of the " + ordinal_suffix(e.order) + " harmonic is " + freq +
                            " Hz, amplitude is " + amp + " " + u + ", phase is " + ph + " radians");
        }
    }
    d.sections.freq_quant = "In the frequency spectrum of this signal, " + join(parts, "; ") + ".";
    d.sections.linking = "In the time-domain waveform of this signal, the waveform is distorted or asymmetric, that "
                         "is, non-simple harmonic but periodic, so in the frequency spectrum, harmonics of " +
                         f0_text + " Hz can be observed.";
    note_period_mismatch(f, period, d);
}

void render_random(const FeatureBundle& f, Writer& w, Description& d)
{
    const std::string& u = f.unit;
    d.sections.composition = "This signal is a random harmonic signal, that is, a signal obtained by superimposing "
                             "multiple random harmonic signals.";
    d.sections.time_quant = "In the time-domain waveform of this signal, the waveform is more complex and may be "
                            "periodic or non-periodic, which needs to be determined based on the relationships "
                            "between the random frequencies.";
    std::vector<std::string> parts;
    unsigned i = 0;
    for (const Peak& p : f.peaks) {
        ++i;
        const std::string k = std::to_string(i);
        parts.push_back("the " + ordinal_word(i) + " frequency is " +
                        w.num("random_" + k + "_freq_hz", Quantity::Frequency, p.freq_hz) + " Hz, amplitude is " +
                        w.num("random_" + k + "_amplitude", Quantity::Amplitude, p.amplitude) + " " + u);
    }
    d.sections.freq_quant = "In the frequency spectrum of this signal, " + join(parts, "; ") + ".";
    const std::string n = w.num("random_count", Quantity::Count, static_cast<double>(f.peaks.size()));
    d.sections.linking = "This signal is a superposition of " + n + " random harmonic components, so " + n +
                         " random frequencies can be observed in the frequency spectrum.";
}

std::vector<std::string> family_lines(const HarmonicSeries& h, const std::string& prefix, bool phase_on_fundamental,
                                      const std::string& u, Writer& w)
{
    std::vector<std::string> lines;
    for (const HarmonicEntry& e : h.entries) {
        const std::string k = std::to_string(e.order);
        const std::string freq = w.num(prefix + k + "_freq_hz", Quantity::Frequency, e.freq_hz);
        const std::string amp = w.num(prefix + k + "_amplitude", Quantity::Amplitude, e.amplitude);
        if (e.order == 1) {
            std::string line = "- Fundamental frequency: " + freq + " Hz, amplitude: " + amp + " " + u;
            if (phase_on_fundamental) {
                line += ", phase: " + w.num(prefix + k + "_phase_rad", Quantity::Phase, e.phase_rad) + " radians";
            }
            lines.push_back(line);
        } else {
            lines.push_back("- " + ordinal_suffix(e.order) + " harmonic: " + freq + " Hz, amplitude: " + amp + " " +
                            u + ", phase: " + w.num(prefix + k + "_phase_rad", Quantity::Phase, e.phase_rad) +
                            " radians");
        }
    }
    return lines;
}

std::string close_list(std::vector<std::string> lines)
{
    for (std::size_t i = 0; i < lines.size(); ++i) {
        lines[i] += i + 1 == lines.size() ? "." : ";";
    }
    return join(lines, "\n");
}

void render_composite(const FeatureBundle& f, Writer& w, Description& d)
{
    const std::string& u = f.unit;
    fundamental_entry(f.harmonics);
    const bool second_family = f.secondary.entries.size() >= 2 && f.secondary.entries.front().order == 1 &&
                               !f.harmonics.contains(f.secondary.entries.front().freq_hz);
    PeakList random;
    for (const Peak& p : f.peaks) {
        if (!f.harmonics.contains(p.freq_hz) && !(second_family && f.secondary.contains(p.freq_hz))) {
            random.push_back(p);
        }
    }
    d.sections.composition = "This signal is a composite harmonic signal, obtained by superimposing multi-harmonic "
                             "signals and random harmonic signals.";
    d.sections.time_quant = "In the time-domain waveform of this signal, the waveform is more complex, and the "
                            "amplitude is " +
                            w.num("time_amplitude", Quantity::Amplitude, 0.5 * f.time.peak_to_peak) + " " + u + ".";

    std::string text = "In the frequency spectrum of this signal:\n\nFor the first multi-harmonic signal:\n";
    text += close_list(family_lines(f.harmonics, "harmonic_", false, u, w));
    if (second_family) {
        text += "\n\nFor the second multi-harmonic signal:\n";
        text += close_list(family_lines(f.secondary, "secondary_", true, u, w));
    }
    if (!random.empty()) {
        std::vector<std::string> lines;
        unsigned i = 0;
        for (const Peak& p : random) {
            ++i;
            const std::string k = std::to_string(i);
            lines.push_back("- " + ordinal_suffix(i) + " frequency: " +
                            w.num("random_" + k + "_freq_hz", Quantity::Frequency, p.freq_hz) + " Hz, amplitude: " +
                            w.num("random_" + k + "_amplitude", Quantity::Amplitude, p.amplitude) + " " + u);
        }
        text += "\n\nRandom harmonic components:\n" + close_list(lines);
    }
    d.sections.freq_quant = text;

    const std::size_t n_fam = second_family ? 2 : 1;
    const std::string n = w.num("family_count", Quantity::Count, static_cast<double>(n_fam));
    const std::string m = w.num("random_count", Quantity::Count, static_cast<double>(random.size()));
    d.sections.linking = "This signal is a superposition of " + n +
                         (n_fam == 1 ? " multi-harmonic signal and " : " multi-harmonic signals and ") + m +
                         (random.size() == 1 ? " random harmonic component" : " random harmonic components") +
                         ", so multiple fundamental harmonics and random frequencies can be observed in the frequency "
                         "spectrum.";
}

std::vector<std::string> sideband_lists(const SidebandPattern& p, const std::string& prefix, Writer& w)
{
    std::vector<std::string> out;
    for (const auto& [side, lines] : {std::pair<std::string, const std::vector<SidebandLine>*>{"left", &p.left},
                                      std::pair<std::string, const std::vector<SidebandLine>*>{"right", &p.right}}) {
        std::vector<std::string> amps;
        for (const SidebandLine& l : *lines) {
            amps.push_back(w.num(prefix + side + "_" + std::to_string(l.order) + "_amplitude", Quantity::Amplitude,
                                 l.amplitude));
        }
        const std::string label = side == "left" ? "Left" : "Right";
        out.push_back("  - " + label + " sidebands amplitudes (first " + std::to_string(amps.size()) +
                      "): " + join(amps, ", "));
    }
    return out;
}

void render_am(const FeatureBundle& f, Writer& w, Description& d)
{
    if (f.sidebands.empty()) {
        throw MissingFeature("sidebands");
    }
    const std::string& u = f.unit;
    const SidebandPattern& main = f.sidebands.front();
    const HarmonicSeries carrier_family = detect_harmonics(f.spectrum, main.carrier_hz);
    const bool complex_carrier = carrier_family.entries.size() >= 2;

    const std::string ff = w.num("carrier_freq_hz", Quantity::Frequency, main.carrier_hz);
    const std::string bb = w.num("modulation_freq_hz", Quantity::Frequency, main.spacing_hz);
    d.sections.composition =
        complex_carrier ? "This signal is an amplitude-modulated signal, where the carrier is a non-simple harmonic "
                          "periodic signal, and the modulating wave is a simple harmonic signal."
                        : "This signal is an amplitude-modulated signal, where the carrier is a simple harmonic "
                          "signal, and the modulating wave is a simple harmonic signal.";
    d.sections.time_quant = "In the time-domain waveform of this signal, the carrier period is " +
                            w.num("carrier_period_s", Quantity::Period, 1.0 / main.carrier_hz) +
                            " seconds, and the amplitude modulation period is " +
                            w.num("modulation_period_s", Quantity::Period, 1.0 / main.spacing_hz) + " seconds.";
    if (f.wave.periodic_shock && f.wave.shock_freq_hz) {
        d.sections.time_quant += " Periodic impacts are present in the waveform, repeating every " +
                                 w.num("impact_period_s", Quantity::Period, 1.0 / *f.wave.shock_freq_hz) +
                                 " seconds (impact frequency " +
                                 w.num("impact_freq_hz", Quantity::Frequency, *f.wave.shock_freq_hz) + " Hz).";
    }

    std::vector<std::string> lines;
    lines.push_back("- Carrier fundamental frequency: " + ff + " Hz, amplitude: " +
                    w.num("carrier_amplitude", Quantity::Amplitude, main.carrier_amplitude) + " " + u + ";");
    lines.push_back("- Modulation frequency: " + bb + " Hz;");
    lines.push_back("- Sidebands appear on both sides of the carrier frequency " + ff + " Hz at intervals of " + bb +
                    " Hz.");
    for (auto& l : sideband_lists(main, "sideband_1_", w)) {
        lines.push_back(l + ";");
    }
    for (std::size_t i = 1; i < f.sidebands.size(); ++i) {
        const SidebandPattern& p = f.sidebands[i];
        const std::string idx = std::to_string(i + 1);
        const double ratio = p.carrier_hz / main.carrier_hz;
        const auto k = static_cast<unsigned>(std::llround(ratio));
        const std::string spacing =
            w.num("sideband_" + idx + "_spacing_hz", Quantity::Frequency, p.spacing_hz);
        std::string where;
        if (k >= 2 && std::abs(p.carrier_hz - k * main.carrier_hz) <= harmonic_tolerance(main.carrier_hz, f.spectrum.resolution_hz)) {
            where = "around the " + ordinal_word(k) + " harmonic " + std::to_string(k) + " × " + ff + " Hz";
        } else {
            where = "around the carrier frequency " +
                    w.num("sideband_" + idx + "_carrier_hz", Quantity::Frequency, p.carrier_hz) + " Hz";
        }
        lines.push_back("- Sidebands also appear " + where + " at intervals of " + spacing + " Hz.");
        for (auto& l : sideband_lists(p, "sideband_" + idx + "_", w)) {
            lines.push_back(l + ";");
        }
    }
    lines.back().back() = '.';
    d.sections.freq_quant = "In the frequency spectrum of this signal:\n" + join(lines, "\n");
    d.sections.linking =
        complex_carrier ? "The carrier waveform in the time domain is distorted and asymmetric, indicating a "
                          "non-simple harmonic signal; therefore, harmonics at " +
                              ff + " Hz and sidebands at intervals of " + bb + " Hz are visible in the spectrum."
                        : "The carrier waveform in the time domain is a simple harmonic whose amplitude varies "
                          "periodically; therefore, a carrier line at " +
                              ff + " Hz and sidebands at intervals of " + bb + " Hz are visible in the spectrum.";
}

void render_unknown(const FeatureBundle& f, Writer& w, Description& d)
{
    const std::string& u = f.unit;
    d.sections.composition = "This signal does not match any of the standard signal templates.";
    d.sections.time_quant = "In the time-domain waveform of this signal, the peak-to-peak value is " +
                            w.num("peak_to_peak", Quantity::Amplitude, f.time.peak_to_peak) + " " + u +
                            " and the RMS value is " + w.num("rms", Quantity::Amplitude, f.time.rms) + " " + u + ".";
    if (f.peaks.empty()) {
        d.sections.freq_quant = "In the frequency spectrum of this signal, no significant spectral content is present.";
        d.sections.linking = "The waveform carries no significant periodic component, so no spectral line can be "
                             "observed.";
        return;
    }
    std::vector<std::string> parts;
    unsigned i = 0;
    for (const Peak& p : f.peaks) {
        ++i;
        const std::string k = std::to_string(i);
        parts.push_back(w.num("peak_" + k + "_freq_hz", Quantity::Frequency, p.freq_hz) + " Hz (amplitude " +
                        w.num("peak_" + k + "_amplitude", Quantity::Amplitude, p.amplitude) + " " + u + ")");
    }
    d.sections.freq_quant = "In the frequency spectrum of this signal, the significant frequencies are " +
                            join(parts, ", ") + ".";
    d.sections.linking = "The spectral lines do not form a single harmonic family or a modulation pattern, so no "
                         "standard template applies.";
}

} // namespace

Description render_description(SignalKind kind, const FeatureBundle& features, const DescribeConfig& config)
{
    config.validate();
    Description d;
    d.kind = kind;
    Writer w(config.precision, d);
    switch (kind) {
    case SignalKind::SingleHarmonic: render_single(features, w, d); break;
    case SignalKind::MultiHarmonic: render_multi(features, w, d); break;
    case SignalKind::RandomHarmonic: render_random(features, w, d); break;
    case SignalKind::CompositeHarmonic: render_composite(features, w, d); break;
    case SignalKind::AmplitudeModulated: render_am(features, w, d); break;
    case SignalKind::Unknown: render_unknown(features, w, d); break;
    }
    d.rendered_text = d.sections.composition + "\n" + d.sections.time_quant + "\n" + d.sections.freq_quant + "\n" +
                      d.sections.linking;
    return d;
}

namespace {

template <typename F>
auto stage(const char* name, F&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

} // namespace

Description sig2txt(const SampledSignal& signal, const DescribeConfig& config)
{
    stage("input", [&] {
        signal.validate();
        config.validate();
        return 0;
    });
    SampledSignal x = signal;
    if (config.denoise_first) {
        x = stage("denoise", [&] { return denoise(signal, config.ssa).clean; });
    }
    const FeatureBundle features = stage("features", [&] { return extract_features(x, config); });
    const SignalKind kind =
        stage("classify", [&] { return classify(features.spectrum, features.harmonics, features.sidebands, features.peaks); });
    return stage("render", [&] { return render_description(kind, features, config); });
}

} // namespace sigtext
