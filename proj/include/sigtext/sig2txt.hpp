#pragma once

#include "sigtext/features.hpp"
#include "sigtext/siggen.hpp"
#include "sigtext/ssa.hpp"

#include <string>
#include <vector>

namespace sigtext {

enum class SignalKind {
    SingleHarmonic,
    MultiHarmonic,
    RandomHarmonic,
    CompositeHarmonic,
    AmplitudeModulated,
    Unknown,
};

inline constexpr SignalKind kAllSignalKinds[] = {
    SignalKind::SingleHarmonic,     SignalKind::MultiHarmonic,      SignalKind::RandomHarmonic,
    SignalKind::CompositeHarmonic,  SignalKind::AmplitudeModulated, SignalKind::Unknown,
};

std::string to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);

// Plain-English class name, e.g. "multi-harmonic periodic signal".
std::string kind_label(SignalKind kind);

// Template class a generator class is expected to be described with.
// Bearing and gear signals are modulated, so they map to AmplitudeModulated.
SignalKind expected_kind(SignalClass generator_class) noexcept;

// Significant figures per quantity class.
struct Precision {
    int frequency = 4;
    int amplitude = 3;
    int period = 4;
    int phase = 3;
};

struct DescribeConfig {
    bool denoise_first = false;
    SSAConfig ssa;
    Precision precision;
    Window window = Window::Rectangular;
    std::string amplitude_unit;  // empty: use the signal's unit
    unsigned n1 = 10;
    unsigned n2 = 5;
    unsigned n3 = 5;

    void validate() const;
};

// Every feature the templates may draw from, computed once per signal.
struct FeatureBundle {
    Spectrum spectrum;
    TimeFeatures time;
    FreqStatFeatures freq;
    WaveFeatures wave;
    HarmonicSeries harmonics;
    HarmonicSeries secondary;
    std::vector<SidebandPattern> sidebands;
    PeakList peaks;  // all significant peaks
    std::string unit;
};

FeatureBundle extract_features(const SampledSignal& signal, const DescribeConfig& config = {});

SignalKind classify(const Spectrum& spec, const HarmonicSeries& harm, const std::vector<SidebandPattern>& side,
                    const PeakList& peaks);

enum class Quantity { Frequency, Amplitude, Period, Phase, Count };

// A number substituted into the text: raw value and its rendered form.
struct DescribedValue {
    std::string name;
    Quantity quantity = Quantity::Frequency;
    double value = 0.0;
    std::string text;
};

struct DescriptionSections {
    std::string composition;
    std::string time_quant;
    std::string freq_quant;
    std::string linking;
};

struct Description {
    SignalKind kind = SignalKind::Unknown;
    DescriptionSections sections;
    std::string rendered_text;
    std::vector<DescribedValue> values;
    std::vector<std::string> notes;
};

// Magnitudes below this are roundoff (e.g. the phase of an exact sine) and print as "0".
inline constexpr double kFormatZero = 1e-9;

// Significant-figure formatting without exponents or trailing zeros: 0.03333, 4.02, 100.
std::string format_sig(double value, int significant_figures);

Description render_description(SignalKind kind, const FeatureBundle& features, const DescribeConfig& config = {});

// Optional denoise, features, classification and rendering. Failures are
// rethrown as PipelineError tagged with the failing stage.
Description sig2txt(const SampledSignal& signal, const DescribeConfig& config = {});

} // namespace sigtext
