#include "sigtext/error.hpp"
#include "sigtext/sig2txt.hpp"

#include <doctest.h>

#include <algorithm>
#include <regex>
#include <set>

using namespace sigtext;

namespace {

const SampleGrid kGrid(1000.0, 1000);
const SampleGrid kWide(10000.0, 10000);

int sig_figs(Quantity q, const Precision& p)
{
    switch (q) {
    case Quantity::Frequency: return p.frequency;
    case Quantity::Amplitude: return p.amplitude;
    case Quantity::Period: return p.period;
    case Quantity::Phase: return p.phase;
    case Quantity::Count: return 0;
    }
    return 0;
}

// Every value is printed with its configured precision and appears in the text,
// and every unit-bearing number in the text is one of the recorded values.
void check_faithful(const Description& d, const Precision& p = {})
{
    std::set<std::string> texts;
    for (const auto& v : d.values) {
        if (v.quantity != Quantity::Count) {
            CHECK(v.text == format_sig(v.value, sig_figs(v.quantity, p)));
        }
        CHECK(d.rendered_text.find(v.text) != std::string::npos);
        texts.insert(v.text);
    }
    static const std::regex num(R"((-?[0-9]+(?:\.[0-9]+)?) (Hz|seconds|radians|mm/sec))");
    for (auto it = std::sregex_iterator(d.rendered_text.begin(), d.rendered_text.end(), num);
         it != std::sregex_iterator(); ++it) {
        CHECK_MESSAGE(texts.count((*it)[1].str()) == 1, "unrecorded number " << (*it)[0].str());
    }
}

} // namespace

TEST_CASE("significant-figure formatting")
{
    CHECK(format_sig(1.0 / 30.0, 4) == "0.03333");
    CHECK(format_sig(4.02, 3) == "4.02");
    CHECK(format_sig(0.6890001, 3) == "0.689");
    CHECK(format_sig(100.0, 4) == "100");
    CHECK(format_sig(12345.0, 3) == "12300");
    CHECK(format_sig(-0.0004, 3) == "-0.0004");
    CHECK(format_sig(-1e-14, 3) == "0");
    CHECK(format_sig(0.0, 3) == "0");
    CHECK_THROWS_AS(format_sig(1.0, 0), InvalidArgument);
    CHECK_THROWS_AS(format_sig(std::nan(""), 3), InvalidArgument);
}

TEST_CASE("kind names round trip")
{
    for (SignalKind k : kAllSignalKinds) {
        CHECK(signal_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(signal_kind_from_string("sawtooth"), InvalidArgument);
    CHECK(expected_kind(SignalClass::Bearing) == SignalKind::AmplitudeModulated);
    CHECK(expected_kind(SignalClass::Gear) == SignalKind::AmplitudeModulated);
    CHECK(expected_kind(SignalClass::CompositeHarmonic) == SignalKind::CompositeHarmonic);
}

TEST_CASE("single harmonic description")
{
    const auto x = synthesize(HarmonicParams{4.0, 30.0, 0.0}, kGrid);
    const Description d = sig2txt(x);
    CHECK(d.kind == SignalKind::SingleHarmonic);
    CHECK(d.sections.composition == "This signal is a simple harmonic periodic signal.");
    CHECK(d.rendered_text.find("the period is 0.03333 seconds") != std::string::npos);
    CHECK(d.rendered_text.find("the frequency is 30 Hz") != std::string::npos);
    CHECK(d.rendered_text.find("the amplitude of the frequency is 4 mm/sec") != std::string::npos);
    CHECK(d.rendered_text.find("the phase is 0 radians") != std::string::npos);
    check_faithful(d);
    // Sections appear in order, one per line.
    CHECK(d.rendered_text == d.sections.composition + "\n" + d.sections.time_quant + "\n" + d.sections.freq_quant +
                                 "\n" + d.sections.linking);
}

TEST_CASE("multi-harmonic description reproduces the three-line example")
{
    const auto x = synthesize(MultiHarmonicParams{100.0, {4.02, 0.689, 0.344}, {}}, kGrid);
    const Description d = sig2txt(x);
    CHECK(d.kind == SignalKind::MultiHarmonic);
    CHECK(d.sections.composition ==
          "This signal is a multi-harmonic periodic signal, that is, a non-simple harmonic periodic signal.");
    const std::string& f = d.sections.freq_quant;
    CHECK(f.find("the frequency of the fundamental (1st harmonic) is 100 Hz, amplitude is 4.02 mm/sec") !=
          std::string::npos);
    CHECK(f.find("the frequency of the 2nd harmonic is 200 Hz, amplitude is 0.689 mm/sec") != std::string::npos);
    CHECK(f.find("the frequency of the 3rd harmonic is 300 Hz, amplitude is 0.344 mm/sec") != std::string::npos);
    CHECK(d.sections.time_quant.rfind("In the time-domain waveform of this signal, the signal period is 0.01 seconds",
                                      0) == 0);
    CHECK(d.sections.linking.find("harmonics of 100 Hz can be observed") != std::string::npos);
    check_faithful(d);
}

TEST_CASE("random, composite and modulated descriptions")
{
    RandomHarmonicsParams r{{73.0, 211.0, 389.0}, {2.0, 1.5, 1.0}, {}};
    const Description dr = sig2txt(synthesize(r, kGrid));
    CHECK(dr.kind == SignalKind::RandomHarmonic);
    CHECK(dr.rendered_text.find("the first frequency is 73 Hz, amplitude is 2 mm/sec") != std::string::npos);
    CHECK(dr.sections.linking.find("superposition of 3 random harmonic components") != std::string::npos);
    check_faithful(dr);

    CompositeParams c{MultiHarmonicParams{50.0, {3.0, 1.5, 0.8}, {}}, RandomHarmonicsParams{{317.0}, {1.2}, {}}};
    const Description dc = sig2txt(synthesize(c, kGrid));
    CHECK(dc.kind == SignalKind::CompositeHarmonic);
    CHECK(dc.rendered_text.find("- Fundamental frequency: 50 Hz") != std::string::npos);
    CHECK(dc.rendered_text.find("317 Hz") != std::string::npos);
    CHECK(dc.sections.linking.find("1 multi-harmonic signal and 1 random harmonic component") != std::string::npos);
    check_faithful(dc);

    AmParams am{MultiHarmonicParams{1000.0, {1.0}, {}}, 25.0, 0.5, 0.0};
    const Description da = sig2txt(synth_am(am, kWide));
    CHECK(da.kind == SignalKind::AmplitudeModulated);
    CHECK(da.sections.composition.find("carrier is a simple harmonic signal") != std::string::npos);
    CHECK(da.rendered_text.find("Sidebands appear on both sides of the carrier frequency 1000 Hz at intervals of 25 Hz") !=
          std::string::npos);
    check_faithful(da);

    AmParams am2{MultiHarmonicParams{500.0, {1.0, 0.5}, {}}, 20.0, 0.6, 0.0};
    const Description da2 = sig2txt(synth_am(am2, kWide));
    CHECK(da2.kind == SignalKind::AmplitudeModulated);
    CHECK(da2.sections.composition.find("non-simple harmonic periodic signal") != std::string::npos);
    check_faithful(da2);
}

TEST_CASE("bearing descriptions mention periodic impacts")
{
    BearingParams bp;
    bp.fault_freq_hz = 100.0;
    bp.decay_rate = 800.0;
    const Description d = sig2txt(synth_bearing(bp, kWide));
    CHECK(d.kind == SignalKind::AmplitudeModulated);
    CHECK(d.sections.time_quant.find("Periodic impacts") != std::string::npos);
    check_faithful(d);
}

TEST_CASE("classification round trip over randomized generator parameters")
{
    ParamRanges ranges;
    CounterRng rng(4242);
    for (SignalClass cls : kAllSignalClasses) {
        for (int i = 0; i < 8; ++i) {
            const GeneratorParams p = sample_params(ranges, cls, rng);
            const auto x = add_noise(synthesize(p, kWide), 25.0, rng.next_u64());
            const Description d = sig2txt(x);
            CHECK_MESSAGE(d.kind == expected_kind(cls), to_string(cls) << " draw " << i << " -> " << to_string(d.kind));
        }
    }
}

TEST_CASE("classify decision tree on constructed inputs")
{
    const Spectrum s = spectrum(synthesize(HarmonicParams{1.0, 30.0, 0.0}, kGrid));
    CHECK(classify(s, detect_harmonics(s), detect_sidebands(s), significant_peaks(s)) == SignalKind::SingleHarmonic);
    const Spectrum z = spectrum(SampledSignal(std::vector<double>(100, 0.0), 100.0));
    CHECK(classify(z, detect_harmonics(z), {}, {}) == SignalKind::Unknown);
}

TEST_CASE("zero signal falls back to a neutral description")
{
    const Description d = sig2txt(SampledSignal(std::vector<double>(1000, 0.0), 1000.0));
    CHECK(d.kind == SignalKind::Unknown);
    CHECK(d.rendered_text.find("no significant spectral content") != std::string::npos);
}

TEST_CASE("rendering is deterministic")
{
    const auto x = add_noise(synthesize(MultiHarmonicParams{60.0, {2.0, 1.0}, {}}, kGrid), 30.0, 3);
    CHECK(sig2txt(x).rendered_text == sig2txt(x).rendered_text);
}

TEST_CASE("template 2 without a fundamental is a missing-feature error")
{
    FeatureBundle f = extract_features(synthesize(HarmonicParams{1.0, 30.0, 0.0}, kGrid));
    f.harmonics.fundamental_hz.reset();
    f.harmonics.entries.clear();
    try {
        render_description(SignalKind::MultiHarmonic, f);
        FAIL("expected MissingFeature");
    } catch (const MissingFeature& e) {
        CHECK(e.field() == "harmonics.fundamental_hz");
    }
}

TEST_CASE("pipeline errors carry their stage")
{
    DescribeConfig c;
    c.denoise_first = true;
    c.ssa.window_len = 900;
    try {
        sig2txt(synthesize(HarmonicParams{1.0, 30.0, 0.0}, kGrid), c);
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "denoise");
    }
    DescribeConfig bad;
    bad.precision.amplitude = 0;
    CHECK_THROWS_AS(sig2txt(synthesize(HarmonicParams{1.0, 30.0, 0.0}, kGrid), bad), PipelineError);
}

TEST_CASE("denoising first keeps a noisy tone within one bin")
{
    const auto x = add_noise(synthesize(HarmonicParams{2.0, 47.0, 0.4}, kGrid), 0.0, 11);
    DescribeConfig c;
    c.denoise_first = true;
    const Description d = sig2txt(x, c);
    CHECK(d.kind == SignalKind::SingleHarmonic);
    const auto it = std::find_if(d.values.begin(), d.values.end(),
                                 [](const DescribedValue& v) { return v.name == "frequency_hz"; });
    REQUIRE(it != d.values.end());
    CHECK(std::abs(it->value - 47.0) <= 1.0);
}
