#include "sigtext/report_json.hpp"

#include "sigtext/error.hpp"

#include <set>

namespace sigtext {

namespace {

Json opt(const std::optional<double>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what)
{
    if (!j.is_object()) {
        throw FormatError(std::string(what) + " must be a JSON object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (ok.count(item.key()) == 0) {
            throw FormatError(std::string("unknown key '") + item.key() + "' in " + what);
        }
    }
}

template <typename T>
T field(const Json& j, const char* key, const char* what)
{
    if (!j.contains(key)) {
        throw FormatError(std::string(what) + " is missing '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string(what) + " has a malformed '" + key + "'");
    }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback, const char* what)
{
    if (!j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    return field<T>(j, key, what);
}

Json multi_json(const MultiHarmonicParams& p)
{
    return Json{{"fundamental_hz", p.fundamental_hz}, {"amplitudes", p.amplitudes}, {"phases_rad", p.phases_rad}};
}

MultiHarmonicParams multi_from(const Json& j)
{
    reject_unknown_keys(j, {"class", "fundamental_hz", "amplitudes", "phases_rad"}, "multi-harmonic parameters");
    MultiHarmonicParams p;
    p.fundamental_hz = field<double>(j, "fundamental_hz", "multi-harmonic parameters");
    p.amplitudes = field<std::vector<double>>(j, "amplitudes", "multi-harmonic parameters");
    p.phases_rad = field_or<std::vector<double>>(j, "phases_rad", {}, "multi-harmonic parameters");
    return p;
}

Json random_json(const RandomHarmonicsParams& p)
{
    return Json{{"frequencies_hz", p.frequencies_hz}, {"amplitudes", p.amplitudes}, {"phases_rad", p.phases_rad}};
}

RandomHarmonicsParams random_from(const Json& j)
{
    reject_unknown_keys(j, {"class", "frequencies_hz", "amplitudes", "phases_rad"}, "random-harmonic parameters");
    RandomHarmonicsParams p;
    p.frequencies_hz = field<std::vector<double>>(j, "frequencies_hz", "random-harmonic parameters");
    p.amplitudes = field<std::vector<double>>(j, "amplitudes", "random-harmonic parameters");
    p.phases_rad = field_or<std::vector<double>>(j, "phases_rad", {}, "random-harmonic parameters");
    return p;
}

Json interval_json(const Interval& iv)
{
    return Json::array({iv.lo, iv.hi});
}

Interval interval_from(const Json& j, const char* key)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError(std::string("range '") + key + "' must be a [lo, hi] pair");
    }
    return Interval{j[0].get<double>(), j[1].get<double>()};
}

} // namespace

Json to_json(const Spectrum& spec, bool include_arrays)
{
    Json j{{"resolution_hz", spec.resolution_hz},
           {"sample_rate_hz", spec.sample_rate_hz},
           {"n_samples", spec.n_samples},
           {"n_bins", spec.size()},
           {"window", spec.window == Window::Hann ? "hann" : "rectangular"}};
    if (include_arrays) {
        j["freqs_hz"] = spec.freqs_hz;
        j["amplitudes"] = spec.amplitudes;
        j["phases_rad"] = spec.phases_rad;
    }
    return j;
}

Json to_json(const TimeFeatures& f)
{
    return Json{{"rms", f.rms},
                {"mean", f.mean},
                {"kurtosis", opt(f.kurtosis)},
                {"linear_kurtosis", opt(f.linear_kurtosis)},
                {"margin", opt(f.margin)},
                {"min", f.min},
                {"max", f.max},
                {"peak_to_peak", f.peak_to_peak},
                {"skewness", opt(f.skewness)},
                {"root_square_amplitude", f.root_square_amplitude},
                {"absolute_mean", f.absolute_mean},
                {"variance", f.variance},
                {"waveform_indicator", opt(f.waveform_indicator)},
                {"peak", f.peak}};
}

Json to_json(const FreqStatFeatures& f)
{
    return Json{{"rms", f.rms},
                {"kurtosis", opt(f.kurtosis)},
                {"linear_kurtosis", opt(f.linear_kurtosis)},
                {"gravity_center_freq_hz", opt(f.gravity_center_freq_hz)},
                {"std_dev", f.std_dev},
                {"mean", f.mean},
                {"freq_variance", opt(f.freq_variance)},
                {"freq_std_dev", opt(f.freq_std_dev)},
                {"energy", f.energy}};
}

Json to_json(const WaveFeatures& f)
{
    return Json{{"fundamental_period_s", opt(f.fundamental_period_s)},
                {"am_period_s", opt(f.am_period_s)},
                {"periodic_shock", f.periodic_shock},
                {"shock_strength", f.shock_strength},
                {"shock_freq_hz", opt(f.shock_freq_hz)}};
}

Json to_json(const HarmonicSeries& h)
{
    Json entries = Json::array();
    for (const auto& e : h.entries) {
        entries.push_back(
            Json{{"order", e.order}, {"freq_hz", e.freq_hz}, {"amplitude", e.amplitude}, {"phase_rad", e.phase_rad}});
    }
    Json subs = Json::array();
    for (const auto& s : h.subharmonics) {
        subs.push_back(Json{{"ratio", s.ratio}, {"freq_hz", s.freq_hz}, {"amplitude", s.amplitude}});
    }
    return Json{{"fundamental_hz", opt(h.fundamental_hz)},
                {"tolerance_hz", h.tolerance_hz},
                {"entries", entries},
                {"subharmonics", subs}};
}

Json to_json(const SidebandPattern& p)
{
    auto lines = [](const std::vector<SidebandLine>& v) {
        Json a = Json::array();
        for (const auto& l : v) {
            a.push_back(Json{{"order", l.order}, {"freq_hz", l.freq_hz}, {"amplitude", l.amplitude}});
        }
        return a;
    };
    return Json{{"carrier_hz", p.carrier_hz},
                {"carrier_amplitude", p.carrier_amplitude},
                {"spacing_hz", p.spacing_hz},
                {"matched_pairs", p.matched_pairs},
                {"left", lines(p.left)},
                {"right", lines(p.right)}};
}

Json to_json(const PeakList& peaks)
{
    Json a = Json::array();
    for (const auto& p : peaks) {
        a.push_back(Json{{"freq_hz", p.freq_hz}, {"amplitude", p.amplitude}});
    }
    return a;
}

Json to_json(const Description& d)
{
    Json values = Json::object();
    for (const auto& v : d.values) {
        values[v.name] = v.value;
    }
    return Json{{"kind", to_string(d.kind)},
                {"rendered_text", d.rendered_text},
                {"sections",
                 {{"composition", d.sections.composition},
                  {"time_quant", d.sections.time_quant},
                  {"freq_quant", d.sections.freq_quant},
                  {"linking", d.sections.linking}}},
                {"values", values},
                {"notes", d.notes}};
}

Json feature_report(const FeatureBundle& b, SignalKind kind)
{
    Json sidebands = Json::array();
    for (const auto& p : b.sidebands) {
        sidebands.push_back(to_json(p));
    }
    return Json{{"kind", to_string(kind)},
                {"unit", b.unit},
                {"spectrum", to_json(b.spectrum)},
                {"time", to_json(b.time)},
                {"frequency", to_json(b.freq)},
                {"wave", to_json(b.wave)},
                {"harmonics", to_json(b.harmonics)},
                {"secondary_harmonics", to_json(b.secondary)},
                {"sidebands", sidebands},
                {"peaks", to_json(b.peaks)}};
}

Json to_json(const SampleGrid& g)
{
    return Json{{"sample_rate_hz", g.sample_rate_hz}, {"n_samples", g.n_samples}};
}

SampleGrid sample_grid_from_json(const Json& j)
{
    reject_unknown_keys(j, {"sample_rate_hz", "n_samples"}, "grid");
    return SampleGrid(field<double>(j, "sample_rate_hz", "grid"), field<std::size_t>(j, "n_samples", "grid"));
}

Json to_json(const GeneratorParams& params)
{
    Json j = std::visit(
        [](const auto& p) -> Json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HarmonicParams>) {
                return Json{{"amplitude", p.amplitude}, {"frequency_hz", p.frequency_hz}, {"phase_rad", p.phase_rad}};
            } else if constexpr (std::is_same_v<T, MultiHarmonicParams>) {
                return multi_json(p);
            } else if constexpr (std::is_same_v<T, RandomHarmonicsParams>) {
                return random_json(p);
            } else if constexpr (std::is_same_v<T, CompositeParams>) {
                return Json{{"harmonic", multi_json(p.harmonic)}, {"random", random_json(p.random)}};
            } else if constexpr (std::is_same_v<T, AmParams>) {
                return Json{{"carrier", multi_json(p.carrier)},
                            {"modulation_hz", p.modulation_hz},
                            {"depth", p.depth},
                            {"modulation_phase_rad", p.modulation_phase_rad}};
            } else if constexpr (std::is_same_v<T, BearingParams>) {
                return Json{{"impulse_amplitude", p.impulse_amplitude},
                            {"natural_freq_hz", p.natural_freq_hz},
                            {"fault_freq_hz", p.fault_freq_hz},
                            {"decay_rate", p.decay_rate},
                            {"fault_type", to_string(p.fault_type)}};
            } else {
                return Json{{"mesh_freq_hz", p.mesh_freq_hz},
                            {"fault_char_freq_hz", p.fault_char_freq_hz},
                            {"max_order", p.max_order},
                            {"am_amplitudes", p.am_amplitudes},
                            {"fm_amplitudes", p.fm_amplitudes},
                            {"am_phases_rad", p.am_phases_rad},
                            {"fm_phases_rad", p.fm_phases_rad},
                            {"carrier_phases_rad", p.carrier_phases_rad}};
            }
        },
        params);
    j["class"] = to_string(class_of(params));
    return j;
}

GeneratorParams generator_params_from_json(const Json& j)
{
    const char* what = "generator parameters";
    if (!j.is_object()) {
        throw FormatError("generator parameters must be a JSON object");
    }
    const SignalClass cls = signal_class_from_string(field<std::string>(j, "class", what));
    switch (cls) {
    case SignalClass::SingleHarmonic: {
        reject_unknown_keys(j, {"class", "amplitude", "frequency_hz", "phase_rad"}, what);
        HarmonicParams p;
        p.amplitude = field<double>(j, "amplitude", what);
        p.frequency_hz = field<double>(j, "frequency_hz", what);
        p.phase_rad = field_or<double>(j, "phase_rad", 0.0, what);
        return p;
    }
    case SignalClass::MultiHarmonic: return multi_from(j);
    case SignalClass::RandomHarmonic: return random_from(j);
    case SignalClass::CompositeHarmonic: {
        reject_unknown_keys(j, {"class", "harmonic", "random"}, what);
        CompositeParams p;
        p.harmonic = multi_from(field<Json>(j, "harmonic", what));
        p.random = random_from(field<Json>(j, "random", what));
        return p;
    }
    case SignalClass::AmplitudeModulated: {
        reject_unknown_keys(j, {"class", "carrier", "modulation_hz", "depth", "modulation_phase_rad"}, what);
        AmParams p;
        p.carrier = multi_from(field<Json>(j, "carrier", what));
        p.modulation_hz = field<double>(j, "modulation_hz", what);
        p.depth = field<double>(j, "depth", what);
        p.modulation_phase_rad = field_or<double>(j, "modulation_phase_rad", 0.0, what);
        return p;
    }
    case SignalClass::Bearing: {
        reject_unknown_keys(
            j, {"class", "impulse_amplitude", "natural_freq_hz", "fault_freq_hz", "decay_rate", "fault_type"}, what);
        BearingParams p;
        p.impulse_amplitude = field<double>(j, "impulse_amplitude", what);
        p.natural_freq_hz = field<double>(j, "natural_freq_hz", what);
        p.fault_freq_hz = field<double>(j, "fault_freq_hz", what);
        p.decay_rate = field<double>(j, "decay_rate", what);
        p.fault_type = bearing_fault_from_string(field_or<std::string>(j, "fault_type", "outer_race", what));
        return p;
    }
    case SignalClass::Gear: {
        reject_unknown_keys(j,
                            {"class", "mesh_freq_hz", "fault_char_freq_hz", "max_order", "am_amplitudes",
                             "fm_amplitudes", "am_phases_rad", "fm_phases_rad", "carrier_phases_rad"},
                            what);
        GearParams p;
        p.mesh_freq_hz = field<double>(j, "mesh_freq_hz", what);
        p.fault_char_freq_hz = field<double>(j, "fault_char_freq_hz", what);
        p.max_order = field<unsigned>(j, "max_order", what);
        p.am_amplitudes = field_or<std::vector<double>>(j, "am_amplitudes", {}, what);
        p.fm_amplitudes = field_or<std::vector<double>>(j, "fm_amplitudes", {}, what);
        p.am_phases_rad = field_or<std::vector<double>>(j, "am_phases_rad", {}, what);
        p.fm_phases_rad = field_or<std::vector<double>>(j, "fm_phases_rad", {}, what);
        p.carrier_phases_rad = field_or<std::vector<double>>(j, "carrier_phases_rad", {}, what);
        return p;
    }
    }
    throw FormatError("unknown generator class");
}

Json to_json(const ParamRanges& r)
{
    Json faults = Json::array();
    for (auto f : r.fault_types) {
        faults.push_back(to_string(f));
    }
    return Json{{"amplitude", interval_json(r.amplitude)},
                {"frequency_hz", interval_json(r.frequency_hz)},
                {"phase_rad", interval_json(r.phase_rad)},
                {"relative_amplitude", interval_json(r.relative_amplitude)},
                {"harmonic_counts", r.harmonic_counts},
                {"random_frequency_hz", interval_json(r.random_frequency_hz)},
                {"random_counts", r.random_counts},
                {"composite_random_counts", r.composite_random_counts},
                {"modulation_hz", interval_json(r.modulation_hz)},
                {"modulation_depth", interval_json(r.modulation_depth)},
                {"am_carrier_counts", r.am_carrier_counts},
                {"natural_freq_hz", interval_json(r.natural_freq_hz)},
                {"fault_freq_hz", interval_json(r.fault_freq_hz)},
                {"decay_per_s", interval_json(r.decay_per_s)},
                {"fault_types", faults},
                {"mesh_freq_hz", interval_json(r.mesh_freq_hz)},
                {"gear_fault_freq_hz", interval_json(r.gear_fault_freq_hz)},
                {"gear_orders", r.gear_orders},
                {"am_amplitude", interval_json(r.am_amplitude)},
                {"fm_ratio", interval_json(r.fm_ratio)},
                {"frequency_step_hz", r.frequency_step_hz},
                {"min_separation_hz", r.min_separation_hz},
                {"max_frequency_hz", r.max_frequency_hz},
                {"seed", r.seed}};
}

ParamRanges param_ranges_from_json(const Json& j, ParamRanges r)
{
    const char* what = "param_ranges";
    reject_unknown_keys(j,
                        {"amplitude", "frequency_hz", "phase_rad", "relative_amplitude", "harmonic_counts",
                         "random_frequency_hz", "random_counts", "composite_random_counts", "modulation_hz",
                         "modulation_depth", "am_carrier_counts", "natural_freq_hz", "fault_freq_hz", "decay_per_s",
                         "fault_types", "mesh_freq_hz", "gear_fault_freq_hz", "gear_orders", "am_amplitude",
                         "fm_ratio", "frequency_step_hz", "min_separation_hz", "max_frequency_hz", "seed"},
                        what);
    const std::pair<const char*, Interval*> intervals[] = {
        {"amplitude", &r.amplitude},
        {"frequency_hz", &r.frequency_hz},
        {"phase_rad", &r.phase_rad},
        {"relative_amplitude", &r.relative_amplitude},
        {"random_frequency_hz", &r.random_frequency_hz},
        {"modulation_hz", &r.modulation_hz},
        {"modulation_depth", &r.modulation_depth},
        {"natural_freq_hz", &r.natural_freq_hz},
        {"fault_freq_hz", &r.fault_freq_hz},
        {"decay_per_s", &r.decay_per_s},
        {"mesh_freq_hz", &r.mesh_freq_hz},
        {"gear_fault_freq_hz", &r.gear_fault_freq_hz},
        {"am_amplitude", &r.am_amplitude},
        {"fm_ratio", &r.fm_ratio},
    };
    for (const auto& [key, target] : intervals) {
        if (j.contains(key)) {
            *target = interval_from(j.at(key), key);
        }
    }
    const std::pair<const char*, std::vector<int>*> counts[] = {
        {"harmonic_counts", &r.harmonic_counts},
        {"random_counts", &r.random_counts},
        {"composite_random_counts", &r.composite_random_counts},
        {"am_carrier_counts", &r.am_carrier_counts},
        {"gear_orders", &r.gear_orders},
    };
    for (const auto& [key, target] : counts) {
        if (j.contains(key)) {
            *target = field<std::vector<int>>(j, key, what);
        }
    }
    if (j.contains("fault_types")) {
        r.fault_types.clear();
        for (const auto& name : field<std::vector<std::string>>(j, "fault_types", what)) {
            r.fault_types.push_back(bearing_fault_from_string(name));
        }
    }
    r.frequency_step_hz = field_or<double>(j, "frequency_step_hz", r.frequency_step_hz, what);
    r.min_separation_hz = field_or<double>(j, "min_separation_hz", r.min_separation_hz, what);
    r.max_frequency_hz = field_or<double>(j, "max_frequency_hz", r.max_frequency_hz, what);
    r.seed = field_or<std::uint64_t>(j, "seed", r.seed, what);
    r.validate();
    return r;
}

Json to_json(const SSAConfig& c)
{
    Json j{{"window_len", c.window_len},
           {"energy_fraction", c.energy_fraction},
           {"max_components_per_band", c.max_components_per_band},
           {"max_window", c.max_window}};
    if (const auto* list = std::get_if<std::vector<Band>>(&c.bands)) {
        Json bands = Json::array();
        for (const auto& b : *list) {
            bands.push_back(Json{{"center_hz", b.center_hz}, {"half_width_hz", b.half_width_hz}});
        }
        j["bands"] = bands;
    } else {
        j["bands"] = Json{{"auto", std::get<AutoBands>(c.bands).top_k}};
    }
    return j;
}

SSAConfig ssa_config_from_json(const Json& j)
{
    const char* what = "ssa config";
    reject_unknown_keys(j, {"window_len", "energy_fraction", "max_components_per_band", "max_window", "bands"}, what);
    SSAConfig c;
    c.window_len = field_or<std::size_t>(j, "window_len", c.window_len, what);
    c.energy_fraction = field_or<double>(j, "energy_fraction", c.energy_fraction, what);
    c.max_components_per_band = field_or<std::size_t>(j, "max_components_per_band", c.max_components_per_band, what);
    c.max_window = field_or<std::size_t>(j, "max_window", c.max_window, what);
    if (j.contains("bands")) {
        const Json& b = j.at("bands");
        if (b.is_array()) {
            std::vector<Band> bands;
            for (const auto& item : b) {
                reject_unknown_keys(item, {"center_hz", "half_width_hz"}, "band");
                bands.push_back(Band{field<double>(item, "center_hz", "band"), field<double>(item, "half_width_hz", "band")});
            }
            c.bands = bands;
        } else {
            reject_unknown_keys(b, {"auto"}, "bands");
            c.bands = AutoBands{field<std::size_t>(b, "auto", "bands")};
        }
    }
    return c;
}

Json decomposition_summary(const HankelDecomposition& d)
{
    Json comps = Json::array();
    for (const auto& c : d.components) {
        comps.push_back(Json{{"band", {{"center_hz", c.band.center_hz}, {"half_width_hz", c.band.half_width_hz}}},
                             {"index_set", c.index_set},
                             {"singular_values", c.singular_values},
                             {"dominant_freq_hz", c.dominant_freq_hz},
                             {"empty_band", c.empty_band}});
    }
    return Json{{"window_len", d.window_len}, {"components", comps}};
}

} // namespace sigtext
