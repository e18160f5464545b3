#include "sigtext/dataset.hpp"

#include "sigtext/error.hpp"
#include "sigtext/report_json.hpp"
#include "sigtext/signal_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace sigtext {

using nlohmann::json;

std::string to_string(QuestionStyle style)
{
    switch (style) {
    case QuestionStyle::DescribeSignal: return "describe_signal";
    case QuestionStyle::IdentifyKind: return "identify_kind";
    case QuestionStyle::ReadFeature: return "read_feature";
    }
    return "describe_signal";
}

QuestionStyle question_style_from_string(const std::string& name)
{
    for (auto s : kAllQuestionStyles) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw InvalidArgument("unknown question style '" + name + "'");
}

const std::string& question_template(QuestionStyle style)
{
    static const std::string describe =
        "A vibration signal ({ref}) was sampled at {fs} Hz with a record length of {duration} s. "
        "Its measured features are: {summary}. Describe the composition of this signal and its time-domain and "
        "frequency-domain characteristics.";
    static const std::string identify =
        "A vibration signal ({ref}) was sampled at {fs} Hz with a record length of {duration} s. "
        "Its measured features are: {summary}. What type of signal is this?";
    static const std::string read =
        "A vibration signal ({ref}) was sampled at {fs} Hz with a record length of {duration} s. "
        "Its measured features are: {summary}. What is the {feature} of this signal?";
    switch (style) {
    case QuestionStyle::DescribeSignal: return describe;
    case QuestionStyle::IdentifyKind: return identify;
    case QuestionStyle::ReadFeature: return read;
    }
    return describe;
}

json to_json(const QAPair& pair)
{
    return json{{"instruction", pair.instruction}, {"input", pair.input}, {"output", pair.output}, {"meta", pair.meta}};
}

namespace {

void replace_all(std::string& s, const std::string& key, const std::string& value)
{
    for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) {
        s.replace(pos, key.size(), value);
    }
}

std::string feature_summary(const FeatureBundle& f, const Precision& p)
{
    const std::string& u = f.unit;
    std::string s = "peak-to-peak value " + format_sig(f.time.peak_to_peak, p.amplitude) + " " + u + ", RMS value " +
                    format_sig(f.time.rms, p.amplitude) + " " + u;
    if (f.time.kurtosis) {
        s += ", kurtosis " + format_sig(*f.time.kurtosis, 3);
    }
    if (f.peaks.empty()) {
        return s + ", no significant spectral lines";
    }
    std::vector<std::string> lines;
    const std::size_t n = std::min<std::size_t>(f.peaks.size(), 10);
    for (std::size_t i = 0; i < n; ++i) {
        lines.push_back(format_sig(f.peaks[i].freq_hz, p.frequency) + " Hz (" +
                        format_sig(f.peaks[i].amplitude, p.amplitude) + " " + u + ")");
    }
    s += ", spectral lines in order of amplitude: ";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        s += (i == 0 ? "" : ", ") + lines[i];
    }
    return s;
}

struct FeatureChoice {
    std::string key;
    std::string label;
    double value;
    Quantity quantity;
    bool with_unit;
    const char* suffix;
};

std::vector<FeatureChoice> readable_features(const FeatureBundle& f)
{
    std::vector<FeatureChoice> out;
    out.push_back({"rms", "RMS value", f.time.rms, Quantity::Amplitude, true, ""});
    out.push_back({"peak_to_peak", "peak-to-peak value", f.time.peak_to_peak, Quantity::Amplitude, true, ""});
    if (f.time.kurtosis) {
        out.push_back({"kurtosis", "kurtosis", *f.time.kurtosis, Quantity::Amplitude, false, ""});
    }
    if (f.freq.gravity_center_freq_hz) {
        out.push_back({"gravity_center_freq_hz", "spectral gravity center frequency", *f.freq.gravity_center_freq_hz,
                       Quantity::Frequency, false, " Hz"});
    }
    if (f.harmonics.fundamental_hz) {
        out.push_back({"fundamental_hz", "fundamental frequency", *f.harmonics.fundamental_hz, Quantity::Frequency,
                       false, " Hz"});
    }
    if (f.wave.shock_freq_hz && f.wave.periodic_shock) {
        out.push_back(
            {"shock_freq_hz", "impact repetition frequency", *f.wave.shock_freq_hz, Quantity::Frequency, false, " Hz"});
    }
    return out;
}

int digits_for(Quantity q, const Precision& p)
{
    switch (q) {
    case Quantity::Frequency: return p.frequency;
    case Quantity::Amplitude: return p.amplitude;
    case Quantity::Period: return p.period;
    case Quantity::Phase: return p.phase;
    case Quantity::Count: return 6;
    }
    return 4;
}

std::string impact_note(const FeatureBundle& f, const Precision& p)
{
    if (!f.wave.periodic_shock || !f.wave.shock_freq_hz) {
        return {};
    }
    return "The waveform contains periodic impacts repeating at " + format_sig(*f.wave.shock_freq_hz, p.frequency) +
           " Hz.";
}

} // namespace

BuiltPair build_qa_pair(const PairSpec& spec)
{
    BuiltPair out;
    SampledSignal clean = synthesize(spec.params, spec.grid, spec.unit);
    out.signal = spec.snr_db ? add_noise(clean, *spec.snr_db, derive_seed(spec.seed, 1)) : clean;

    DescribeConfig dc;
    FeatureBundle features;
    SignalKind kind = SignalKind::Unknown;
    try {
        features = extract_features(out.signal, dc);
        kind = classify(features.spectrum, features.harmonics, features.sidebands, features.peaks);
        out.description = render_description(kind, features, dc);
    } catch (const std::exception& e) {
        throw PipelineError("describe", e.what());
    }
    const Precision& p = dc.precision;

    std::string question = question_template(spec.style);
    replace_all(question, "{ref}", spec.signal_ref);
    replace_all(question, "{fs}", format_sig(spec.grid.sample_rate_hz, 6));
    replace_all(question, "{duration}", format_sig(spec.grid.duration_s(), 6));
    replace_all(question, "{summary}", feature_summary(features, p));

    const std::string note = impact_note(features, p);
    std::string answer;
    std::optional<std::string> feature_key;
    switch (spec.style) {
    case QuestionStyle::DescribeSignal:
        answer = out.description.rendered_text;
        if (!note.empty() && answer.find("impacts") == std::string::npos) {
            answer += "\n" + note;
        }
        break;
    case QuestionStyle::IdentifyKind:
        answer = "This is a " + kind_label(kind) + ".";
        if (!note.empty()) {
            answer += " " + note;
        }
        break;
    case QuestionStyle::ReadFeature: {
        const auto choices = readable_features(features);
        CounterRng rng = CounterRng(spec.seed).split(2);
        const FeatureChoice& c =
            choices[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(choices.size()) - 1))];
        feature_key = c.key;
        replace_all(question, "{feature}", c.label);
        answer = "The " + c.label + " is " + format_sig(c.value, digits_for(c.quantity, p)) +
                 (c.with_unit ? " " + features.unit : std::string(c.suffix)) + ".";
        if (!note.empty()) {
            answer += " " + note;
        }
        break;
    }
    }

    out.pair.instruction = kInstruction;
    out.pair.input = question;
    out.pair.output = answer;
    json meta{{"class", to_string(class_of(spec.params))},
              {"kind", to_string(kind)},
              {"params", to_json(spec.params)},
              {"grid", to_json(spec.grid)},
              {"seed", spec.seed},
              {"style", to_string(spec.style)},
              {"snr_db", spec.snr_db ? json(*spec.snr_db) : json(nullptr)},
              {"unit", spec.unit},
              {"signal_ref", spec.signal_ref},
              {"signal_path", spec.signal_path ? json(*spec.signal_path) : json(nullptr)},
              {"feature", feature_key ? json(*feature_key) : json(nullptr)},
              {"template_version", kTemplateVersion}};
    out.pair.meta = std::move(meta);
    return out;
}

PairSpec pair_spec_from_meta(const json& meta)
{
    if (!meta.is_object()) {
        throw FormatError("meta must be an object");
    }
    for (const char* key : {"params", "grid", "seed", "style"}) {
        if (!meta.contains(key)) {
            throw FormatError(std::string("meta is missing '") + key + "'");
        }
    }
    PairSpec s;
    s.params = generator_params_from_json(meta.at("params"));
    s.grid = sample_grid_from_json(meta.at("grid"));
    if (!meta.at("seed").is_number_unsigned()) {
        throw FormatError("meta.seed must be an unsigned integer");
    }
    s.seed = meta.at("seed").get<std::uint64_t>();
    s.style = question_style_from_string(meta.at("style").get<std::string>());
    if (meta.contains("snr_db") && !meta.at("snr_db").is_null()) {
        s.snr_db = meta.at("snr_db").get<double>();
    }
    s.unit = meta.value("unit", std::string("mm/sec"));
    s.signal_ref = meta.value("signal_ref", std::string("signal"));
    if (meta.contains("signal_path") && meta.at("signal_path").is_string()) {
        s.signal_path = meta.at("signal_path").get<std::string>();
    }
    return s;
}

// ---------------------------------------------------------------------------

void DatasetConfig::validate() const
{
    if (n_pairs < 1) {
        throw InvalidArgument("n_pairs must be at least 1");
    }
    double total = 0.0;
    for (const auto& [cls, w] : class_mix) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw InvalidArgument("class_mix weight for " + to_string(cls) + " must be non-negative");
        }
        total += w;
    }
    if (!class_mix.empty() && !(total > 0.0)) {
        throw InvalidArgument("class_mix weights must sum to a positive value");
    }
    if (question_styles.empty()) {
        throw InvalidArgument("question_styles must not be empty");
    }
    if (!(grid.sample_rate_hz > 0.0) || grid.n_samples < 64) {
        throw InvalidArgument("grid needs a positive sample rate and at least 64 samples");
    }
    param_ranges.validate();
    if (param_ranges.max_frequency_hz >= 0.5 * grid.sample_rate_hz) {
        throw InvalidArgument("param_ranges.max_frequency_hz must lie below the Nyquist frequency of the grid");
    }
}

std::map<SignalClass, double> DatasetConfig::effective_mix() const
{
    if (!class_mix.empty()) {
        return class_mix;
    }
    std::map<SignalClass, double> m;
    for (auto c : kAllSignalClasses) {
        m[c] = 1.0;
    }
    return m;
}

DatasetConfig dataset_config_from_json(const json& j)
{
    if (!j.is_object()) {
        throw FormatError("dataset config must be a JSON object");
    }
    static const char* known[] = {"n_pairs",     "class_mix",    "param_ranges", "question_styles",
                                  "master_seed", "output_path",  "emit_signals", "sample_rate_hz",
                                  "n_samples",   "snr_db",       "unit"};
    for (const auto& item : j.items()) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return item.key() == k; }) ==
            std::end(known)) {
            throw FormatError("unknown key '" + item.key() + "' in dataset config");
        }
    }
    DatasetConfig c;
    try {
        c.n_pairs = j.value("n_pairs", c.n_pairs);
        if (j.contains("class_mix")) {
            for (const auto& item : j.at("class_mix").items()) {
                c.class_mix[signal_class_from_string(item.key())] = item.value().get<double>();
            }
        }
        if (j.contains("param_ranges")) {
            c.param_ranges = param_ranges_from_json(j.at("param_ranges"));
        }
        if (j.contains("question_styles")) {
            c.question_styles.clear();
            for (const auto& s : j.at("question_styles")) {
                c.question_styles.push_back(question_style_from_string(s.get<std::string>()));
            }
        }
        c.master_seed = j.value("master_seed", c.master_seed);
        c.output_path = j.value("output_path", c.output_path);
        c.emit_signals = j.value("emit_signals", c.emit_signals);
        c.grid = SampleGrid(j.value("sample_rate_hz", c.grid.sample_rate_hz), j.value("n_samples", c.grid.n_samples));
        if (j.contains("snr_db") && !j.at("snr_db").is_null()) {
            c.snr_db = j.at("snr_db").get<double>();
        }
        c.unit = j.value("unit", c.unit);
    } catch (const json::exception& e) {
        throw FormatError(std::string("dataset config: ") + e.what());
    }
    c.validate();
    return c;
}

json to_json(const DatasetConfig& c)
{
    json mix = json::object();
    for (const auto& [cls, w] : c.effective_mix()) {
        mix[to_string(cls)] = w;
    }
    json styles = json::array();
    for (auto s : c.question_styles) {
        styles.push_back(to_string(s));
    }
    return json{{"n_pairs", c.n_pairs},
                {"class_mix", mix},
                {"param_ranges", to_json(c.param_ranges)},
                {"question_styles", styles},
                {"master_seed", c.master_seed},
                {"output_path", c.output_path},
                {"emit_signals", c.emit_signals},
                {"sample_rate_hz", c.grid.sample_rate_hz},
                {"n_samples", c.grid.n_samples},
                {"snr_db", c.snr_db ? json(*c.snr_db) : json(nullptr)},
                {"unit", c.unit}};
}

std::map<SignalClass, std::size_t> allocate_classes(const std::map<SignalClass, double>& weights, std::size_t n)
{
    double total = 0.0;
    for (const auto& [cls, w] : weights) {
        total += w;
    }
    if (!(total > 0.0)) {
        throw InvalidArgument("class weights must sum to a positive value");
    }
    std::map<SignalClass, std::size_t> counts;
    std::vector<std::pair<double, SignalClass>> remainders;
    std::size_t assigned = 0;
    for (const auto& [cls, w] : weights) {
        const double exact = static_cast<double>(n) * w / total;
        const auto base = static_cast<std::size_t>(std::floor(exact));
        counts[cls] = base;
        assigned += base;
        remainders.emplace_back(exact - static_cast<double>(base), cls);
    }
    // Largest remainder first; ties go to the earlier class.
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
        ++counts[remainders[i % remainders.size()].second];
    }
    return counts;
}

std::vector<SignalClass> class_schedule(const DatasetConfig& config)
{
    const auto counts = allocate_classes(config.effective_mix(), config.n_pairs);
    std::vector<SignalClass> order;
    order.reserve(config.n_pairs);
    for (const auto& [cls, n] : counts) {
        order.insert(order.end(), n, cls);
    }
    CounterRng rng = CounterRng(config.master_seed).split(0x5c4edu);
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

EmitReport emit_dataset(const DatasetConfig& config)
{
    config.validate();
    if (config.output_path.empty()) {
        throw InvalidArgument("output_path is required");
    }
    std::ofstream out(config.output_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(config.output_path, "cannot open dataset for writing");
    }

    namespace fs = std::filesystem;
    const std::string signal_dir = config.output_path + ".signals";
    if (config.emit_signals) {
        std::error_code ec;
        fs::create_directories(signal_dir, ec);
        if (ec) {
            throw IoError(signal_dir, "cannot create signal directory: " + ec.message());
        }
    }
    const std::string signal_dir_name = fs::path(signal_dir).filename().string();

    EmitReport report;
    report.manifest_path = config.output_path + ".manifest.json";
    const json config_json = to_json(config);
    report.config_hash = fnv1a_hex(config_json.dump());

    const std::vector<SignalClass> schedule = class_schedule(config);
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const std::uint64_t seed = derive_seed(config.master_seed, i);
        char ref[32];
        std::snprintf(ref, sizeof ref, "pair_%06zu", i);
        try {
            CounterRng rng(seed);
            PairSpec spec;
            spec.params = sample_params(config.param_ranges, schedule[i], rng);
            spec.grid = config.grid;
            CounterRng style_rng = CounterRng(seed).split(1);
            spec.style = config.question_styles[static_cast<std::size_t>(
                style_rng.uniform_int(0, static_cast<std::int64_t>(config.question_styles.size()) - 1))];
            spec.seed = seed;
            spec.snr_db = config.snr_db;
            spec.unit = config.unit;
            spec.signal_ref = ref;
            if (config.emit_signals) {
                spec.signal_path = signal_dir_name + "/" + ref + ".json";
            }
            BuiltPair built = build_qa_pair(spec);
            if (config.emit_signals) {
                write_signal_file(signal_dir + "/" + ref + ".json", built.signal, built.pair.meta);
            }
            out << to_json(built.pair).dump() << '\n';
            ++report.n_written;
            ++report.class_counts[schedule[i]];
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            report.skipped.push_back({i, e.what()});
        }
    }
    out.flush();
    if (!out) {
        throw IoError(config.output_path, "write failed");
    }

    json counts = json::object();
    for (const auto& [cls, n] : report.class_counts) {
        counts[to_string(cls)] = n;
    }
    json templates = json::object();
    for (auto s : kAllQuestionStyles) {
        templates[to_string(s)] = question_template(s);
    }
    json skipped = json::array();
    for (const auto& s : report.skipped) {
        skipped.push_back(json{{"index", s.index}, {"reason", s.reason}});
    }
    const json manifest{{"master_seed", config.master_seed},
                        {"config_hash", report.config_hash},
                        {"config", config_json},
                        {"n_pairs", config.n_pairs},
                        {"n_written", report.n_written},
                        {"class_counts", counts},
                        {"instruction", kInstruction},
                        {"template_version", kTemplateVersion},
                        {"question_templates", templates},
                        {"skipped", skipped}};
    write_text_file(report.manifest_path, manifest.dump(2) + "\n");
    return report;
}

json to_json(const ValidationReport& r)
{
    return json{{"n_checked", r.n_checked},
                {"n_schema_errors", r.n_schema_errors},
                {"n_answer_mismatches", r.n_answer_mismatches},
                {"errors", r.errors}};
}

ValidationReport validate_dataset(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path, "cannot open dataset for reading");
    }
    ValidationReport r;
    auto record = [&](std::size_t line_no, const std::string& msg) {
        if (r.errors.size() < 20) {
            r.errors.push_back("line " + std::to_string(line_no) + ": " + msg);
        }
    };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        ++r.n_checked;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++r.n_schema_errors;
            record(line_no, "not a JSON object");
            continue;
        }
        std::string schema_problem;
        for (const char* key : {"instruction", "input", "output"}) {
            if (!j.contains(key) || !j.at(key).is_string() || j.at(key).get<std::string>().empty()) {
                schema_problem = std::string("'") + key + "' must be a non-empty string";
                break;
            }
        }
        if (schema_problem.empty() && (!j.contains("meta") || !j.at("meta").is_object())) {
            schema_problem = "'meta' must be an object";
        }
        if (!schema_problem.empty()) {
            ++r.n_schema_errors;
            record(line_no, schema_problem);
            continue;
        }
        const json& meta = j.at("meta");
        if (!meta.contains("params")) {
            continue;  // no ground truth to re-run
        }
        try {
            const BuiltPair rebuilt = build_qa_pair(pair_spec_from_meta(meta));
            if (rebuilt.pair.output != j.at("output").get<std::string>() ||
                rebuilt.pair.input != j.at("input").get<std::string>() ||
                rebuilt.pair.instruction != j.at("instruction").get<std::string>()) {
                ++r.n_answer_mismatches;
                record(line_no, "stored pair differs from the regenerated pair");
            }
        } catch (const std::exception& e) {
            ++r.n_schema_errors;
            record(line_no, std::string("meta cannot be replayed: ") + e.what());
        }
    }
    return r;
}

} // namespace sigtext
