#pragma once

#include "sigtext/sig2txt.hpp"
#include "sigtext/siggen.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sigtext {

enum class QuestionStyle { DescribeSignal, IdentifyKind, ReadFeature };

inline constexpr QuestionStyle kAllQuestionStyles[] = {QuestionStyle::DescribeSignal, QuestionStyle::IdentifyKind,
                                                       QuestionStyle::ReadFeature};

std::string to_string(QuestionStyle style);
QuestionStyle question_style_from_string(const std::string& name);

inline constexpr const char* kInstruction =
    "You are currently an excellent vibration analysis model, please answer the following questions:";

// Bumped whenever a question phrasing or answer format changes.
inline constexpr const char* kTemplateVersion = "1";

// Question phrasing per style; {ref}, {fs}, {duration}, {summary} and {feature} are substituted.
const std::string& question_template(QuestionStyle style);

struct QAPair {
    std::string instruction;
    std::string input;
    std::string output;
    nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json to_json(const QAPair& pair);

// Everything needed to rebuild a pair bit for bit.
struct PairSpec {
    GeneratorParams params;
    SampleGrid grid;
    QuestionStyle style = QuestionStyle::DescribeSignal;
    std::uint64_t seed = 0;
    std::optional<double> snr_db;
    std::string unit = "mm/sec";
    std::string signal_ref = "signal";
    std::optional<std::string> signal_path;
};

struct BuiltPair {
    QAPair pair;
    SampledSignal signal;
    Description description;
};

// Synthesizes the signal, runs the description pipeline and fills the
// question template. Throws when the pipeline fails.
BuiltPair build_qa_pair(const PairSpec& spec);

// Reads the rebuild recipe back from a pair's meta object.
PairSpec pair_spec_from_meta(const nlohmann::json& meta);

struct DatasetConfig {
    std::size_t n_pairs = 100;
    std::map<SignalClass, double> class_mix;  // empty: equal weight on every generator class
    ParamRanges param_ranges;
    std::vector<QuestionStyle> question_styles{QuestionStyle::DescribeSignal, QuestionStyle::IdentifyKind,
                                               QuestionStyle::ReadFeature};
    std::uint64_t master_seed = 0;
    std::string output_path;
    bool emit_signals = false;
    SampleGrid grid{10000.0, 10000};
    std::optional<double> snr_db;
    std::string unit = "mm/sec";

    void validate() const;
    std::map<SignalClass, double> effective_mix() const;
};

DatasetConfig dataset_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DatasetConfig& config);

// Largest-remainder allocation of n items over the weights.
std::map<SignalClass, std::size_t> allocate_classes(const std::map<SignalClass, double>& weights, std::size_t n);

// Per-index generator classes: the allocation, deterministically shuffled by the seed.
std::vector<SignalClass> class_schedule(const DatasetConfig& config);

struct SkippedPair {
    std::size_t index = 0;
    std::string reason;
};

struct EmitReport {
    std::size_t n_written = 0;
    std::map<SignalClass, std::size_t> class_counts;
    std::vector<SkippedPair> skipped;
    std::string manifest_path;
    std::string config_hash;
};

// Writes config.output_path (JSONL) and config.output_path + ".manifest.json";
// with emit_signals, signal files go to config.output_path + ".signals/".
// The output file is opened before any generation.
EmitReport emit_dataset(const DatasetConfig& config);

std::string fnv1a_hex(const std::string& bytes);

struct ValidationReport {
    std::size_t n_checked = 0;
    std::size_t n_schema_errors = 0;
    std::size_t n_answer_mismatches = 0;
    std::vector<std::string> errors;  // first few, "line N: reason"
};

nlohmann::json to_json(const ValidationReport& report);

ValidationReport validate_dataset(const std::string& path);

} // namespace sigtext
