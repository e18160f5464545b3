#include "sigtext/dataset.hpp"
#include "sigtext/error.hpp"
#include "sigtext/signal_io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace sigtext;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& path)
{
    std::istringstream in(read_text_file(path));
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

DatasetConfig small_config(const std::string& path, std::size_t n = 40)
{
    DatasetConfig c;
    c.n_pairs = n;
    c.master_seed = 7;
    c.output_path = path;
    c.grid = SampleGrid(4000.0, 4000);
    c.param_ranges.max_frequency_hz = 1800.0;
    return c;
}

PairSpec spec(GeneratorParams p, SampleGrid g, QuestionStyle style, std::uint64_t seed,
              std::optional<double> snr = std::nullopt)
{
    PairSpec s;
    s.params = std::move(p);
    s.grid = g;
    s.style = style;
    s.seed = seed;
    s.snr_db = snr;
    return s;
}

} // namespace

TEST_CASE("single-harmonic describe pair carries the template sentences")
{
    const PairSpec s = spec(HarmonicParams{4.0, 30.0, 0.0}, SampleGrid(1000.0, 1000), QuestionStyle::DescribeSignal, 1);
    const BuiltPair b = build_qa_pair(s);
    CHECK(b.pair.instruction == kInstruction);
    CHECK(b.pair.output.find("the frequency is 30 Hz") != std::string::npos);
    CHECK(b.pair.output.find("amplitude of the frequency is 4 mm/sec") != std::string::npos);
    CHECK_FALSE(b.pair.input.empty());
    CHECK(b.pair.meta["kind"] == "single_harmonic");

    const BuiltPair again = build_qa_pair(s);
    CHECK(to_json(again.pair).dump() == to_json(b.pair).dump());
}

TEST_CASE("identify-kind pair names the class")
{
    const PairSpec s = spec(MultiHarmonicParams{100.0, {4.02, 0.689, 0.344}, {}}, SampleGrid(1000.0, 1000),
                            QuestionStyle::IdentifyKind, 3);
    const BuiltPair b = build_qa_pair(s);
    CHECK(b.pair.output.find("multi-harmonic periodic signal") != std::string::npos);
}

TEST_CASE("pair meta replays the pair")
{
    for (QuestionStyle st : kAllQuestionStyles) {
        const PairSpec s =
            spec(GearParams{800.0, 20.0, 2, {0.5, 0.4}, {0.1, 0.05}, {}, {}, {}}, SampleGrid(4000.0, 4000), st, 99, 25.0);
        const BuiltPair b = build_qa_pair(s);
        const BuiltPair r = build_qa_pair(pair_spec_from_meta(b.pair.meta));
        CHECK(to_json(r.pair).dump() == to_json(b.pair).dump());
    }
}

TEST_CASE("largest-remainder allocation")
{
    std::map<SignalClass, double> w;
    for (SignalClass c : kAllSignalClasses) {
        w[c] = 1.0;
    }
    const auto a = allocate_classes(w, 1000);
    std::size_t total = 0;
    for (const auto& [c, n] : a) {
        CHECK(std::abs(static_cast<double>(n) - 1000.0 / 7.0) <= 1.0);
        total += n;
    }
    CHECK(total == 1000);

    const auto b = allocate_classes({{SignalClass::Bearing, 1.0}, {SignalClass::Gear, 0.0}}, 10);
    CHECK(b.at(SignalClass::Bearing) == 10);
    CHECK((b.count(SignalClass::Gear) == 0 || b.at(SignalClass::Gear) == 0));
    CHECK_THROWS_AS(allocate_classes({{SignalClass::Gear, -1.0}}, 10), InvalidArgument);
}

TEST_CASE("dataset config JSON round trip and validation")
{
    DatasetConfig c = small_config("/tmp/x.jsonl");
    c.class_mix = {{SignalClass::Gear, 2.0}, {SignalClass::Bearing, 1.0}};
    c.snr_db = 30.0;
    const DatasetConfig back = dataset_config_from_json(to_json(c));
    CHECK(to_json(back).dump() == to_json(c).dump());
    CHECK_THROWS_AS(dataset_config_from_json(json{{"n_pairs", 0}, {"output_path", "a"}}), InvalidArgument);
    CHECK_THROWS_AS(dataset_config_from_json(json{{"n_pairs", 3}, {"output_path", "a"}, {"bogus", 1}}), FormatError);
}

TEST_CASE("emitted datasets are deterministic and validate cleanly")
{
    const auto dir = testutil::temp_dir("dataset_det");
    const std::string a = (dir / "a.jsonl").string();
    const std::string b = (dir / "b.jsonl").string();
    const EmitReport ra = emit_dataset(small_config(a, 60));
    emit_dataset(small_config(b, 60));
    CHECK(read_text_file(a) == read_text_file(b));
    CHECK(ra.n_written == 60);
    CHECK(ra.skipped.empty());
    // Every generator class is covered.
    CHECK(ra.class_counts.size() == 7);

    const auto ls = lines_of(a);
    REQUIRE(ls.size() == 60);
    for (const auto& l : ls) {
        const json j = json::parse(l);
        CHECK(j.size() == 4);
        CHECK_FALSE(j["instruction"].get<std::string>().empty());
        CHECK_FALSE(j["input"].get<std::string>().empty());
        CHECK_FALSE(j["output"].get<std::string>().empty());
    }
    const json manifest = json::parse(read_text_file(ra.manifest_path));
    CHECK(manifest["master_seed"] == 7);
    CHECK(manifest["config_hash"] == ra.config_hash);
    CHECK(manifest["template_version"] == kTemplateVersion);

    const ValidationReport v = validate_dataset(a);
    CHECK(v.n_checked == 60);
    CHECK(v.n_schema_errors == 0);
    CHECK(v.n_answer_mismatches == 0);
}

TEST_CASE("validation finds injected faults")
{
    const auto dir = testutil::temp_dir("dataset_faults");
    const std::string path = (dir / "d.jsonl").string();
    emit_dataset(small_config(path, 10));
    auto ls = lines_of(path);

    json j = json::parse(ls[3]);
    j["output"] = j["output"].get<std::string>() + " Tampered.";
    ls[3] = j.dump();
    std::string text;
    for (const auto& l : ls) {
        text += l + "\n";
    }
    const std::string corrupted = (dir / "corrupted.jsonl").string();
    write_text_file(corrupted, text);
    const ValidationReport r1 = validate_dataset(corrupted);
    CHECK(r1.n_answer_mismatches == 1);
    CHECK(r1.n_schema_errors == 0);
    REQUIRE_FALSE(r1.errors.empty());
    CHECK(r1.errors[0].rfind("line 4", 0) == 0);

    const std::string full = read_text_file(path);
    const std::string truncated = (dir / "truncated.jsonl").string();
    write_text_file(truncated, full.substr(0, full.size() - 40));
    const ValidationReport r2 = validate_dataset(truncated);
    CHECK(r2.n_schema_errors == 1);
    CHECK(r2.n_answer_mismatches == 0);
    CHECK(r2.n_checked == 10);

    CHECK_THROWS_AS(validate_dataset((dir / "missing.jsonl").string()), IoError);
}

TEST_CASE("bearing-only datasets mention periodic impacts in every answer")
{
    const auto dir = testutil::temp_dir("dataset_bearing");
    DatasetConfig c = small_config((dir / "b.jsonl").string(), 100);
    c.class_mix = {{SignalClass::Bearing, 1.0}};
    c.grid = SampleGrid(10000.0, 10000);
    c.param_ranges.max_frequency_hz = 4500.0;
    const EmitReport r = emit_dataset(c);
    CHECK(r.n_written == 100);
    CHECK(r.class_counts.at(SignalClass::Bearing) == 100);
    for (const auto& l : lines_of(c.output_path)) {
        const json j = json::parse(l);
        CHECK(j["meta"]["class"] == "bearing");
        CHECK(j["output"].get<std::string>().find("impacts") != std::string::npos);
    }
}

TEST_CASE("signal files are written beside the dataset on request")
{
    const auto dir = testutil::temp_dir("dataset_signals");
    DatasetConfig c = small_config((dir / "s.jsonl").string(), 3);
    c.emit_signals = true;
    emit_dataset(c);
    for (const auto& l : lines_of(c.output_path)) {
        const json j = json::parse(l);
        // Stored relative to the dataset's directory.
        const std::string p = j["meta"]["signal_path"].get<std::string>();
        CHECK(read_signal_file((dir / p).string()).signal.size() == 4000);
    }
}

TEST_CASE("ranges above the grid's Nyquist frequency are rejected")
{
    DatasetConfig c = small_config("/tmp/unused.jsonl", 5);
    c.param_ranges.max_frequency_hz = 2500.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("unwritable output fails before generation")
{
    DatasetConfig c = small_config("/nonexistent/dir/out.jsonl", 5);
    CHECK_THROWS_AS(emit_dataset(c), IoError);
}
