#include "sigtext/cli.hpp"
#include "sigtext/signal_io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace sigtext;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

json schema(const std::string& name)
{
    return json::parse(read_text_file(std::string(SIGTEXT_SCHEMA_DIR) + "/" + name + ".schema.json"));
}

void check_schema(const std::string& name, const std::string& text)
{
    const json doc = json::parse(text);
    const std::string v = testutil::schema_violation(schema(name), doc);
    CHECK_MESSAGE(v.empty(), name << ": " << v);
}

} // namespace

TEST_CASE("generate then describe the single-harmonic example")
{
    const auto dir = testutil::temp_dir("cli_gen");
    const std::string sig = (dir / "x.json").string();
    const Run g = cli({"generate", "--kind", "harmonic", "--freq", "30", "--amp", "4", "--phase", "0", "-o", sig});
    REQUIRE(g.code == 0);
    check_schema("generate", g.out);
    check_schema("signal", read_text_file(sig));

    const Run d = cli({"describe", sig});
    REQUIRE(d.code == 0);
    CHECK(d.out.find("the frequency is 30 Hz") != std::string::npos);
    CHECK(d.out.find("the period is 0.03333 seconds") != std::string::npos);

    const Run dj = cli({"describe", sig, "--json"});
    REQUIRE(dj.code == 0);
    check_schema("describe", dj.out);
    CHECK(json::parse(dj.out)["kind"] == "single_harmonic");

    const Run stdout_sig = cli({"generate", "--kind", "multi", "--params", R"({"fundamental_hz":50,"amplitudes":[1,0.5]})"});
    REQUIRE(stdout_sig.code == 0);
    check_schema("signal", stdout_sig.out);
}

TEST_CASE("features, denoise, plot and diagnose outputs follow their schemas")
{
    const auto dir = testutil::temp_dir("cli_schemas");
    const std::string sig = (dir / "x.json").string();
    REQUIRE(cli({"generate", "--kind", "gear", "--random", "--seed", "5", "--fs", "5000", "--snr", "20", "-o", sig}).code ==
            0);

    const Run f = cli({"features", sig, "--arrays"});
    REQUIRE(f.code == 0);
    check_schema("features", f.out);
    const Run fh = cli({"features", sig, "--window", "hann"});
    REQUIRE(fh.code == 0);
    check_schema("features", fh.out);

    const std::string clean = (dir / "clean.csv").string();
    const Run dn = cli({"denoise", sig, "--auto-bands", "2", "-o", clean, "--residual", (dir / "res.json").string()});
    REQUIRE(dn.code == 0);
    check_schema("denoise", dn.out);
    CHECK(read_signal_file(clean).signal.size() == 5000);
    const Run db = cli({"denoise", sig, "--band", "100:5", "--window-len", "400"});
    REQUIRE(db.code == 0);
    check_schema("denoise", db.out);

    const std::string svg = (dir / "x.svg").string();
    const Run p = cli({"plot", sig, "-o", svg, "--max-freq", "2000"});
    REQUIRE(p.code == 0);
    check_schema("plot", p.out);
    CHECK(read_text_file(svg).rfind("<svg", 0) == 0);

    const std::string ctx = (dir / "ctx.txt").string();
    write_text_file(ctx, "Gearbox, input shaft 25 Hz.");
    const Run dg = cli({"diagnose", sig, "--context", ctx, "--question", "What is wrong? A. Wear B. Crack", "--mock-reply",
                        "B. Crack", "--transcript", (dir / "t.json").string()});
    REQUIRE(dg.code == 0);
    check_schema("diagnose", dg.out);
    CHECK(json::parse(dg.out)["answer"]["choice"] == "B");
    const Run dp = cli({"diagnose", sig, "--question", "Q?"});
    REQUIRE(dp.code == 0);
    check_schema("diagnose", dp.out);
}

TEST_CASE("dataset command is reproducible and validates")
{
    const auto dir = testutil::temp_dir("cli_dataset");
    const std::string cfg = (dir / "c.json").string();
    write_text_file(cfg, json{{"n_pairs", 14}, {"master_seed", 3}, {"output_path", (dir / "a.jsonl").string()},
                              {"sample_rate_hz", 4000}, {"n_samples", 4000},
                              {"param_ranges", {{"max_frequency_hz", 1800}}}}
                             .dump());
    const Run a = cli({"dataset", "--config", cfg});
    REQUIRE(a.code == 0);
    check_schema("dataset", a.out);
    const Run b = cli({"dataset", "--config", cfg, "--output", (dir / "b.jsonl").string()});
    REQUIRE(b.code == 0);
    CHECK(read_text_file((dir / "a.jsonl").string()) == read_text_file((dir / "b.jsonl").string()));

    std::istringstream lines(read_text_file((dir / "a.jsonl").string()));
    for (std::string l; std::getline(lines, l);) {
        check_schema("qa_pair", l);
    }
    const Run v = cli({"dataset", "--validate", (dir / "a.jsonl").string()});
    REQUIRE(v.code == 0);
    check_schema("validation", v.out);
    CHECK(json::parse(v.out)["n_answer_mismatches"] == 0);

    write_text_file((dir / "bad.jsonl").string(), "{\"instruction\": 1}\n");
    const Run bad = cli({"dataset", "--validate", (dir / "bad.jsonl").string()});
    CHECK(bad.code == 1);
    check_schema("validation", bad.out);
    check_schema("error", bad.err);
}

TEST_CASE("errors are single machine-readable lines")
{
    const Run missing = cli({"describe", "/nonexistent/signal.json"});
    CHECK(missing.code == 1);
    check_schema("error", missing.err);
    CHECK(json::parse(missing.err)["path"] == "/nonexistent/signal.json");
    CHECK(missing.err.find('\n') == missing.err.size() - 1);

    const Run bad_kind = cli({"generate", "--kind", "sawtooth"});
    CHECK(bad_kind.code == 1);
    check_schema("error", bad_kind.err);

    const Run unknown = cli({"describe", "x.json", "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("Usage") != std::string::npos);

    CHECK(cli({}).code == 2);
    CHECK(cli({"dataset"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}
