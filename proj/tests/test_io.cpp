#include "sigtext/error.hpp"
#include "sigtext/siggen.hpp"
#include "sigtext/signal_io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace sigtext;

TEST_CASE("signal JSON round trip is exact")
{
    const auto x = add_noise(synthesize(HarmonicParams{4.0, 30.0, 0.3}, SampleGrid(1000.0, 500)), 10.0, 1);
    const std::string text = signal_json_text(x, nlohmann::json{{"note", "abc"}});
    const SignalFile back = parse_signal_json(text);
    CHECK(back.signal.samples == x.samples);
    CHECK(back.signal.sample_rate_hz == x.sample_rate_hz);
    CHECK(back.signal.unit == x.unit);
    CHECK(back.meta["note"] == "abc");
    CHECK(signal_json_text(x).find("meta") == std::string::npos);

    const auto dir = testutil::temp_dir("io_json");
    const std::string path = (dir / "s.json").string();
    write_signal_file(path, x);
    CHECK(read_signal_file(path).signal.samples == x.samples);
}

TEST_CASE("signal JSON rejects malformed containers")
{
    CHECK_THROWS_AS(parse_signal_json("{"), FormatError);
    CHECK_THROWS_AS(parse_signal_json(R"({"samples":[1,2,3]})"), FormatError);
    CHECK_THROWS_AS(parse_signal_json(R"({"sample_rate_hz":10,"samples":[1,"x"]})"), FormatError);
    CHECK_THROWS_AS(parse_signal_json(R"({"sample_rate_hz":10,"n_samples":4,"samples":[1,2,3]})"), FormatError);
}

TEST_CASE("signal CSV round trip and inference")
{
    const auto x = synthesize(HarmonicParams{1.0, 5.0, 0.0}, SampleGrid(200.0, 100));
    const auto dir = testutil::temp_dir("io_csv");
    const std::string path = (dir / "s.csv").string();
    write_signal_file(path, x);
    const SignalFile back = read_signal_file(path);
    CHECK(back.signal.sample_rate_hz == doctest::Approx(200.0).epsilon(1e-9));
    CHECK(back.signal.samples == x.samples);

    std::istringstream no_header("0,1\n0.5,2\n1.0,3\n");
    const SampledSignal s = parse_signal_csv(no_header);
    CHECK(s.sample_rate_hz == doctest::Approx(2.0));
    CHECK(s.samples == std::vector<double>{1, 2, 3});

    std::istringstream uneven("time_s,value\n0,1\n0.5,2\n1.2,3\n");
    CHECK_THROWS_AS(parse_signal_csv(uneven), FormatError);
    std::istringstream junk("t,v\n0,1\n0.5,abc\n");
    CHECK_THROWS_AS(parse_signal_csv(junk), FormatError);
}

TEST_CASE("missing files raise an error naming the path")
{
    try {
        read_signal_file("/nonexistent/dir/signal.json");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(e.path() == "/nonexistent/dir/signal.json");
    }
    CHECK_THROWS_AS(write_text_file("/nonexistent/dir/out.txt", "x"), IoError);
}
