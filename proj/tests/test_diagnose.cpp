#include "sigtext/diagnose.hpp"
#include "sigtext/error.hpp"
#include "sigtext/sig2txt.hpp"
#include "sigtext/signal_io.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace sigtext;
using nlohmann::json;

namespace {

const std::string kQuestion =
    "The rotational frequency of the equipment is 60 Hz. What type of fault or condition is the equipment "
    "experiencing? A. Unbalance B. Misalignment C. Looseness D. Blade Pass";

class ScriptedTransport : public ChatTransport {
public:
    std::vector<HttpResponse> replies;
    std::vector<std::string> bodies;
    bool fail_network = false;

    HttpResponse post(const std::string&, const std::string& body,
                      const std::vector<std::pair<std::string, std::string>>&, double) override
    {
        bodies.push_back(body);
        if (fail_network) {
            throw NetworkError("connection refused", 1);
        }
        const HttpResponse r = replies.at(std::min(bodies.size() - 1, replies.size() - 1));
        return r;
    }
};

HttpResponse chat_reply(const std::string& content)
{
    json body{{"choices", json::array({json{{"message", {{"role", "assistant"}, {"content", content}}}}})}};
    return {200, body.dump()};
}

Description table7()
{
    return sig2txt(synthesize(MultiHarmonicParams{100.0, {4.02, 0.689, 0.344}, {}}, SampleGrid(1000.0, 1000)));
}

} // namespace

TEST_CASE("prompt sections appear in fixed order")
{
    const CotPrompt p = assemble_cot_prompt(table7(), "pump, 60 Hz shaft speed", kQuestion);
    const std::string& r = p.rendered;
    const auto sys = r.find("### System");
    const auto ctx = r.find("### Equipment context");
    const auto sig = r.find("### Signal description");
    const auto q = r.find("### Question");
    const auto ins = r.find("### Instructions");
    REQUIRE(sys != std::string::npos);
    CHECK(sys < ctx);
    CHECK(ctx < sig);
    CHECK(sig < q);
    CHECK(q < ins);
    CHECK(r.find("60 Hz shaft speed") != std::string::npos);
    CHECK(r.find("the frequency of the 2nd harmonic is 200 Hz") != std::string::npos);
    CHECK(r.find(kReasoningDirective) != std::string::npos);
    CHECK(p.system == kDiagnosisSystem);
    CHECK(assemble_cot_prompt(table7(), "pump, 60 Hz shaft speed", kQuestion).rendered == r);
}

TEST_CASE("prompt preconditions")
{
    CHECK_THROWS_AS(assemble_cot_prompt("desc", "ctx", "  "), InvalidArgument);
    const CotPrompt p = assemble_cot_prompt("desc", "", "Q?");
    CHECK(p.rendered.find("### Equipment context\n(absent)") != std::string::npos);
}

TEST_CASE("choice extraction")
{
    const auto offered = offered_choices(kQuestion);
    CHECK(offered == std::vector<char>{'A', 'B', 'C', 'D'});
    CHECK(extract_choice("B. Misalignment", offered) == 'B');
    CHECK(extract_choice("Answer: C", offered) == 'C');
    CHECK(extract_choice("(D) Blade Pass", offered) == 'D');
    CHECK_FALSE(extract_choice("A misalignment is likely", offered).has_value());
    CHECK_FALSE(extract_choice("The shaft is probably bent.", offered).has_value());
    CHECK_FALSE(extract_choice("D. Blade Pass", {'A', 'B'}).has_value());
}

TEST_CASE("mock completion extracts the expected letter")
{
    ScriptedTransport t;
    t.replies = {chat_reply("B. Misalignment")};
    LlmConfig cfg;
    const CotPrompt p = assemble_cot_prompt(table7(), "", kQuestion);
    const DiagnosisAnswer a = chat_complete(p, cfg, t);
    CHECK(a.choice == 'B');
    CHECK(a.raw_reply == "B. Misalignment");
    REQUIRE(t.bodies.size() == 1);
    const json req = json::parse(t.bodies[0]);
    CHECK(req["model"] == cfg.model);
    CHECK(req["messages"][0]["role"] == "system");
    CHECK(req["messages"][1]["content"] == p.rendered);
}

TEST_CASE("free text and malformed replies keep the raw reply")
{
    ScriptedTransport t;
    t.replies = {chat_reply("The machine looks healthy to me.")};
    const CotPrompt p = assemble_cot_prompt("desc", "", kQuestion);
    const DiagnosisAnswer a = chat_complete(p, LlmConfig{}, t);
    CHECK_FALSE(a.choice.has_value());
    CHECK(a.raw_reply == "The machine looks healthy to me.");

    ScriptedTransport m;
    m.replies = {HttpResponse{200, "not json"}};
    const DiagnosisAnswer b = chat_complete(p, LlmConfig{}, m);
    CHECK_FALSE(b.choice.has_value());
    CHECK(b.raw_reply == "not json");
}

TEST_CASE("network failures are retried then reported")
{
    ScriptedTransport t;
    t.fail_network = true;
    LlmConfig cfg;
    cfg.max_retries = 2;
    const auto dir = testutil::temp_dir("diagnose_fail");
    cfg.transcript_path = (dir / "t.json").string();
    const CotPrompt p = assemble_cot_prompt("desc", "", kQuestion);
    try {
        chat_complete(p, cfg, t);
        FAIL("expected NetworkError");
    } catch (const NetworkError& e) {
        CHECK(e.attempts() == 3);
    }
    CHECK(t.bodies.size() == 3);
    const json transcript = json::parse(read_text_file(cfg.transcript_path));
    CHECK(transcript.size() == 3);

    ScriptedTransport flaky;
    flaky.replies = {HttpResponse{503, "busy"}, chat_reply("C. Looseness")};
    const DiagnosisAnswer a = chat_complete(p, LlmConfig{}, flaky);
    CHECK(a.choice == 'C');
    CHECK(a.transcript.size() == 2);
}

TEST_CASE("a real transport reports an unreachable endpoint as a network error")
{
    HttplibTransport t;
    LlmConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.max_retries = 1;
    cfg.timeout_s = 2.0;
    try {
        chat_complete(assemble_cot_prompt("desc", "", kQuestion), cfg, t);
        FAIL("expected NetworkError");
    } catch (const NetworkError& e) {
        CHECK(e.attempts() == 2);
    }
}

TEST_CASE("llm config validation")
{
    LlmConfig c;
    c.timeout_s = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = LlmConfig{};
    c.max_retries = -1;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}
