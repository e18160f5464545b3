#include "sigtext/diagnose.hpp"

#include "sigtext/error.hpp"
#include "sigtext/signal_io.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <regex>

namespace sigtext {

using nlohmann::json;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

CotPrompt assemble_cot_prompt(const std::string& signal_description, const std::string& equipment_context,
                              const std::string& question)
{
    const std::string q = trim(question);
    if (q.empty()) {
        throw InvalidArgument("diagnosis question must not be empty");
    }
    CotPrompt p;
    p.system = kDiagnosisSystem;
    p.equipment_context = trim(equipment_context);
    p.signal_description = trim(signal_description);
    p.question = q;

    std::string r;
    r += "### System\n" + p.system + "\n\n";
    r += "### Equipment context\n" + (p.equipment_context.empty() ? std::string("(absent)") : p.equipment_context) +
         "\n\n";
    r += "### Signal description\n" +
         (p.signal_description.empty() ? std::string("(absent)") : p.signal_description) + "\n\n";
    r += "### Question\n" + p.question + "\n\n";
    r += "### Instructions\n" + std::string(kReasoningDirective) + "\n";
    p.rendered = std::move(r);
    return p;
}

CotPrompt assemble_cot_prompt(const Description& desc, const std::string& equipment_context,
                              const std::string& question)
{
    return assemble_cot_prompt(desc.rendered_text, equipment_context, question);
}

std::vector<char> offered_choices(const std::string& question)
{
    static const std::regex option(R"((^|\s)([A-D])[.)]\s)");
    std::vector<char> out;
    for (auto it = std::sregex_iterator(question.begin(), question.end(), option); it != std::sregex_iterator();
         ++it) {
        const char c = (*it)[2].str()[0];
        if (std::find(out.begin(), out.end(), c) == out.end()) {
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<char> extract_choice(const std::string& reply, const std::vector<char>& offered)
{
    static const std::regex leading(
        R"(^\s*(?:(?:[Tt]he )?[Aa]nswer(?: is)?\s*:?\s*)?\(?([A-D])(?:[.):]|\s*$))");
    std::smatch m;
    if (!std::regex_search(reply, m, leading)) {
        return std::nullopt;
    }
    const char c = m[1].str()[0];
    if (std::find(offered.begin(), offered.end(), c) == offered.end()) {
        return std::nullopt;
    }
    return c;
}

void LlmConfig::validate() const
{
    if (!(timeout_s > 0.0) || !std::isfinite(timeout_s)) {
        throw InvalidArgument("timeout_s must be positive");
    }
    if (max_retries < 0) {
        throw InvalidArgument("max_retries must be non-negative");
    }
    if (endpoint.empty()) {
        throw InvalidArgument("endpoint must not be empty");
    }
}

HttpResponse HttplibTransport::post(const std::string& url, const std::string& body,
                                    const std::vector<std::pair<std::string, std::string>>& headers, double timeout_s)
{
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, url_re)) {
        throw InvalidArgument("endpoint must be an http(s) URL: " + url);
    }
    const std::string base = m[1].str();
    const std::string path = m[2].matched ? m[2].str() : std::string("/");

    httplib::Client client(base);
    const auto secs = static_cast<time_t>(timeout_s);
    const auto usecs = static_cast<time_t>((timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers h;
    for (const auto& [k, v] : headers) {
        h.emplace(k, v);
    }
    auto res = client.Post(path, h, body, "application/json");
    if (!res) {
        throw NetworkError("request to " + url + " failed: " + httplib::to_string(res.error()), 1);
    }
    return HttpResponse{res->status, res->body};
}

json chat_request_body(const CotPrompt& prompt, const LlmConfig& config)
{
    return json{{"model", config.model},
                {"messages",
                 json::array({json{{"role", "system"}, {"content", prompt.system}},
                              json{{"role", "user"}, {"content", prompt.rendered}}})}};
}

DiagnosisAnswer chat_complete(const CotPrompt& prompt, const LlmConfig& config, ChatTransport& transport)
{
    config.validate();
    const json body = chat_request_body(prompt, config);
    const std::string body_text = body.dump();

    std::vector<std::pair<std::string, std::string>> headers;
    if (!config.api_key_env.empty()) {
        if (const char* key = std::getenv(config.api_key_env.c_str()); key != nullptr && *key != '\0') {
            headers.emplace_back("Authorization", std::string("Bearer ") + key);
        }
    }

    DiagnosisAnswer answer;
    answer.transcript_path = config.transcript_path;
    auto flush_transcript = [&] {
        if (!config.transcript_path.empty()) {
            write_text_file(config.transcript_path, answer.transcript.dump(2) + "\n");
        }
    };

    const int attempts = 1 + config.max_retries;
    std::string last_error;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        json entry{{"attempt", attempt}, {"endpoint", config.endpoint}, {"request", body}};
        try {
            const HttpResponse res = transport.post(config.endpoint, body_text, headers, config.timeout_s);
            entry["status"] = res.status;
            entry["response"] = res.body;
            answer.transcript.push_back(entry);
            if (res.status < 200 || res.status >= 300) {
                last_error = "HTTP status " + std::to_string(res.status);
                continue;
            }
            const json reply = json::parse(res.body, nullptr, false);
            const json* content = nullptr;
            if (!reply.is_discarded() && reply.is_object() && reply.contains("choices") &&
                reply["choices"].is_array() && !reply["choices"].empty()) {
                const json& first = reply["choices"][0];
                if (first.contains("message") && first["message"].contains("content") &&
                    first["message"]["content"].is_string()) {
                    content = &first["message"]["content"];
                }
            }
            if (content == nullptr) {
                answer.raw_reply = res.body;
            } else {
                answer.raw_reply = content->get<std::string>();
                answer.choice = extract_choice(answer.raw_reply, offered_choices(prompt.question));
            }
            flush_transcript();
            return answer;
        } catch (const NetworkError& e) {
            last_error = e.what();
            entry["error"] = last_error;
            answer.transcript.push_back(entry);
        }
    }
    flush_transcript();
    throw NetworkError("chat completion failed after " + std::to_string(attempts) + " attempts: " + last_error,
                       attempts);
}

} // namespace sigtext
