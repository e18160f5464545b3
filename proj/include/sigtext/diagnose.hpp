#pragma once

#include "sigtext/sig2txt.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sigtext {

inline constexpr const char* kDiagnosisSystem =
    "You are currently an excellent vibration analysis model, please answer the following questions:";

inline constexpr const char* kReasoningDirective =
    "Reason step by step: first summarize the key mathematical features of the signal, then relate them to the "
    "equipment's physical characteristics, then infer the most probable fault state. Finish with the letter and "
    "text of the chosen option on the last line.";

struct CotPrompt {
    std::string system;
    std::string equipment_context;
    std::string signal_description;
    std::string question;
    std::string rendered;  // user message: every section in fixed order with headers
};

// Sections are rendered in the order system, equipment context, signal
// description, question, directive. An empty context is marked absent.
CotPrompt assemble_cot_prompt(const Description& desc, const std::string& equipment_context,
                              const std::string& question);
CotPrompt assemble_cot_prompt(const std::string& signal_description, const std::string& equipment_context,
                              const std::string& question);

// Option letters offered in a multiple-choice question ("A. ...", "B) ...").
std::vector<char> offered_choices(const std::string& question);

// Leading "A."-"D." style option letter of a reply, kept only when offered.
std::optional<char> extract_choice(const std::string& reply, const std::vector<char>& offered);

struct LlmConfig {
    std::string endpoint = "http://127.0.0.1:8000/v1/chat/completions";
    std::string model = "maint-model";
    std::string api_key_env = "SIGTEXT_API_KEY";
    double timeout_s = 30.0;
    int max_retries = 2;
    std::string transcript_path;  // empty: transcript kept in memory only

    void validate() const;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Sends one request. Throws NetworkError when the endpoint cannot be reached.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual HttpResponse post(const std::string& url, const std::string& body,
                              const std::vector<std::pair<std::string, std::string>>& headers, double timeout_s) = 0;
};

class HttplibTransport : public ChatTransport {
public:
    HttpResponse post(const std::string& url, const std::string& body,
                      const std::vector<std::pair<std::string, std::string>>& headers, double timeout_s) override;
};

nlohmann::json chat_request_body(const CotPrompt& prompt, const LlmConfig& config);

struct DiagnosisAnswer {
    std::string raw_reply;
    std::optional<char> choice;
    nlohmann::json transcript = nlohmann::json::array();  // one entry per attempt
    std::string transcript_path;
};

// 1 + max_retries attempts; NetworkError after the last failed one.
// A reply without a readable message keeps the raw body and no choice.
DiagnosisAnswer chat_complete(const CotPrompt& prompt, const LlmConfig& config, ChatTransport& transport);

} // namespace sigtext
