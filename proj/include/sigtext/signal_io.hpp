#pragma once

#include "sigtext/signal.hpp"

#include <json.hpp>

#include <istream>
#include <string>

namespace sigtext {

struct SignalFile {
    SampledSignal signal;
    nlohmann::json meta = nlohmann::json::object();
};

// JSON container {"sample_rate_hz", "unit", "samples", "meta"}.
SignalFile parse_signal_json(const std::string& text, const std::string& source = "<memory>");

// Two-column CSV "time_s,value" (header optional). The sample rate comes from
// the first two rows; every later step must match within 1e-6 relative.
SampledSignal parse_signal_csv(std::istream& in, const std::string& source = "<memory>",
                               const std::string& unit = "mm/sec");

// Dispatches on the extension: .csv is CSV, anything else the JSON container.
SignalFile read_signal_file(const std::string& path);

std::string signal_json_text(const SampledSignal& signal, const nlohmann::json& meta = nlohmann::json::object());

void write_signal_file(const std::string& path, const SampledSignal& signal,
                       const nlohmann::json& meta = nlohmann::json::object());

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace sigtext
