#include "sigtext/signal_io.hpp"

#include "sigtext/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sigtext {

using nlohmann::json;

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path, "cannot open for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path, "cannot open for writing");
    }
    out << text;
    if (!out) {
        throw IoError(path, "write failed");
    }
}

SignalFile parse_signal_json(const std::string& text, const std::string& source)
{
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw FormatError(source + ": not a JSON signal object");
    }
    if (!j.contains("sample_rate_hz") || !j["sample_rate_hz"].is_number()) {
        throw FormatError(source + ": missing numeric 'sample_rate_hz'");
    }
    if (!j.contains("samples") || !j["samples"].is_array()) {
        throw FormatError(source + ": missing 'samples' array");
    }
    SignalFile f;
    f.signal.sample_rate_hz = j["sample_rate_hz"].get<double>();
    f.signal.unit = j.value("unit", std::string("mm/sec"));
    f.signal.samples.reserve(j["samples"].size());
    for (const auto& v : j["samples"]) {
        if (!v.is_number()) {
            throw FormatError(source + ": non-numeric sample");
        }
        f.signal.samples.push_back(v.get<double>());
    }
    if (j.contains("n_samples") &&
        (!j["n_samples"].is_number_unsigned() || j["n_samples"].get<std::size_t>() != f.signal.samples.size())) {
        throw FormatError(source + ": 'n_samples' does not match the samples array");
    }
    if (j.contains("meta")) {
        f.meta = j["meta"];
    }
    try {
        f.signal.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(source + ": " + e.what());
    }
    return f;
}

SampledSignal parse_signal_csv(std::istream& in, const std::string& source, const std::string& unit)
{
    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw FormatError(source + ":" + std::to_string(line_no) + ": expected 'time_s,value'");
        }
        const std::string a = line.substr(0, comma);
        const std::string b = line.substr(comma + 1);
        char* end_a = nullptr;
        char* end_b = nullptr;
        const double t = std::strtod(a.c_str(), &end_a);
        const double v = std::strtod(b.c_str(), &end_b);
        const bool numeric = end_a != a.c_str() && end_b != b.c_str();
        if (!numeric) {
            if (times.empty() && line_no == 1) {
                continue;  // header
            }
            throw FormatError(source + ":" + std::to_string(line_no) + ": non-numeric row");
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (values.size() < 2) {
        throw FormatError(source + ": need at least two samples");
    }
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) {
        throw FormatError(source + ": time column must increase");
    }
    for (std::size_t i = 2; i < times.size(); ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6 * dt) {
            throw FormatError(source + ": non-uniform sampling at row " + std::to_string(i + 1));
        }
    }
    SampledSignal s(std::move(values), 1.0 / dt, unit);
    return s;
}

SignalFile read_signal_file(const std::string& path)
{
    const std::string text = read_text_file(path);
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    if (csv) {
        std::istringstream in(text);
        return SignalFile{parse_signal_csv(in, path), json::object()};
    }
    return parse_signal_json(text, path);
}

std::string signal_json_text(const SampledSignal& signal, const json& meta)
{
    json j{{"sample_rate_hz", signal.sample_rate_hz},
           {"unit", signal.unit},
           {"n_samples", signal.size()},
           {"samples", signal.samples}};
    if (!meta.is_null() && !(meta.is_object() && meta.empty())) {
        j["meta"] = meta;
    }
    return j.dump() + "\n";
}

void write_signal_file(const std::string& path, const SampledSignal& signal, const json& meta)
{
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    if (!csv) {
        write_text_file(path, signal_json_text(signal, meta));
        return;
    }
    std::ostringstream out;
    out << "time_s,value\n";
    char buf[64];
    for (std::size_t i = 0; i < signal.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", static_cast<double>(i) / signal.sample_rate_hz,
                      signal.samples[i]);
        out << buf;
    }
    write_text_file(path, out.str());
}

} // namespace sigtext
