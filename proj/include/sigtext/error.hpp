#pragma once

#include <stdexcept>
#include <string>

namespace sigtext {

// Base of every error raised by the library. `code()` is a stable snake_case
// identifier suitable for machine-readable CLI output.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message) : Error("invalid_argument", message) {}
};

// A deterministic component would sit at or above the Nyquist frequency.
class AliasingError : public Error {
public:
    AliasingError(double frequency_hz, double sample_rate_hz);

    double frequency_hz() const noexcept { return frequency_hz_; }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }

private:
    double frequency_hz_;
    double sample_rate_hz_;
};

class DivisionError : public Error {
public:
    explicit DivisionError(std::size_t sample_index);

    std::size_t sample_index() const noexcept { return sample_index_; }

private:
    std::size_t sample_index_;
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& message) : Error("dimension_mismatch", message) {}
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& message)
        : Error("io_error", path + ": " + message), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& message) : Error("format_error", message) {}
};

// Failure inside the sig2txt pipeline, tagged with the stage that raised it
// ("denoise", "spectrum", "features", "classify", "render").
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& message)
        : Error("pipeline_error", stage + ": " + message), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

// A required feature was absent when rendering a template.
class MissingFeature : public Error {
public:
    explicit MissingFeature(const std::string& field)
        : Error("missing_feature", "required feature is absent: " + field), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class NetworkError : public Error {
public:
    NetworkError(const std::string& message, int attempts)
        : Error("network_error", message), attempts_(attempts) {}

    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

} // namespace sigtext
