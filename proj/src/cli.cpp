#include "sigtext/cli.hpp"

#include "sigtext/dataset.hpp"
#include "sigtext/diagnose.hpp"
#include "sigtext/error.hpp"
#include "sigtext/plot.hpp"
#include "sigtext/report_json.hpp"
#include "sigtext/sig2txt.hpp"
#include "sigtext/signal_io.hpp"
#include "sigtext/ssa.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

namespace sigtext {

using nlohmann::json;

namespace {

// Replies with a fixed message; lets `diagnose` run without a network.
class FixedReplyTransport : public ChatTransport {
public:
    explicit FixedReplyTransport(std::string reply) : reply_(std::move(reply)) {}

    HttpResponse post(const std::string&, const std::string&, const std::vector<std::pair<std::string, std::string>>&,
                      double) override
    {
        json body{{"choices", json::array({json{{"index", 0},
                                                {"message", {{"role", "assistant"}, {"content", reply_}}}}})}};
        return HttpResponse{200, body.dump()};
    }

private:
    std::string reply_;
};

// Inline JSON, or @path to read it from a file.
json json_arg(const std::string& value)
{
    const std::string text = !value.empty() && value[0] == '@' ? read_text_file(value.substr(1)) : value;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw FormatError("not valid JSON: " + (value.size() > 60 ? value.substr(0, 60) + "..." : value));
    }
    return j;
}

SignalClass parse_kind(const std::string& name)
{
    if (name == "harmonic" || name == "single") {
        return SignalClass::SingleHarmonic;
    }
    if (name == "multi") {
        return SignalClass::MultiHarmonic;
    }
    if (name == "random") {
        return SignalClass::RandomHarmonic;
    }
    if (name == "composite") {
        return SignalClass::CompositeHarmonic;
    }
    if (name == "am") {
        return SignalClass::AmplitudeModulated;
    }
    return signal_class_from_string(name);
}

struct GenerateArgs {
    std::string kind = "harmonic";
    std::optional<double> freq;
    std::optional<double> amp;
    std::optional<double> phase;
    std::string params;
    bool random = false;
    std::string ranges;
    std::uint64_t seed = 0;
    double fs = 1000.0;
    double duration = 1.0;
    std::optional<std::size_t> n_samples;
    std::optional<double> snr_db;
    std::string unit = "mm/sec";
    std::string output;
};

void run_generate(const GenerateArgs& a, std::ostream& out)
{
    const SignalClass cls = parse_kind(a.kind);
    GeneratorParams params;
    if (a.random) {
        ParamRanges ranges = a.ranges.empty() ? ParamRanges{} : param_ranges_from_json(json_arg(a.ranges));
        ranges.seed = a.seed;
        ranges.max_frequency_hz = std::min(ranges.max_frequency_hz, 0.45 * a.fs);
        params = sample_params(ranges, cls);
    } else if (!a.params.empty()) {
        json j = json_arg(a.params);
        if (!j.contains("class")) {
            j["class"] = to_string(cls);
        }
        params = generator_params_from_json(j);
        if (class_of(params) != cls && a.kind != "harmonic") {
            throw InvalidArgument("--params class does not match --kind");
        }
    } else if (cls == SignalClass::SingleHarmonic) {
        HarmonicParams h;
        h.frequency_hz = a.freq.value_or(h.frequency_hz);
        h.amplitude = a.amp.value_or(h.amplitude);
        h.phase_rad = a.phase.value_or(h.phase_rad);
        params = h;
    } else {
        throw InvalidArgument("--kind " + a.kind + " needs --params or --random");
    }
    const SampleGrid grid = a.n_samples ? SampleGrid(a.fs, *a.n_samples) : SampleGrid::from_duration(a.fs, a.duration);
    SampledSignal s = synthesize(params, grid, a.unit);
    if (a.snr_db) {
        s = add_noise(s, *a.snr_db, derive_seed(a.seed, 1));
    }
    json meta{{"class", to_string(class_of(params))},
              {"params", to_json(params)},
              {"grid", to_json(grid)},
              {"seed", a.seed},
              {"snr_db", a.snr_db ? json(*a.snr_db) : json(nullptr)}};
    if (a.output.empty() || a.output == "-") {
        out << signal_json_text(s, meta);
        return;
    }
    write_signal_file(a.output, s, meta);
    json report = meta;
    report["output"] = a.output;
    report["n_samples"] = s.size();
    out << report.dump() << "\n";
}

struct SsaArgs {
    std::size_t window_len = 0;
    std::vector<std::string> bands;
    std::optional<std::size_t> auto_bands;
    std::optional<double> energy_fraction;
    std::optional<std::size_t> max_components;
    std::string config;
};

SSAConfig ssa_config(const SsaArgs& a)
{
    SSAConfig c = a.config.empty() ? SSAConfig{} : ssa_config_from_json(json_arg(a.config));
    if (a.window_len != 0) {
        c.window_len = a.window_len;
    }
    if (a.energy_fraction) {
        c.energy_fraction = *a.energy_fraction;
    }
    if (a.max_components) {
        c.max_components_per_band = *a.max_components;
    }
    if (!a.bands.empty()) {
        std::vector<Band> bands;
        for (const auto& b : a.bands) {
            const auto colon = b.find(':');
            if (colon == std::string::npos) {
                throw InvalidArgument("--band expects center:half_width, got '" + b + "'");
            }
            try {
                bands.push_back(Band{std::stod(b.substr(0, colon)), std::stod(b.substr(colon + 1))});
            } catch (const std::exception&) {
                throw InvalidArgument("--band expects numbers, got '" + b + "'");
            }
        }
        c.bands = bands;
    } else if (a.auto_bands) {
        c.bands = AutoBands{*a.auto_bands};
    }
    return c;
}

void add_ssa_options(CLI::App* cmd, SsaArgs& a)
{
    cmd->add_option("--window-len", a.window_len, "Hankel window length L (0: default)");
    cmd->add_option("--band", a.bands, "Frequency band center:half_width in Hz (repeatable)");
    cmd->add_option("--auto-bands", a.auto_bands, "Use bands around the top K spectral peaks");
    cmd->add_option("--energy-fraction", a.energy_fraction, "In-band energy kept per band")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--max-components", a.max_components, "Eigentriples per band at most");
    cmd->add_option("--ssa-config", a.config, "SSA config JSON (inline or @file)");
}

void print_error(std::ostream& err, const std::string& code, const std::string& message,
                 const json& extra = json::object())
{
    json j{{"error", code}, {"message", message}};
    for (const auto& item : extra.items()) {
        j[item.key()] = item.value();
    }
    err << j.dump() << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Signal-to-text toolkit for vibration signals", "sigtext"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Synthesize a signal file");
    generate->add_option("--kind", gen.kind,
                         "single_harmonic (harmonic), multi_harmonic, random_harmonic, composite_harmonic, "
                         "amplitude_modulated (am), bearing, gear");
    generate->add_option("--freq", gen.freq, "Frequency in Hz (single harmonic)");
    generate->add_option("--amp", gen.amp, "Amplitude (single harmonic)");
    generate->add_option("--phase", gen.phase, "Phase in rad (single harmonic)");
    generate->add_option("--params", gen.params, "Generator parameters JSON (inline or @file)");
    generate->add_flag("--random", gen.random, "Sample parameters from the ranges");
    generate->add_option("--ranges", gen.ranges, "Parameter range overrides JSON (inline or @file)");
    generate->add_option("--seed", gen.seed, "Seed for --random and --snr");
    generate->add_option("--fs", gen.fs, "Sample rate in Hz")->check(CLI::PositiveNumber);
    generate->add_option("--duration", gen.duration, "Duration in s")->check(CLI::PositiveNumber);
    generate->add_option("--n", gen.n_samples, "Number of samples (overrides --duration)");
    generate->add_option("--snr", gen.snr_db, "Add white noise at this SNR in dB");
    generate->add_option("--unit", gen.unit, "Amplitude unit label");
    generate->add_option("-o,--output", gen.output, "Output file (.json or .csv); stdout when absent");

    std::string input;
    std::string output;

    SsaArgs ssa;
    std::string residual_path;
    auto* denoise_cmd = app.add_subcommand("denoise", "Split a signal into band components and residual");
    denoise_cmd->add_option("input", input, "Signal file")->required();
    add_ssa_options(denoise_cmd, ssa);
    denoise_cmd->add_option("-o,--output", output, "Clean signal output file");
    denoise_cmd->add_option("--residual", residual_path, "Residual output file");

    std::string window = "rectangular";
    bool arrays = false;
    auto* features_cmd = app.add_subcommand("features", "Print the JSON feature report");
    features_cmd->add_option("input", input, "Signal file")->required();
    features_cmd->add_option("--window", window, "Spectrum window")->check(CLI::IsMember({"rectangular", "hann"}));
    features_cmd->add_flag("--arrays", arrays, "Include spectrum arrays");

    bool denoise_first = false;
    bool as_json = false;
    auto* describe_cmd = app.add_subcommand("describe", "Render the textual description");
    describe_cmd->add_option("input", input, "Signal file")->required();
    describe_cmd->add_flag("--denoise", denoise_first, "Denoise before extracting features");
    describe_cmd->add_flag("--json", as_json, "Print the description as JSON");
    add_ssa_options(describe_cmd, ssa);

    std::string config_path;
    std::string validate_path;
    std::string dataset_output;
    auto* dataset_cmd = app.add_subcommand("dataset", "Emit or validate a Q&A dataset");
    auto* config_opt = dataset_cmd->add_option("--config", config_path, "Dataset config JSON file");
    auto* validate_opt = dataset_cmd->add_option("--validate", validate_path, "Validate an emitted JSONL dataset");
    dataset_cmd->add_option("--output", dataset_output, "Override the config output_path");
    config_opt->excludes(validate_opt);

    std::string context_path;
    std::string question;
    std::string question_file;
    bool send = false;
    std::string mock_reply;
    LlmConfig llm;
    auto* diagnose_cmd = app.add_subcommand("diagnose", "Assemble a chain-of-thought prompt, optionally send it");
    diagnose_cmd->add_option("input", input, "Signal file")->required();
    diagnose_cmd->add_option("--context", context_path, "Equipment context file (free text or JSON)");
    auto* q_opt = diagnose_cmd->add_option("--question", question, "Diagnostic question");
    auto* qf_opt = diagnose_cmd->add_option("--question-file", question_file, "File holding the question");
    q_opt->excludes(qf_opt);
    diagnose_cmd->add_flag("--denoise", denoise_first, "Denoise before describing");
    diagnose_cmd->add_flag("--send", send, "Send the prompt to the chat endpoint");
    diagnose_cmd->add_option("--mock-reply", mock_reply, "Answer with this reply instead of calling the endpoint");
    diagnose_cmd->add_option("--endpoint", llm.endpoint, "Chat-completion URL");
    diagnose_cmd->add_option("--model", llm.model, "Model name");
    diagnose_cmd->add_option("--api-key-env", llm.api_key_env, "Environment variable holding the API key");
    diagnose_cmd->add_option("--timeout", llm.timeout_s, "Request timeout in s")->check(CLI::PositiveNumber);
    diagnose_cmd->add_option("--retries", llm.max_retries, "Retries after the first attempt")
        ->check(CLI::NonNegativeNumber);
    diagnose_cmd->add_option("--transcript", llm.transcript_path, "Write the request/response transcript here");

    PlotOptions plot_opts;
    auto* plot_cmd = app.add_subcommand("plot", "Write an SVG of the waveform and spectrum");
    plot_cmd->add_option("input", input, "Signal file")->required();
    plot_cmd->add_option("-o,--output", output, "SVG output file")->required();
    plot_cmd->add_option("--max-freq", plot_opts.max_freq_hz, "Upper frequency of the spectrum panel");
    plot_cmd->add_option("--title", plot_opts.title, "Figure title");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (dataset_cmd->parsed() && config_path.empty() && validate_path.empty()) {
            throw CLI::RequiredError("dataset needs --config or --validate");
        }
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const CLI::App* sub = nullptr;
        for (const auto* s : app.get_subcommands()) {
            sub = s;
        }
        err << (sub != nullptr ? sub->help() : app.help());
        return 2;
    }

    try {
        if (generate->parsed()) {
            run_generate(gen, out);
        } else if (denoise_cmd->parsed()) {
            const SignalFile f = read_signal_file(input);
            const DenoiseResult r = denoise(f.signal, ssa_config(ssa));
            json report{{"input", input}, {"decomposition", decomposition_summary(r.decomposition)}};
            report["clean_energy"] = energy(r.clean.view());
            report["residual_energy"] = energy(r.residual.view());
            if (!output.empty()) {
                write_signal_file(output, r.clean, json{{"source", input}, {"part", "clean"}});
                report["clean"] = output;
            }
            if (!residual_path.empty()) {
                write_signal_file(residual_path, r.residual, json{{"source", input}, {"part", "residual"}});
                report["residual"] = residual_path;
            }
            out << report.dump() << "\n";
        } else if (features_cmd->parsed()) {
            const SignalFile f = read_signal_file(input);
            DescribeConfig dc;
            dc.window = window == "hann" ? Window::Hann : Window::Rectangular;
            const FeatureBundle b = extract_features(f.signal, dc);
            const SignalKind kind = classify(b.spectrum, b.harmonics, b.sidebands, b.peaks);
            json report = feature_report(b, kind);
            report["spectrum"] = to_json(b.spectrum, arrays);
            out << report.dump() << "\n";
        } else if (describe_cmd->parsed()) {
            const SignalFile f = read_signal_file(input);
            DescribeConfig dc;
            dc.denoise_first = denoise_first;
            dc.ssa = ssa_config(ssa);
            const Description d = sig2txt(f.signal, dc);
            if (as_json) {
                out << to_json(d).dump() << "\n";
            } else {
                out << d.rendered_text << "\n";
            }
        } else if (dataset_cmd->parsed()) {
            if (!validate_path.empty()) {
                const ValidationReport r = validate_dataset(validate_path);
                out << to_json(r).dump() << "\n";
                if (r.n_schema_errors + r.n_answer_mismatches > 0) {
                    print_error(err, "validation_failed",
                                std::to_string(r.n_schema_errors) + " schema errors, " +
                                    std::to_string(r.n_answer_mismatches) + " answer mismatches",
                                json{{"path", validate_path}});
                    return 1;
                }
            } else {
                DatasetConfig c = dataset_config_from_json(json_arg("@" + config_path));
                if (!dataset_output.empty()) {
                    c.output_path = dataset_output;
                }
                const EmitReport r = emit_dataset(c);
                json counts = json::object();
                for (const auto& [cls, n] : r.class_counts) {
                    counts[to_string(cls)] = n;
                }
                out << json{{"output", c.output_path},
                            {"manifest", r.manifest_path},
                            {"n_written", r.n_written},
                            {"n_skipped", r.skipped.size()},
                            {"class_counts", counts},
                            {"config_hash", r.config_hash}}
                           .dump()
                    << "\n";
            }
        } else if (diagnose_cmd->parsed()) {
            const SignalFile f = read_signal_file(input);
            DescribeConfig dc;
            dc.denoise_first = denoise_first;
            const Description d = sig2txt(f.signal, dc);
            const std::string context = context_path.empty() ? std::string() : read_text_file(context_path);
            const std::string q = question_file.empty() ? question : read_text_file(question_file);
            const CotPrompt prompt = assemble_cot_prompt(d, context, q);
            json report{{"prompt",
                         {{"system", prompt.system},
                          {"equipment_context", prompt.equipment_context},
                          {"signal_description", prompt.signal_description},
                          {"question", prompt.question},
                          {"rendered", prompt.rendered}}},
                        {"answer", nullptr}};
            if (send || !mock_reply.empty()) {
                std::unique_ptr<ChatTransport> transport;
                if (!mock_reply.empty()) {
                    transport = std::make_unique<FixedReplyTransport>(mock_reply);
                } else {
                    transport = std::make_unique<HttplibTransport>();
                }
                const DiagnosisAnswer a = chat_complete(prompt, llm, *transport);
                report["answer"] = json{{"raw_reply", a.raw_reply},
                                        {"choice", a.choice ? json(std::string(1, *a.choice)) : json(nullptr)},
                                        {"transcript", a.transcript_path.empty() ? json(nullptr)
                                                                                 : json(a.transcript_path)}};
            }
            out << report.dump() << "\n";
        } else if (plot_cmd->parsed()) {
            const SignalFile f = read_signal_file(input);
            if (plot_opts.title.empty()) {
                plot_opts.title = input;
            }
            write_text_file(output, plot_svg(f.signal, plot_opts));
            out << json{{"input", input}, {"output", output}}.dump() << "\n";
        }
    } catch (const IoError& e) {
        print_error(err, e.code(), e.what(), json{{"path", e.path()}});
        return 1;
    } catch (const PipelineError& e) {
        print_error(err, e.code(), e.what(), json{{"stage", e.stage()}});
        return 1;
    } catch (const NetworkError& e) {
        print_error(err, e.code(), e.what(), json{{"attempts", e.attempts()}});
        return 1;
    } catch (const Error& e) {
        print_error(err, e.code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error(err, "internal_error", e.what());
        return 1;
    }
    return 0;
}

int run_cli(int argc, char** argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run_cli(args, std::cout, std::cerr);
}

} // namespace sigtext
