#include "sigtext/siggen.hpp"

#include "sigtext/error.hpp"
#include "sigtext/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sigtext {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double v, const char* name)
{
    if (!std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be finite");
    }
}

void require_below_nyquist(double f, const SampleGrid& grid)
{
    if (f >= grid.nyquist_hz()) {
        throw AliasingError(f, grid.sample_rate_hz);
    }
}

double phase_at(const std::vector<double>& phases, std::size_t i)
{
    return phases.empty() ? 0.0 : phases[i];
}

void require_sizes(const std::vector<double>& v, std::size_t n, const char* name)
{
    if (!v.empty() && v.size() != n) {
        throw InvalidArgument(std::string(name) + " must have " + std::to_string(n) + " entries");
    }
}

std::vector<double> white_noise(std::size_t n, double std_dev, std::uint64_t seed)
{
    CounterRng rng(seed);
    std::vector<double> out(n);
    for (double& v : out) {
        v = std_dev * rng.normal();
    }
    return out;
}

SampledSignal eval_harmonic(const HarmonicParams& p, const SampleGrid& grid, const std::string& unit)
{
    require_finite(p.amplitude, "amplitude");
    require_finite(p.frequency_hz, "frequency");
    require_finite(p.phase_rad, "phase");
    if (p.amplitude < 0.0) {
        throw InvalidArgument("harmonic amplitude must be non-negative");
    }
    if (!(p.frequency_hz > 0.0)) {
        throw InvalidArgument("harmonic frequency must be positive");
    }
    require_below_nyquist(p.frequency_hz, grid);
    std::vector<double> x(grid.n_samples);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = p.amplitude * std::sin(kTwoPi * p.frequency_hz * grid.time(i) + p.phase_rad);
    }
    return {std::move(x), grid.sample_rate_hz, unit};
}

SampledSignal eval_impulse(const ImpulseDecayParams& p, const SampleGrid& grid, const std::string& unit)
{
    require_finite(p.amplitude, "amplitude");
    require_finite(p.frequency_hz, "frequency");
    require_finite(p.phase_rad, "phase");
    require_finite(p.decay_per_s, "decay");
    if (!(p.decay_per_s > 0.0)) {
        throw InvalidArgument("impulse decay rate must be positive");
    }
    if (!(p.frequency_hz > 0.0)) {
        throw InvalidArgument("impulse frequency must be positive");
    }
    require_below_nyquist(p.frequency_hz, grid);
    std::vector<double> x(grid.n_samples);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = grid.time(i);
        x[i] = p.amplitude * std::exp(-p.decay_per_s * t) * std::sin(kTwoPi * p.frequency_hz * t + p.phase_rad);
    }
    return {std::move(x), grid.sample_rate_hz, unit};
}

SampledSignal eval_wavelet(const WaveletParams& p, const SampleGrid& grid, const std::string& unit)
{
    require_finite(p.scale, "scale");
    require_finite(p.shift_s, "shift");
    if (!(p.scale > 0.0)) {
        throw InvalidArgument("wavelet scale must be positive");
    }
    const double norm = 1.0 / std::sqrt(p.scale);
    std::vector<double> x(grid.n_samples);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = (grid.time(i) - p.shift_s) / p.scale;
        x[i] = norm * (p.mother == MotherWavelet::Morlet ? morlet(u) : mexican_hat(u));
    }
    return {std::move(x), grid.sample_rate_hz, unit};
}

SampledSignal eval_random(const RandomUnitParams& p, const SampleGrid& grid, const std::string& unit)
{
    require_finite(p.std, "std");
    if (p.std < 0.0) {
        throw InvalidArgument("noise standard deviation must be non-negative");
    }
    if (p.kind == NoiseKind::WhiteGaussian) {
        return {white_noise(grid.n_samples, p.std, p.seed), grid.sample_rate_hz, unit};
    }
    require_finite(p.f_lo_hz, "f_lo");
    require_finite(p.f_hi_hz, "f_hi");
    if (!(p.f_lo_hz >= 0.0 && p.f_lo_hz < p.f_hi_hz && p.f_hi_hz <= grid.nyquist_hz())) {
        throw InvalidArgument("band-limited noise needs 0 <= f_lo < f_hi <= Nyquist");
    }
    const auto base = white_noise(grid.n_samples, 1.0, p.seed);
    auto bins = fft::forward_real(base);
    const double df = grid.resolution_hz();
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const double f = static_cast<double>(k) * df;
        if (f < p.f_lo_hz || f > p.f_hi_hz) {
            bins[k] = 0.0;
        }
    }
    auto x = fft::inverse_real(bins, grid.n_samples);
    const double m = mean(x);
    double var = 0.0;
    for (double v : x) {
        var += (v - m) * (v - m);
    }
    var /= static_cast<double>(x.size());
    const double scale = var > 0.0 ? p.std / std::sqrt(var) : 0.0;
    for (double& v : x) {
        v *= scale;
    }
    return {std::move(x), grid.sample_rate_hz, unit};
}

SampledSignal eval_literal(const LiteralSamples& p, const SampleGrid& grid, const std::string& unit)
{
    if (p.samples.size() != grid.n_samples) {
        throw DimensionMismatch("literal leaf has " + std::to_string(p.samples.size()) +
                                " samples, grid has " + std::to_string(grid.n_samples));
    }
    SampledSignal s{p.samples, grid.sample_rate_hz, unit};
    s.validate();
    return s;
}

} // namespace

double morlet(double t) noexcept
{
    // Real Morlet with omega0 = 5 rad per unit time.
    return std::exp(-0.5 * t * t) * std::cos(5.0 * t);
}

double mexican_hat(double t) noexcept
{
    const double c = 2.0 / (std::sqrt(3.0) * std::pow(std::numbers::pi, 0.25));
    return c * (1.0 - t * t) * std::exp(-0.5 * t * t);
}

SampledSignal eval_unit(const SignalUnit& unit, const SampleGrid& grid, const std::string& unit_label)
{
    return std::visit(
        [&](const auto& p) -> SampledSignal {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HarmonicParams>) {
                return eval_harmonic(p, grid, unit_label);
            } else if constexpr (std::is_same_v<T, ImpulseDecayParams>) {
                return eval_impulse(p, grid, unit_label);
            } else if constexpr (std::is_same_v<T, WaveletParams>) {
                return eval_wavelet(p, grid, unit_label);
            } else if constexpr (std::is_same_v<T, RandomUnitParams>) {
                return eval_random(p, grid, unit_label);
            } else {
                return eval_literal(p, grid, unit_label);
            }
        },
        unit);
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

SignalExpr SignalExpr::leaf(SignalUnit unit, double gain)
{
    return SignalExpr{std::move(unit), gain};
}

SignalExpr SignalExpr::op(OpKind kind, std::vector<SignalExpr> operands, double gain)
{
    return SignalExpr{Op{kind, 1, std::move(operands)}, gain};
}

SignalExpr SignalExpr::power(SignalExpr base, unsigned n, double gain)
{
    std::vector<SignalExpr> operands;
    operands.push_back(std::move(base));
    return SignalExpr{Op{OpKind::Power, n, std::move(operands)}, gain};
}

SignalExpr SignalExpr::integrate(SignalExpr operand, double gain)
{
    std::vector<SignalExpr> operands;
    operands.push_back(std::move(operand));
    return SignalExpr{Op{OpKind::Integrate, 1, std::move(operands)}, gain};
}

namespace {

void require_arity(const SignalExpr::Op& op, std::size_t min_n, std::size_t max_n, const char* name)
{
    const std::size_t n = op.operands.size();
    if (n < min_n || n > max_n) {
        throw InvalidArgument(std::string(name) + " takes " +
                              (min_n == max_n ? std::to_string(min_n) : "at least " + std::to_string(min_n)) +
                              " operand(s), got " + std::to_string(n));
    }
}

std::vector<double> evaluate(const SignalExpr& expr, const SampleGrid& grid);

std::vector<double> evaluate_op(const SignalExpr::Op& op, const SampleGrid& grid)
{
    const std::size_t n = grid.n_samples;
    switch (op.kind) {
    case OpKind::Add:
    case OpKind::Multiply: {
        require_arity(op, 2, static_cast<std::size_t>(-1), op.kind == OpKind::Add ? "Add" : "Multiply");
        auto acc = evaluate(op.operands.front(), grid);
        for (std::size_t k = 1; k < op.operands.size(); ++k) {
            const auto rhs = evaluate(op.operands[k], grid);
            for (std::size_t i = 0; i < n; ++i) {
                if (op.kind == OpKind::Add) {
                    acc[i] += rhs[i];
                } else {
                    acc[i] *= rhs[i];
                }
            }
        }
        return acc;
    }
    case OpKind::Subtract: {
        require_arity(op, 2, 2, "Subtract");
        auto a = evaluate(op.operands[0], grid);
        const auto b = evaluate(op.operands[1], grid);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] -= b[i];
        }
        return a;
    }
    case OpKind::Divide: {
        require_arity(op, 2, 2, "Divide");
        auto a = evaluate(op.operands[0], grid);
        const auto b = evaluate(op.operands[1], grid);
        double max_abs = 0.0;
        for (double v : b) {
            max_abs = std::max(max_abs, std::abs(v));
        }
        const double eps = kDivisionGuard * max_abs;
        for (std::size_t i = 0; i < n; ++i) {
            if (b[i] == 0.0 || std::abs(b[i]) < eps) {
                throw DivisionError(i);
            }
            a[i] /= b[i];
        }
        return a;
    }
    case OpKind::Convolve: {
        require_arity(op, 2, 2, "Convolve");
        const auto a = evaluate(op.operands[0], grid);
        const auto b = evaluate(op.operands[1], grid);
        auto full = fft::convolve(a, b);
        full.resize(n);
        const double dt = 1.0 / grid.sample_rate_hz;
        for (double& v : full) {
            v *= dt;
        }
        return full;
    }
    case OpKind::Power: {
        require_arity(op, 1, 1, "Power");
        if (op.power < 1) {
            throw InvalidArgument("Power exponent must be at least 1");
        }
        const auto base = evaluate(op.operands[0], grid);
        auto acc = base;
        for (unsigned k = 1; k < op.power; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                acc[i] *= base[i];
            }
        }
        return acc;
    }
    case OpKind::Integrate: {
        require_arity(op, 1, 1, "Integrate");
        const auto x = evaluate(op.operands[0], grid);
        std::vector<double> out(n, 0.0);
        const double half_dt = 0.5 / grid.sample_rate_hz;
        for (std::size_t i = 1; i < n; ++i) {
            out[i] = out[i - 1] + half_dt * (x[i - 1] + x[i]);
        }
        return out;
    }
    }
    throw InvalidArgument("unknown operator");
}

std::vector<double> evaluate(const SignalExpr& expr, const SampleGrid& grid)
{
    require_finite(expr.gain, "gain");
    std::vector<double> out;
    if (const auto* unit = std::get_if<SignalUnit>(&expr.node)) {
        out = eval_unit(*unit, grid).samples;
    } else {
        out = evaluate_op(std::get<SignalExpr::Op>(expr.node), grid);
    }
    if (expr.gain != 1.0) {
        for (double& v : out) {
            v *= expr.gain;
        }
    }
    return out;
}

} // namespace

SampledSignal apply_expr(const SignalExpr& expr, const SampleGrid& grid, const std::string& unit_label)
{
    SampledSignal out{evaluate(expr, grid), grid.sample_rate_hz, unit_label};
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Functions
// ---------------------------------------------------------------------------

namespace {

std::vector<double> multi_harmonic(const MultiHarmonicParams& p, const SampleGrid& grid)
{
    if (p.amplitudes.empty()) {
        throw InvalidArgument("multi-harmonic signal needs at least one amplitude");
    }
    require_sizes(p.phases_rad, p.amplitudes.size(), "phases");
    require_finite(p.fundamental_hz, "fundamental");
    if (!(p.fundamental_hz > 0.0)) {
        throw InvalidArgument("fundamental frequency must be positive");
    }
    require_below_nyquist(p.fundamental_hz * static_cast<double>(p.amplitudes.size()), grid);
    std::vector<double> x(grid.n_samples, 0.0);
    for (std::size_t k = 0; k < p.amplitudes.size(); ++k) {
        require_finite(p.amplitudes[k], "amplitude");
        const double f = p.fundamental_hz * static_cast<double>(k + 1);
        const double phi = phase_at(p.phases_rad, k);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += p.amplitudes[k] * std::sin(kTwoPi * f * grid.time(i) + phi);
        }
    }
    return x;
}

std::vector<double> random_harmonics(const RandomHarmonicsParams& p, const SampleGrid& grid,
                                     std::vector<std::string>& warnings)
{
    if (p.frequencies_hz.empty()) {
        throw InvalidArgument("random-harmonic signal needs at least one frequency");
    }
    require_sizes(p.amplitudes, p.frequencies_hz.size(), "amplitudes");
    if (p.amplitudes.empty()) {
        throw InvalidArgument("random-harmonic signal needs amplitudes");
    }
    require_sizes(p.phases_rad, p.frequencies_hz.size(), "phases");
    const double bin = grid.resolution_hz();
    for (std::size_t a = 0; a < p.frequencies_hz.size(); ++a) {
        for (std::size_t b = a + 1; b < p.frequencies_hz.size(); ++b) {
            if (std::abs(p.frequencies_hz[a] - p.frequencies_hz[b]) < bin) {
                std::ostringstream msg;
                msg << "frequencies " << p.frequencies_hz[a] << " Hz and " << p.frequencies_hz[b]
                    << " Hz fall within one bin (" << bin << " Hz)";
                warnings.push_back(msg.str());
            }
        }
    }
    std::vector<double> x(grid.n_samples, 0.0);
    for (std::size_t k = 0; k < p.frequencies_hz.size(); ++k) {
        const double f = p.frequencies_hz[k];
        require_finite(f, "frequency");
        require_finite(p.amplitudes[k], "amplitude");
        if (!(f > 0.0)) {
            throw InvalidArgument("frequencies must be positive");
        }
        require_below_nyquist(f, grid);
        const double phi = phase_at(p.phases_rad, k);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += p.amplitudes[k] * std::sin(kTwoPi * f * grid.time(i) + phi);
        }
    }
    return x;
}

} // namespace

FunctionOutput synth_function(const FunctionParams& params, const SampleGrid& grid, const std::string& unit_label)
{
    FunctionOutput out;
    out.signal.sample_rate_hz = grid.sample_rate_hz;
    out.signal.unit = unit_label;
    if (const auto* m = std::get_if<MultiHarmonicParams>(&params)) {
        out.signal.samples = multi_harmonic(*m, grid);
    } else if (const auto* r = std::get_if<RandomHarmonicsParams>(&params)) {
        out.signal.samples = random_harmonics(*r, grid, out.warnings);
    } else {
        const auto& c = std::get<CompositeParams>(params);
        auto x = multi_harmonic(c.harmonic, grid);
        const auto y = random_harmonics(c.random, grid, out.warnings);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += y[i];
        }
        out.signal.samples = std::move(x);
    }
    return out;
}

SampledSignal synth_am(const AmParams& p, const SampleGrid& grid, const std::string& unit_label)
{
    require_finite(p.modulation_hz, "modulation frequency");
    require_finite(p.depth, "depth");
    if (!(p.modulation_hz > 0.0)) {
        throw InvalidArgument("modulation frequency must be positive");
    }
    if (p.depth < 0.0) {
        throw InvalidArgument("modulation depth must be non-negative");
    }
    require_below_nyquist(p.carrier.fundamental_hz * static_cast<double>(p.carrier.amplitudes.size()) +
                              p.modulation_hz,
                          grid);
    auto x = multi_harmonic(p.carrier, grid);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] *= 1.0 + p.depth * std::cos(kTwoPi * p.modulation_hz * grid.time(i) + p.modulation_phase_rad);
    }
    return {std::move(x), grid.sample_rate_hz, unit_label};
}

double burst_offset(BearingFault fault) noexcept
{
    return fault == BearingFault::RollingElement ? 0.5 : 0.0;
}

SampledSignal synth_bearing(const BearingParams& p, const SampleGrid& grid, const std::string& unit_label)
{
    require_finite(p.impulse_amplitude, "impulse amplitude");
    require_finite(p.natural_freq_hz, "natural frequency");
    require_finite(p.fault_freq_hz, "fault frequency");
    require_finite(p.decay_rate, "decay rate");
    if (!(p.fault_freq_hz > 0.0) || !(p.natural_freq_hz > 0.0)) {
        throw InvalidArgument("bearing frequencies must be positive");
    }
    if (p.fault_freq_hz >= p.natural_freq_hz) {
        throw InvalidArgument("fault frequency must be below the natural frequency");
    }
    if (!(p.decay_rate > 0.0)) {
        throw InvalidArgument("bearing decay rate must be positive");
    }
    require_below_nyquist(p.natural_freq_hz, grid);
    if (grid.duration_s() * p.fault_freq_hz < 5.0) {
        throw InvalidArgument("record must span at least 5 fault periods");
    }

    const double fs = grid.sample_rate_hz;
    const double fd = p.fault_freq_hz;
    const double k1 = burst_offset(p.fault_type);
    std::vector<double> x(grid.n_samples, 0.0);
    if (p.impulse_amplitude == 0.0) {
        return {std::move(x), fs, unit_label};
    }
    for (std::size_t m = 0;; ++m) {
        const double start_num = (static_cast<double>(m) + k1) * fs;  // burst start, in units of 1/(fs fd)
        const double start_s = (static_cast<double>(m) + k1) / fd;
        if (start_s >= grid.duration_s()) {
            break;
        }
        auto first = static_cast<std::size_t>(std::max(0.0, std::floor(start_s * fs)));
        for (std::size_t i = first; i < x.size(); ++i) {
            const double num = static_cast<double>(i) * fd - start_num;
            if (num < 0.0) {
                continue;
            }
            const double tau = num / (fs * fd);
            const double env = std::exp(-p.decay_rate * tau);
            if (env == 0.0) {
                break;
            }
            x[i] += p.impulse_amplitude * env * std::cos(kTwoPi * p.natural_freq_hz * tau);
        }
    }
    return {std::move(x), fs, unit_label};
}

SampledSignal synth_gear(const GearParams& p, const SampleGrid& grid, const std::string& unit_label)
{
    if (p.max_order == 0) {
        throw InvalidArgument("gear signal needs max_order >= 1");
    }
    const std::size_t n = p.max_order;
    require_sizes(p.am_amplitudes, n, "am_amplitudes");
    require_sizes(p.fm_amplitudes, n, "fm_amplitudes");
    require_sizes(p.am_phases_rad, n, "am_phases");
    require_sizes(p.fm_phases_rad, n, "fm_phases");
    require_sizes(p.carrier_phases_rad, n, "carrier_phases");
    require_finite(p.mesh_freq_hz, "mesh frequency");
    require_finite(p.fault_char_freq_hz, "fault characteristic frequency");
    if (!(p.mesh_freq_hz > 0.0) || !(p.fault_char_freq_hz > 0.0)) {
        throw InvalidArgument("gear frequencies must be positive");
    }
    if (p.fault_char_freq_hz >= p.mesh_freq_hz) {
        throw InvalidArgument("fault characteristic frequency must be below the mesh frequency");
    }
    require_below_nyquist(p.mesh_freq_hz * static_cast<double>(n) + p.fault_char_freq_hz, grid);

    std::vector<double> x(grid.n_samples, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double am = phase_at(p.am_amplitudes, k);
        const double fm = phase_at(p.fm_amplitudes, k);
        const double psi = phase_at(p.am_phases_rad, k);
        const double alpha = phase_at(p.fm_phases_rad, k);
        const double theta = phase_at(p.carrier_phases_rad, k);
        const double order = static_cast<double>(k + 1);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double t = grid.time(i);
            const double mod = kTwoPi * p.fault_char_freq_hz * t;
            x[i] += (1.0 + am * std::cos(mod + psi)) *
                    std::cos(kTwoPi * order * p.mesh_freq_hz * t + fm * std::sin(mod + alpha) + theta);
        }
    }
    return {std::move(x), grid.sample_rate_hz, unit_label};
}

// ---------------------------------------------------------------------------
// Random parameters
// ---------------------------------------------------------------------------

std::string to_string(SignalClass c)
{
    switch (c) {
    case SignalClass::SingleHarmonic: return "single_harmonic";
    case SignalClass::MultiHarmonic: return "multi_harmonic";
    case SignalClass::RandomHarmonic: return "random_harmonic";
    case SignalClass::CompositeHarmonic: return "composite_harmonic";
    case SignalClass::AmplitudeModulated: return "amplitude_modulated";
    case SignalClass::Bearing: return "bearing";
    case SignalClass::Gear: return "gear";
    }
    return "unknown";
}

SignalClass signal_class_from_string(const std::string& name)
{
    for (SignalClass c : kAllSignalClasses) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw InvalidArgument("unknown signal class '" + name + "'");
}

std::string to_string(BearingFault f)
{
    switch (f) {
    case BearingFault::OuterRace: return "outer_race";
    case BearingFault::InnerRace: return "inner_race";
    case BearingFault::RollingElement: return "rolling_element";
    }
    return "unknown";
}

BearingFault bearing_fault_from_string(const std::string& name)
{
    for (BearingFault f : {BearingFault::OuterRace, BearingFault::InnerRace, BearingFault::RollingElement}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw InvalidArgument("unknown bearing fault type '" + name + "'");
}

namespace {

void check_interval(const Interval& iv, const char* name)
{
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
        throw InvalidArgument(std::string("range '") + name + "' must satisfy lo <= hi");
    }
}

template <typename T>
void check_choices(const std::vector<T>& v, const char* name)
{
    if (v.empty()) {
        throw InvalidArgument(std::string("choice set '") + name + "' is empty");
    }
}

} // namespace

void ParamRanges::validate() const
{
    check_interval(amplitude, "amplitude");
    check_interval(frequency_hz, "frequency_hz");
    check_interval(phase_rad, "phase_rad");
    check_interval(relative_amplitude, "relative_amplitude");
    check_interval(random_frequency_hz, "random_frequency_hz");
    check_interval(modulation_hz, "modulation_hz");
    check_interval(modulation_depth, "modulation_depth");
    check_interval(natural_freq_hz, "natural_freq_hz");
    check_interval(fault_freq_hz, "fault_freq_hz");
    check_interval(decay_per_s, "decay_per_s");
    check_interval(mesh_freq_hz, "mesh_freq_hz");
    check_interval(gear_fault_freq_hz, "gear_fault_freq_hz");
    check_interval(am_amplitude, "am_amplitude");
    check_interval(fm_ratio, "fm_ratio");
    check_choices(harmonic_counts, "harmonic_counts");
    check_choices(random_counts, "random_counts");
    check_choices(composite_random_counts, "composite_random_counts");
    check_choices(am_carrier_counts, "am_carrier_counts");
    check_choices(fault_types, "fault_types");
    check_choices(gear_orders, "gear_orders");
    for (const auto* counts : {&harmonic_counts, &random_counts, &composite_random_counts, &am_carrier_counts,
                               &gear_orders}) {
        for (int c : *counts) {
            if (c < 1) {
                throw InvalidArgument("component counts must be >= 1");
            }
        }
    }
    if (amplitude.lo < 0.0 || relative_amplitude.lo < 0.0 || am_amplitude.lo < 0.0 || fm_ratio.lo < 0.0) {
        throw InvalidArgument("amplitude ranges must be non-negative");
    }
    if (frequency_hz.lo <= 0.0 || random_frequency_hz.lo <= 0.0 || modulation_hz.lo <= 0.0 ||
        natural_freq_hz.lo <= 0.0 || fault_freq_hz.lo <= 0.0 || decay_per_s.lo <= 0.0 || mesh_freq_hz.lo <= 0.0 ||
        gear_fault_freq_hz.lo <= 0.0) {
        throw InvalidArgument("frequency and rate ranges must be positive");
    }
    if (frequency_step_hz < 0.0 || min_separation_hz < 0.0 || !(max_frequency_hz > 0.0)) {
        throw InvalidArgument("frequency step, separation and limit must be non-negative");
    }
}

namespace {

class Sampler {
public:
    Sampler(const ParamRanges& r, CounterRng& rng) : r_(r), rng_(rng) {}

    double draw(Interval iv) { return iv.lo == iv.hi ? iv.lo : rng_.uniform(iv.lo, iv.hi); }

    double frequency(Interval iv)
    {
        const double f = draw(iv);
        if (r_.frequency_step_hz <= 0.0) {
            return f;
        }
        const double q = std::round(f / r_.frequency_step_hz) * r_.frequency_step_hz;
        return std::clamp(q, std::max(r_.frequency_step_hz, iv.lo), std::max(iv.lo, iv.hi));
    }

    template <typename T>
    T choose(const std::vector<T>& v)
    {
        return v[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
    }

    // Tolerance used when checking that two lines are not harmonically related.
    double relation_margin(double lo) const
    {
        const double step = std::max(r_.frequency_step_hz, 1.0);
        return 2.0 * std::max(0.02 * lo, step) + step;
    }

    bool related(double a, double b) const
    {
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        if (hi - lo < r_.min_separation_hz) {
            return true;
        }
        const double k = std::round(hi / lo);
        return k >= 1.0 && std::abs(hi - k * lo) <= relation_margin(lo);
    }

    // Three lines in arithmetic progression would read as a carrier with sidebands.
    bool symmetric_triple(std::vector<double> f, const std::vector<bool>& in_family) const
    {
        std::vector<std::size_t> idx(f.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            idx[i] = i;
        }
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const double step = std::max(r_.frequency_step_hz, 1.0);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                for (std::size_t c = b + 1; c < idx.size(); ++c) {
                    if (in_family[idx[a]] && in_family[idx[b]] && in_family[idx[c]]) {
                        continue;
                    }
                    const double left = f[idx[b]] - f[idx[a]];
                    const double right = f[idx[c]] - f[idx[b]];
                    // Mirrors the sideband matcher's tolerance of 2% of the spacing.
                    if (std::abs(left - right) <= 2.0 * step + 0.03 * std::max(left, right)) {
                        return true;
                    }
                }
            }
        }
        return false;
    }

    std::vector<double> phases(std::size_t n)
    {
        std::vector<double> out(n);
        for (double& p : out) {
            p = draw(r_.phase_rad);
        }
        return out;
    }

    MultiHarmonicParams multi(int n_harmonics, Interval f_range)
    {
        const auto n = static_cast<double>(n_harmonics);
        Interval capped{f_range.lo, std::min(f_range.hi, r_.max_frequency_hz / n)};
        if (capped.hi < capped.lo) {
            throw InvalidArgument("frequency range cannot fit the requested harmonic count below the limit");
        }
        MultiHarmonicParams p;
        p.fundamental_hz = frequency(capped);
        const double a1 = draw(r_.amplitude);
        p.amplitudes.push_back(a1);
        for (int k = 1; k < n_harmonics; ++k) {
            p.amplitudes.push_back(a1 * draw(r_.relative_amplitude));
        }
        p.phases_rad = phases(p.amplitudes.size());
        return p;
    }

    RandomHarmonicsParams random_lines(int count, const std::vector<double>& existing)
    {
        Interval range{r_.random_frequency_hz.lo, std::min(r_.random_frequency_hz.hi, r_.max_frequency_hz)};
        for (int attempt = 0; attempt < 2000; ++attempt) {
            std::vector<double> freqs;
            bool ok = true;
            for (int i = 0; i < count && ok; ++i) {
                const double f = frequency(range);
                for (double g : freqs) {
                    ok = ok && !related(f, g);
                }
                for (double g : existing) {
                    ok = ok && !related(f, g);
                }
                freqs.push_back(f);
            }
            if (!ok) {
                continue;
            }
            std::vector<double> all = existing;
            all.insert(all.end(), freqs.begin(), freqs.end());
            std::vector<bool> fam(all.size(), false);
            std::fill(fam.begin(), fam.begin() + static_cast<std::ptrdiff_t>(existing.size()), true);
            if (symmetric_triple(all, fam)) {
                continue;
            }
            RandomHarmonicsParams p;
            p.frequencies_hz = freqs;
            for (int i = 0; i < count; ++i) {
                p.amplitudes.push_back(draw(r_.amplitude));
            }
            p.phases_rad = phases(freqs.size());
            return p;
        }
        throw InvalidArgument("could not draw unrelated random frequencies from the given range");
    }

    const ParamRanges& r_;
    CounterRng& rng_;
};

} // namespace

GeneratorParams sample_params(const ParamRanges& ranges, SignalClass kind)
{
    CounterRng rng(ranges.seed);
    return sample_params(ranges, kind, rng);
}

GeneratorParams sample_params(const ParamRanges& ranges, SignalClass kind, CounterRng& rng)
{
    ranges.validate();
    Sampler s(ranges, rng);
    switch (kind) {
    case SignalClass::SingleHarmonic: {
        HarmonicParams p;
        p.amplitude = s.draw(ranges.amplitude);
        p.frequency_hz = s.frequency(
            Interval{ranges.frequency_hz.lo, std::min(ranges.frequency_hz.hi, ranges.max_frequency_hz)});
        p.phase_rad = s.draw(ranges.phase_rad);
        return p;
    }
    case SignalClass::MultiHarmonic:
        return s.multi(s.choose(ranges.harmonic_counts), ranges.frequency_hz);
    case SignalClass::RandomHarmonic:
        return s.random_lines(s.choose(ranges.random_counts), {});
    case SignalClass::CompositeHarmonic: {
        CompositeParams p;
        p.harmonic = s.multi(s.choose(ranges.harmonic_counts), ranges.frequency_hz);
        std::vector<double> family;
        for (std::size_t k = 1; k <= p.harmonic.amplitudes.size(); ++k) {
            family.push_back(p.harmonic.fundamental_hz * static_cast<double>(k));
        }
        p.random = s.random_lines(s.choose(ranges.composite_random_counts), family);
        return p;
    }
    case SignalClass::AmplitudeModulated: {
        AmParams p;
        const int n = s.choose(ranges.am_carrier_counts);
        p.modulation_hz = s.frequency(ranges.modulation_hz);
        Interval carrier{std::max(ranges.frequency_hz.lo, 5.0 * p.modulation_hz), ranges.frequency_hz.hi};
        carrier.hi = std::min(carrier.hi, (ranges.max_frequency_hz - p.modulation_hz) / n);
        if (carrier.hi < carrier.lo) {
            carrier.hi = carrier.lo;
        }
        p.carrier = s.multi(n, carrier);
        p.depth = s.draw(ranges.modulation_depth);
        p.modulation_phase_rad = s.draw(ranges.phase_rad);
        return p;
    }
    case SignalClass::Bearing: {
        BearingParams p;
        p.impulse_amplitude = s.draw(ranges.amplitude);
        p.natural_freq_hz =
            s.frequency(Interval{ranges.natural_freq_hz.lo, std::min(ranges.natural_freq_hz.hi, ranges.max_frequency_hz)});
        p.fault_freq_hz = s.frequency(ranges.fault_freq_hz);
        p.decay_rate = s.draw(ranges.decay_per_s);
        p.fault_type = s.choose(ranges.fault_types);
        if (p.fault_freq_hz >= p.natural_freq_hz) {
            throw InvalidArgument("fault frequency range must lie below the natural frequency range");
        }
        return p;
    }
    case SignalClass::Gear: {
        GearParams p;
        p.fault_char_freq_hz = s.frequency(ranges.gear_fault_freq_hz);
        const int n = s.choose(ranges.gear_orders);
        p.max_order = static_cast<unsigned>(n);
        Interval mesh{ranges.mesh_freq_hz.lo,
                      std::min(ranges.mesh_freq_hz.hi, (ranges.max_frequency_hz - p.fault_char_freq_hz) / n)};
        if (mesh.hi < mesh.lo) {
            throw InvalidArgument("mesh frequency range cannot fit the gear order below the limit");
        }
        p.mesh_freq_hz = s.frequency(mesh);
        if (p.fault_char_freq_hz >= p.mesh_freq_hz) {
            throw InvalidArgument("gear fault frequency range must lie below the mesh frequency range");
        }
        for (int k = 0; k < n; ++k) {
            const double am = s.draw(ranges.am_amplitude);
            p.am_amplitudes.push_back(am);
            p.fm_amplitudes.push_back(am * s.draw(ranges.fm_ratio));
        }
        p.am_phases_rad = s.phases(static_cast<std::size_t>(n));
        p.fm_phases_rad = s.phases(static_cast<std::size_t>(n));
        p.carrier_phases_rad = s.phases(static_cast<std::size_t>(n));
        return p;
    }
    }
    throw InvalidArgument("unknown signal class");
}

SignalClass class_of(const GeneratorParams& params) noexcept
{
    switch (params.index()) {
    case 0: return SignalClass::SingleHarmonic;
    case 1: return SignalClass::MultiHarmonic;
    case 2: return SignalClass::RandomHarmonic;
    case 3: return SignalClass::CompositeHarmonic;
    case 4: return SignalClass::AmplitudeModulated;
    case 5: return SignalClass::Bearing;
    default: return SignalClass::Gear;
    }
}

SampledSignal synthesize(const GeneratorParams& params, const SampleGrid& grid, const std::string& unit_label)
{
    return std::visit(
        [&](const auto& p) -> SampledSignal {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HarmonicParams>) {
                return eval_unit(p, grid, unit_label);
            } else if constexpr (std::is_same_v<T, MultiHarmonicParams> || std::is_same_v<T, RandomHarmonicsParams> ||
                                 std::is_same_v<T, CompositeParams>) {
                return synth_function(p, grid, unit_label).signal;
            } else if constexpr (std::is_same_v<T, AmParams>) {
                return synth_am(p, grid, unit_label);
            } else if constexpr (std::is_same_v<T, BearingParams>) {
                return synth_bearing(p, grid, unit_label);
            } else {
                return synth_gear(p, grid, unit_label);
            }
        },
        params);
}

SampledSignal add_noise(const SampledSignal& signal, double snr_db, std::uint64_t seed)
{
    require_finite(snr_db, "snr");
    const double power = signal.empty() ? 0.0 : energy(signal.samples) / static_cast<double>(signal.size());
    const double std_dev = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    const auto noise = white_noise(signal.size(), std_dev, seed);
    SampledSignal out = signal;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.samples[i] += noise[i];
    }
    return out;
}

} // namespace sigtext
