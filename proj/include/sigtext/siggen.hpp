#pragma once

#include "sigtext/rng.hpp"
#include "sigtext/signal.hpp"

#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace sigtext {

// ---------------------------------------------------------------------------
// Signal units
// ---------------------------------------------------------------------------

// A sin(2 pi f t + phi)
struct HarmonicParams {
    double amplitude = 1.0;
    double frequency_hz = 50.0;
    double phase_rad = 0.0;
};

// A exp(-alpha t) sin(2 pi f t + phi), t >= 0
struct ImpulseDecayParams {
    double amplitude = 1.0;
    double frequency_hz = 500.0;
    double phase_rad = 0.0;
    double decay_per_s = 50.0;
};

enum class MotherWavelet { Morlet, MexicanHat };

// a^{-1/2} psi((t - b) / a)
struct WaveletParams {
    double scale = 0.01;
    double shift_s = 0.5;
    MotherWavelet mother = MotherWavelet::Morlet;
};

enum class NoiseKind { WhiteGaussian, BandLimited };

// Stationary zero-mean Gaussian noise with standard deviation `std`.
struct RandomUnitParams {
    double std = 1.0;
    NoiseKind kind = NoiseKind::WhiteGaussian;
    double f_lo_hz = 0.0;
    double f_hi_hz = 0.0;
    std::uint64_t seed = 0;
};

// Pre-recorded samples used as a leaf (e.g. a measured signal); length must
// match the evaluation grid.
struct LiteralSamples {
    std::vector<double> samples;
};

using SignalUnit =
    std::variant<HarmonicParams, ImpulseDecayParams, WaveletParams, RandomUnitParams, LiteralSamples>;

SampledSignal eval_unit(const SignalUnit& unit, const SampleGrid& grid, const std::string& unit_label = "mm/sec");

// Mother wavelets, exposed for tests.
double morlet(double t) noexcept;
double mexican_hat(double t) noexcept;

// ---------------------------------------------------------------------------
// Signal operators
// ---------------------------------------------------------------------------

enum class OpKind { Add, Subtract, Multiply, Divide, Convolve, Power, Integrate };

// Expression tree over signal units. Children are held by value, so a tree is
// always finite and acyclic. Every node's result is scaled by `gain`.
struct SignalExpr {
    struct Op {
        OpKind kind = OpKind::Add;
        unsigned power = 1;
        std::vector<SignalExpr> operands;
    };

    std::variant<SignalUnit, Op> node;
    double gain = 1.0;

    static SignalExpr leaf(SignalUnit unit, double gain = 1.0);
    static SignalExpr op(OpKind kind, std::vector<SignalExpr> operands, double gain = 1.0);
    static SignalExpr power(SignalExpr base, unsigned n, double gain = 1.0);
    static SignalExpr integrate(SignalExpr operand, double gain = 1.0);
};

// Relative threshold for Divide: |den[i]| < kDivisionGuard * max|den| is an error.
inline constexpr double kDivisionGuard = 1e-9;

SampledSignal apply_expr(const SignalExpr& expr, const SampleGrid& grid, const std::string& unit_label = "mm/sec");

// ---------------------------------------------------------------------------
// Signal functions
// ---------------------------------------------------------------------------

// sum_i A_i sin(2 pi i f0 t + phi_i), i = 1..N
struct MultiHarmonicParams {
    double fundamental_hz = 100.0;
    std::vector<double> amplitudes;
    std::vector<double> phases_rad;  // empty means all zero
};

// sum_i B_i sin(2 pi f_i t + phi_i)
struct RandomHarmonicsParams {
    std::vector<double> frequencies_hz;
    std::vector<double> amplitudes;
    std::vector<double> phases_rad;
};

struct CompositeParams {
    MultiHarmonicParams harmonic;
    RandomHarmonicsParams random;
};

using FunctionParams = std::variant<MultiHarmonicParams, RandomHarmonicsParams, CompositeParams>;

struct FunctionOutput {
    SampledSignal signal;
    std::vector<std::string> warnings;
};

FunctionOutput synth_function(const FunctionParams& params, const SampleGrid& grid,
                              const std::string& unit_label = "mm/sec");

// Amplitude-modulated carrier: (1 + depth cos(2 pi f_mod t + phi_mod)) * carrier(t)
struct AmParams {
    MultiHarmonicParams carrier;
    double modulation_hz = 10.0;
    double depth = 0.5;
    double modulation_phase_rad = 0.0;
};

SampledSignal synth_am(const AmParams& params, const SampleGrid& grid, const std::string& unit_label = "mm/sec");

enum class BearingFault { OuterRace, InnerRace, RollingElement };

// Burst-offset fraction of the fault period: 0 for race faults, 1/2 for rolling elements.
double burst_offset(BearingFault fault) noexcept;

struct BearingParams {
    double impulse_amplitude = 1.0;
    double natural_freq_hz = 2000.0;
    double fault_freq_hz = 100.0;
    double decay_rate = 400.0;
    BearingFault fault_type = BearingFault::OuterRace;
};

// Decaying resonance bursts A0 exp(-w tau) cos(2 pi f_n tau), tau = t - (m + k1)/f_d >= 0,
// summed over burst index m.
SampledSignal synth_bearing(const BearingParams& params, const SampleGrid& grid,
                            const std::string& unit_label = "mm/sec");

// sum_i (1 + A_i cos(2 pi f_ch t + psi_i)) cos(2 pi i f_m t + B_i sin(2 pi f_ch t + alpha_i) + theta_i)
struct GearParams {
    double mesh_freq_hz = 1000.0;
    double fault_char_freq_hz = 25.0;
    unsigned max_order = 1;
    std::vector<double> am_amplitudes;
    std::vector<double> fm_amplitudes;
    std::vector<double> am_phases_rad;
    std::vector<double> fm_phases_rad;
    std::vector<double> carrier_phases_rad;
};

SampledSignal synth_gear(const GearParams& params, const SampleGrid& grid, const std::string& unit_label = "mm/sec");

// ---------------------------------------------------------------------------
// Random parameters
// ---------------------------------------------------------------------------

enum class SignalClass {
    SingleHarmonic,
    MultiHarmonic,
    RandomHarmonic,
    CompositeHarmonic,
    AmplitudeModulated,
    Bearing,
    Gear,
};

inline constexpr SignalClass kAllSignalClasses[] = {
    SignalClass::SingleHarmonic,     SignalClass::MultiHarmonic, SignalClass::RandomHarmonic,
    SignalClass::CompositeHarmonic,  SignalClass::AmplitudeModulated, SignalClass::Bearing,
    SignalClass::Gear,
};

std::string to_string(SignalClass c);
SignalClass signal_class_from_string(const std::string& name);
std::string to_string(BearingFault f);
BearingFault bearing_fault_from_string(const std::string& name);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Sampling ranges for every generator class. Frequencies are rounded to
// `frequency_step_hz` so that 1 s records hold an integer number of periods.
struct ParamRanges {
    Interval amplitude{0.5, 5.0};
    Interval frequency_hz{20.0, 400.0};
    Interval phase_rad{-std::numbers::pi, std::numbers::pi};
    Interval relative_amplitude{0.15, 1.0};
    std::vector<int> harmonic_counts{2, 3, 4, 5};

    Interval random_frequency_hz{40.0, 1500.0};
    std::vector<int> random_counts{2, 3, 4, 5};
    std::vector<int> composite_random_counts{1, 2};

    Interval modulation_hz{5.0, 30.0};
    Interval modulation_depth{0.4, 0.9};
    std::vector<int> am_carrier_counts{1, 2, 3};

    Interval natural_freq_hz{1500.0, 3500.0};
    Interval fault_freq_hz{60.0, 150.0};
    // decay / fault frequency >= 4 keeps the bursts impulsive (kurtosis well above 3).
    Interval decay_per_s{600.0, 1200.0};
    std::vector<BearingFault> fault_types{BearingFault::OuterRace, BearingFault::InnerRace,
                                          BearingFault::RollingElement};

    Interval mesh_freq_hz{300.0, 1200.0};
    Interval gear_fault_freq_hz{10.0, 40.0};
    std::vector<int> gear_orders{1, 2, 3};
    Interval am_amplitude{0.3, 0.8};
    // FM amplitude as a fraction of the same order's AM amplitude.
    Interval fm_ratio{0.0, 0.3};

    double frequency_step_hz = 1.0;
    double min_separation_hz = 8.0;
    double max_frequency_hz = 4500.0;
    std::uint64_t seed = 0;

    // Throws InvalidArgument when an interval is inverted or a choice set is empty.
    void validate() const;
};

using GeneratorParams = std::variant<HarmonicParams, MultiHarmonicParams, RandomHarmonicsParams, CompositeParams,
                                     AmParams, BearingParams, GearParams>;

// Deterministic in ranges.seed.
GeneratorParams sample_params(const ParamRanges& ranges, SignalClass kind);
GeneratorParams sample_params(const ParamRanges& ranges, SignalClass kind, CounterRng& rng);

SignalClass class_of(const GeneratorParams& params) noexcept;

SampledSignal synthesize(const GeneratorParams& params, const SampleGrid& grid,
                         const std::string& unit_label = "mm/sec");

// Adds white Gaussian noise at the given SNR (dB, relative to mean signal power).
SampledSignal add_noise(const SampledSignal& signal, double snr_db, std::uint64_t seed);

} // namespace sigtext
