#pragma once

#include "sigtext/features.hpp"
#include "sigtext/sig2txt.hpp"
#include "sigtext/siggen.hpp"
#include "sigtext/ssa.hpp"

#include <json.hpp>

namespace sigtext {

using Json = nlohmann::json;

// Field names follow the feature type fields one to one; undefined values are null.
Json to_json(const Spectrum& spec, bool include_arrays = false);
Json to_json(const TimeFeatures& f);
Json to_json(const FreqStatFeatures& f);
Json to_json(const WaveFeatures& f);
Json to_json(const HarmonicSeries& h);
Json to_json(const SidebandPattern& p);
Json to_json(const PeakList& peaks);
Json to_json(const Description& d);

// Full feature report as printed by `sigtext features`.
Json feature_report(const FeatureBundle& b, SignalKind kind);

Json to_json(const SampleGrid& g);
SampleGrid sample_grid_from_json(const Json& j);

// {"class": "<generator class>", ...parameters}
Json to_json(const GeneratorParams& p);
GeneratorParams generator_params_from_json(const Json& j);

Json to_json(const ParamRanges& r);
// Fields present in j override `base`; unknown keys are rejected.
ParamRanges param_ranges_from_json(const Json& j, ParamRanges base = {});

Json to_json(const SSAConfig& c);
SSAConfig ssa_config_from_json(const Json& j);

Json decomposition_summary(const HankelDecomposition& d);

} // namespace sigtext
