#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "boolvol/analysis.hpp"
#include "boolvol/dynamics.hpp"
#include "boolvol/experiments.hpp"
#include "boolvol/oracle.hpp"
#include "boolvol/perctree.hpp"

namespace boolvol::io {

using nlohmann::json;

/// Bumped on any incompatible change to the documents below.
inline constexpr int kSchemaVersion = 1;

json to_json(const EmpiricalC& e);
json to_json(const InfluenceReport& r);
json to_json(const JointStats& s);
json to_json(const NoiseCovariance& c);
json to_json(const RecursionSeries& s);
json to_json(const CutoffDiagnostic& c);
json to_json(const VolatilityRatio& v);
json to_json(const AndOrXSeries& x);
json to_json(const GFloorReport& g);
json to_json(const GridCount& g);
json to_json(const BuiltProfile& b);
json to_json(const WeightSequence& w);
json to_json(const RegimeReport& r);
json to_json(const ClassificationReport& r);
json to_json(const Dyadic& d);

/// Accepts either a JSON list of [spec, p] pairs, or an object
/// {"entries": [[spec, p] | {"spec": ..., "p": ...}, ...],
///  "T": ..., "replicas": ..., "seed": ...}. Throws InvalidSpec / Io.
SequencePlan read_plan(const std::filesystem::path& path);
SequencePlan parse_plan(const json& doc);

}  // namespace boolvol::io
