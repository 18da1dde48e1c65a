#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boolvol/dynamics.hpp"
#include "boolvol/function_spec.hpp"

namespace boolvol {

struct PlanEntry {
  FunctionSpec spec;
  double p = 0.5;
};

/// A sequence f_n, p_n in increasing n, plus the shared dynamics settings
/// (p in `dynamics` is ignored; each entry carries its own).
struct SequencePlan {
  std::vector<PlanEntry> entries;
  DynamicsParams dynamics;
};

/// Conventions turning finite-n trends into labels.
struct Thresholds {
  /// "Vanishing": last value below this and strictly decreasing across the
  /// plan (a step may stay at 0).
  double vanish = 0.05;
  /// "Bounded away from 0": last value above this.
  double bounded = 0.1;
  /// Middle masses P(1 <= C <= k).
  std::vector<std::uint64_t> middle_k{1, 2};
  /// Tail masses P(C > M).
  std::vector<std::uint64_t> tail_M{2, 5};
  /// E[C^2] / E[C]^2 at or below this (with E[C] growing) rules out tame.
  double second_moment_cap = 4.0;
};

enum class Verdict {
  Lame,
  Tame,
  Volatile,
  SemiVolatileType1,
  SemiVolatileType2,
  Inconclusive,
};

/// "lame-consistent", ..., "inconclusive".
std::string to_string(Verdict v);

struct Trend {
  std::string stat;
  std::vector<double> values;
  std::vector<double> se;
  bool vanishing = false;
  bool bounded = false;
  bool strictly_increasing = false;
  bool strictly_decreasing = false;
};

Trend make_trend(std::string stat, std::vector<double> values, std::vector<double> se,
                 const Thresholds& thresholds);

struct ClassificationReport {
  std::vector<std::string> specs;
  std::vector<double> ps;
  std::vector<EmpiricalC> per_n;
  Thresholds thresholds;
  DynamicsParams dynamics;
  /// p_zero, p_positive, p_one, degeneracy, never_one, mean_C,
  /// second_moment_ratio, middle_<k>, tail_<M>, at_most_<M>.
  std::vector<Trend> trends;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;

  const Trend& trend(const std::string& stat) const;
};

/// Heuristic label from Monte Carlo trends; needs at least 3 plan entries.
ClassificationReport classify(const SequencePlan& plan, const Thresholds& thresholds = {});

struct NoisePoint {
  double eps = 0;
  JointStats stats;
};

struct NoiseProbeRow {
  std::string spec;
  double p = 0.5;
  std::vector<NoisePoint> points;
  /// Sum of squared resampling influences when the arity is enumerable.
  std::optional<double> sum_I_sq;
};

std::vector<NoiseProbeRow> noise_probe(const SequencePlan& plan, const std::vector<double>& epsilons);

struct TamenessRow {
  std::int64_t n = 0;
  double p_gt_M = 0;
  double se_p_gt_M = 0;
  double p_zero = 0;
  double se_p_zero = 0;
};

/// P(C_n > M) and P(C_n = 0) for Majority{n}, p = 1/2, over [0, 1].
std::vector<TamenessRow> majority_tameness_probe(const std::vector<std::int64_t>& n_list,
                                                 std::uint64_t M, std::uint64_t replicas,
                                                 std::uint64_t seed, unsigned threads = 0);

struct LamenessRow {
  std::string spec;
  double p = 0.5;
  double p_zero = 0;
  double se_p_zero = 0;
  double mean_C = 0;
  double se_mean_C = 0;
  std::optional<double> exact_mean_C;
  /// P(C >= 1) exceeds E[C] by more than 4 standard errors.
  bool markov_violation = false;
};

std::vector<LamenessRow> lameness_probe(const SequencePlan& plan);

/// Canned plans: "parity", "dap", "type2", "andor", "majority", "bigtame".
SequencePlan named_plan(const std::string& name);

}  // namespace boolvol
