#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boolvol/dynamics.hpp"
#include "boolvol/level_profile.hpp"

namespace boolvol {

enum class TargetKind { LogN, LogN1pDelta, NLogNAlpha, NAlpha, Constant, Custom };

/// Desired growth of w_k = (vertices at level k) 2^-k.
struct WeightTarget {
  TargetKind kind = TargetKind::Constant;
  /// delta for LogN1pDelta, alpha for NLogNAlpha / NAlpha.
  double param = 0;
  /// Custom targets w_1, w_2, ...
  std::vector<double> custom;

  /// log target(k), k >= 1. -inf where the target is 0.
  double log_target(int k) const;
  /// First level whose target is at least 1; earlier levels aim at w = 1.
  int k_min() const;
};

/// logn, logn1p:<delta>, nlogn:<alpha>, nalpha:<alpha>, const, custom:<file>
/// (custom file: one target value per line). Throws InvalidSpec.
WeightTarget parse_target(const std::string& text);
std::string to_string(const WeightTarget& target);

struct ProfileLevel {
  int k = 0;
  std::uint32_t children = 0;
  double log_w = 0;
  /// log of the value aimed at (1 below k_min).
  double log_aim = 0;
  /// w_k / target(k); reported for k >= k_min, 0 otherwise.
  double ratio = 0;
};

struct BuiltProfile {
  LevelProfile profile;
  int k_min = 1;
  std::vector<ProfileLevel> levels;
};

/// Greedy per level: c_k minimizes |log(v_{k-1} c_k) - (k log 2 + log aim_k)|.
/// Throws UnreachableTarget when some k >= k_min ends outside a factor 4.
BuiltProfile build_profile(const WeightTarget& target, int n_levels);

/// log w_k for k = 0..levels (log w_0 = 0).
struct WeightSequence {
  std::vector<double> log_w;
};

WeightSequence weight_sequence(const LevelProfile& profile);

struct RegimeOptions {
  double p = 0.5;
  /// Horizon; must be > 0.
  double T = 1.0;
  std::uint64_t replicas = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Cap on the edge count of the deepest requested level.
  std::uint64_t max_edges = 10'000'000;
  SummaryOptions summary;
};

struct PercLevelReport {
  int level = 0;
  std::uint64_t edges = 0;
  double log_w = 0;
  /// summary.p_one, p_ever_one, p_always_one, p_always_zero carry the
  /// connectivity statistics.
  EmpiricalC summary;
};

struct RegimeReport {
  LevelProfile profile;
  RegimeOptions options;
  /// The regimes are stated for p = 1/2 only.
  bool p_outside_theory = false;
  /// Mean number of edges sampled per replica.
  double mean_edges_explored = 0;
  std::vector<PercLevelReport> levels;
};

/// Root-to-level connectivity under the edge dynamics. One space-time
/// exploration per replica serves every level, so the per-level events are
/// nested and the estimates are exactly monotone in the level.
/// Throws InstanceTooLarge above options.max_edges.
RegimeReport regime_experiment(const LevelProfile& profile, const std::vector<int>& levels,
                               const RegimeOptions& options);

/// Per-replica outcomes for each requested level (outer index = position in
/// `levels`). Lower-level building block of regime_experiment.
std::vector<std::vector<ReplicaOutcome>> explore_replicas(const LevelProfile& profile,
                                                          const std::vector<int>& levels,
                                                          const RegimeOptions& options,
                                                          double* mean_edges = nullptr);

}  // namespace boolvol
