#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "boolvol/instance.hpp"

namespace boolvol {

/// Each bit updates at the times of a rate-1 Poisson clock and is resampled
/// to 1 with probability p.
struct DynamicsParams {
  double p = 0.5;
  double T = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t replicas = 10000;
  /// 0 = hardware concurrency. Results never depend on this value.
  unsigned threads = 0;
};

/// One run over [0, T].
struct Trajectory {
  bool initial_output = false;
  /// Output switch times in (0, T], increasing.
  std::vector<double> switch_times;
  std::uint64_t C = 0;
  /// Number of 1 -> 0 switches.
  std::uint64_t S = 0;
};

struct ReplicaOutcome {
  std::uint64_t C = 0;
  std::uint64_t S = 0;
  bool initial_output = false;
};

struct SummaryOptions {
  /// Middle masses P(1 <= C <= k) are reported for k = 1..max_middle_k.
  std::uint64_t max_middle_k = 5;
  /// Tail masses P(C > M) are reported for these M.
  std::vector<std::uint64_t> tail_grid{0, 1, 2, 5, 10, 20, 50};
  /// Keep per-replica (C, S, initial_output) rows.
  bool keep_replicas = false;
};

/// Aggregated switch-count statistics. Probabilities come with their
/// binomial standard errors (suffix _se).
struct EmpiricalC {
  std::uint64_t replicas = 0;
  /// (c, count) pairs with count > 0, increasing in c.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram;
  double mean_C = 0;
  /// Unbiased sample variance.
  double var_C = 0;
  double mean_C2 = 0;
  double mean_S = 0;
  double var_S = 0;
  double mean_S2 = 0;
  double p_S_positive = 0;
  double p_zero = 0;
  /// P(f = 1 at time 0).
  double p_one = 0;
  double p_ever_one = 0;
  double p_always_one = 0;
  double p_always_zero = 0;
  /// (k, P(1 <= C <= k)).
  std::vector<std::pair<std::uint64_t, double>> middle;
  /// (M, P(C > M)).
  std::vector<std::pair<std::uint64_t, double>> tail;
  std::vector<ReplicaOutcome> per_replica;

  double se_mean_C() const;
  double se_mean_S() const;
};

/// Binomial standard error sqrt(q (1 - q) / n).
double proportion_se(double q, std::uint64_t n);

/// Throws InvalidArgument on p outside [0,1], negative or non-finite T, or
/// zero replicas.
void validate(const DynamicsParams& params);

/// Deterministic in (params.seed, replica_index).
Trajectory simulate_trajectory(const FunctionInstance& instance, const DynamicsParams& params,
                               std::uint64_t replica_index);

EmpiricalC summarize(std::vector<ReplicaOutcome> outcomes, const SummaryOptions& options = {});

EmpiricalC estimate_C_distribution(const FunctionInstance& instance, const DynamicsParams& params,
                                   const SummaryOptions& options = {});

/// Statistics of the pair (f(first), f(second)).
struct JointStats {
  std::uint64_t replicas = 0;
  /// counts[2a + b] = #{f(first) = a, f(second) = b}.
  std::uint64_t counts[4] = {0, 0, 0, 0};
  double p_first = 0;
  double p_second = 0;
  double mean_product = 0;
  double disagree = 0;
  double covariance = 0;
  double se_mean_product = 0;
  double se_disagree = 0;
  double se_covariance = 0;
};

JointStats joint_stats_from_counts(const std::uint64_t counts[4]);

/// (f(X(0)), f(X(t))) under the dynamics; each replica runs to horizon t.
JointStats estimate_joint(const FunctionInstance& instance, double p, double t,
                          std::uint64_t replicas, std::uint64_t seed, unsigned threads = 0);

/// (f(w), f(w^eps)) sampled directly: each bit of w is independently
/// resampled with probability eps.
JointStats sample_noise_pair(const FunctionInstance& instance, double p, double eps,
                             std::uint64_t replicas, std::uint64_t seed, unsigned threads = 0);

struct SurvivalPoint {
  double x = 0;
  double G = 0;
  double se = 0;
};

/// P(f(X(s)) = 1 for all s in [0, x]) for each x, from one set of replicas
/// run to max(xs); the events are nested so the estimates are monotone.
std::vector<SurvivalPoint> survival_curve(const FunctionInstance& instance, double p,
                                          const std::vector<double>& xs, std::uint64_t replicas,
                                          std::uint64_t seed, unsigned threads = 0);

SurvivalPoint survival_estimate(const FunctionInstance& instance, double p, double x,
                                std::uint64_t replicas, std::uint64_t seed, unsigned threads = 0);

/// Two-sample z statistic for a difference of proportions (pooled).
double two_proportion_z(double q1, std::uint64_t n1, double q2, std::uint64_t n2);

}  // namespace boolvol
