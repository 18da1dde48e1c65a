#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "boolvol/instance.hpp"

namespace boolvol {

/// Arity caps for exhaustive enumeration.
inline constexpr std::uint64_t kMaxEnumerationArity = 24;
inline constexpr std::uint64_t kMaxNoiseArity = 20;

/// Outputs on all 2^m configurations; entry x has variable i at bit i of x.
/// Built with full evaluation only. Throws ArityTooLarge above 24 bits.
std::vector<std::uint8_t> truth_table(const FunctionInstance& instance);

double exact_prob_one(const FunctionInstance& instance, double p);

/// Integer counts at p = 1/2: every probability is count / 2^arity.
struct HalfCounts {
  std::uint64_t arity = 0;
  std::uint64_t ones = 0;
  /// pivotal[i] = #{x : f(x) != f(x with bit i flipped)}.
  std::vector<std::uint64_t> pivotal;
};

HalfCounts exact_half_counts(const FunctionInstance& instance);

struct InfluenceReport {
  double p = 0.5;
  /// Resampling influence P(f changes when bit i is resampled).
  std::vector<double> influence;
  /// Flip pivotality P(f(x) != f(x with bit i flipped)).
  std::vector<double> pivotality;
  double total_I = 0;
  double total_pi = 0;
  double sum_I_sq = 0;
  /// Present when p == 1/2.
  std::optional<HalfCounts> exact;
};

InfluenceReport exact_influence_report(const FunctionInstance& instance, double p);

/// Equals E[C] over [0, 1] for the dynamics at p.
double exact_total_influence(const FunctionInstance& instance, double p);

struct NoiseCovariance {
  double prob_one = 0;
  double mean_product = 0;
  double covariance = 0;
  double disagree = 0;
};

/// Exact statistics of (f(w), f(w^eps)). Throws ArityTooLarge above 20 bits.
NoiseCovariance exact_noise_covariance(const FunctionInstance& instance, double p, double eps);

/// num / 2^log2_den, reduced.
struct Dyadic {
  std::uint64_t num = 0;
  unsigned log2_den = 0;

  double value() const;
  bool operator==(const Dyadic&) const = default;
};

Dyadic make_dyadic(std::uint64_t num, unsigned log2_den);

/// P(f = 1, the leftmost level-k vertex is an OR gate and setting it to AND
/// makes f = 0) for the AND/OR tree of depth n at p = 1/2. Raw enumeration
/// for n <= 3, decomposition along the root path for n = 4. Throws
/// DepthTooLarge for n > 4 and InvalidArgument unless 0 <= k <= n.
Dyadic exact_andor_pivotal(int n, int k);

/// Raw enumeration only (n <= 3).
Dyadic andor_pivotal_enumerated(int n, int k);
/// Path decomposition (n <= 4).
Dyadic andor_pivotal_decomposed(int n, int k);

/// Probability that one update event (uniform vertex, resampled at p = 1/2)
/// switches f from 1 to 0, times N_n. Enumerates every vertex (n <= 3).
Dyadic andor_switch_mass_enumerated(int n);

}  // namespace boolvol
