#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "boolvol/instance.hpp"

namespace boolvol {

// ---------------------------------------------------------------------------
// Series representation

enum class SeriesMode { Linear, Log };

struct SeriesEntry {
  /// The value itself (Linear) or its natural log (Log).
  double value = 0;
  SeriesMode mode = SeriesMode::Linear;

  /// Linear value; underflows to 0 for deep log entries.
  double linear() const;
  double log() const;
};

/// Entries k = 0..n. Once an entry is in log mode all later ones are too.
struct RecursionSeries {
  std::vector<SeriesEntry> entries;
  /// Decimal digits carried by the arithmetic (16 for double).
  unsigned digits = 16;

  std::size_t size() const { return entries.size(); }
  double value(std::size_t k) const { return entries.at(k).linear(); }
  double log_value(std::size_t k) const { return entries.at(k).log(); }
  const SeriesEntry& back() const { return entries.back(); }
};

/// Values below this switch the double engines to log space.
inline constexpr double kLogSwitchThreshold = 1e-280;

// ---------------------------------------------------------------------------
// Iterated 3-majority

/// P(root = 1) by depth when leaves are 1 with probability p0:
/// a_{k+1} = 3 a_k^2 - 2 a_k^3.
RecursionSeries maj3_a_seq(double p0, int n);

/// pi_{k+1} = 1.5 pi_k - 0.5 pi_k^3 with pi_0 = 2 eps, so that
/// a_k = (1 - pi_k) / 2 when p0 = 1/2 - eps.
RecursionSeries maj3_pi_seq(double eps, int n);

/// Depth n, gamma = n^alpha, eps = gamma (2/3)^n, p = 1/2 - eps.
struct Maj3Params {
  int n = 10;
  double alpha = 1.0;
  /// Overrides the alpha-derived eps when set.
  std::optional<double> epsilon;
  /// Time lag; +infinity is allowed.
  double t = 0.0;
  /// When set, t = t_over_a_n * a_n (overrides `t`).
  std::optional<double> t_over_a_n;
};

/// alpha_0 = log(3/2) / log(2).
double maj3_alpha0();

/// log eps for the parameters (exact when eps is explicit).
double maj3_log_epsilon(const Maj3Params& params);

struct Maj3JointSeries {
  RecursionSeries a;
  /// b_k = P(root of the depth-k tree is 1 at times 0 and t).
  RecursionSeries b;
  double log_epsilon = 0;
  /// log t actually used (may be below double range when relative to a_n).
  double log_t = 0;
  /// t > 10 eps.
  bool t_dominates_eps = false;
  unsigned digits = 0;
};

/// b_{k+1} = 3 b_k^2 - 2 b_k^3 + 6 b_k (a_k - b_k)^2 with
/// b_0 = (1 + e^-t)/4 - eps + eps^2 (1 - e^-t), run jointly with a_k.
Maj3JointSeries maj3_b_seq(const Maj3Params& params, unsigned digits = 50);

struct CutoffDiagnostic {
  double alpha = 0;
  int n = 0;
  /// n log 3 + log a_n.
  double log_diag = 0;
  double log_a_n = 0;
  double log_epsilon = 0;
  unsigned digits = 0;
};

/// Throws InvalidArgument for n < 10 or digits < 30, and
/// PrecisionExhausted when the value is not stable under extra precision.
CutoffDiagnostic maj3_cutoff_diagnostic(double alpha, int n, unsigned digits = 50);

struct VolatilityRatio {
  /// b_n / a_n^2 - 1.
  double rho = 0;
  double log_a_n = 0;
  double log_b_n = 0;
  double log_t = 0;
  double log_epsilon = 0;
  bool t_dominates_eps = false;
  unsigned digits = 0;
};

/// Throws PrecisionExhausted when rho is not stable under extra precision.
VolatilityRatio maj3_volatility_ratio(const Maj3Params& params, unsigned digits = 50);

struct GridCount {
  double a_n = 0;
  double delta = 0;
  /// delta * a_n.
  double spacing = 0;
  /// Grid times j * spacing in [0, 1], j = 0, 1, ...
  std::uint64_t points = 0;
  /// points * a_n.
  double expected_Z = 0;
  std::uint64_t replicas = 0;
  double mean_Z = 0;
  double se_Z = 0;
  double mean_Z2 = 0;
  double p_positive = 0;
  double se_p_positive = 0;
};

/// Counts grid times with f = 1 along simulated trajectories over [0, 1].
GridCount maj3_grid_count(const FunctionInstance& instance, double p, double a_n, double delta,
                          std::uint64_t replicas, std::uint64_t seed, unsigned threads = 0);

// ---------------------------------------------------------------------------
// AND/OR tree

/// tau = (1 - e^-t) / 2.
double andor_tau(double t);

/// 1 when t < 1/n^2 (always for n = 0), else 1 - sqrt(t)/24.
double andor_beta(int n, double t);

struct AndOrXSeries {
  /// x_k = P(f_k = 1 at times 0 and t).
  RecursionSeries x;
  double tau = 0;
  double fixed_point = 0;
  /// |x_n - fixed_point|.
  double residual = 0;
  /// residual < 1e-10.
  bool converged = false;
};

/// x_0 = (1 - tau)/2, x_{k+1} = (1 - tau)(x_k^2 + 1/4) + tau (x_k - x_k^2).
AndOrXSeries andor_x_seq(double t, int n);

struct SwitchRate {
  /// E[S_n] = (n + 2)/8.
  double expected_S = 0;
  /// (n + 2) / (8 N_n).
  double per_update = 0;
  std::uint64_t vertices = 0;
};

SwitchRate andor_switch_rate(int n);

/// Upper bounds bhat_k(t), k = 0..n: 1 for k <= 2, then
/// bhat_{k+1} = beta_k(t) bhat_k / 4 + k^2 / 4^(k+1).
RecursionSeries andor_b_bound_seq(int n, double t);

/// 800 (n / N_n)^2 / sqrt(t).
double andor_b_bound_cap(int n, double t);

/// max(0.5 (1 - 4 sqrt(x)), 0).
double andor_survival_floor(double x);

struct GFloorReport {
  unsigned grid = 0;
  unsigned convolution_cells = 0;
  double min_margin = 0;
  double argmin_x = 0;
  std::vector<double> xs;
  std::vector<double> rhs;
  std::vector<double> floor;
};

/// Evaluates RHS(x) = 0.5 (1 + x/2) S(x)^2 + 0.5 (1 - x/2) P(X + X' > x)
/// for X, X' i.i.d. with survival function S = andor_survival_floor, on
/// `grid` equally spaced points of [0, 1], and reports min(RHS - S).
/// P(X + X' > x) is discretized from below.
GFloorReport andor_survival_floor_check(unsigned grid = 1000, unsigned convolution_cells = 2000);

}  // namespace boolvol
