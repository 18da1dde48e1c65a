#include <algorithm>
#include <cmath>
#include <limits>

#include "boolvol/analysis.hpp"
#include "boolvol/error.hpp"

namespace boolvol {

namespace {

void require_depth(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "depth must be >= 0");
}

void require_time(double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
}

double vertices(int n) { return std::ldexp(1.0, n + 1) - 1.0; }

// P(X + X' > x) for i.i.d. X with survival function andor_survival_floor,
// rounded down. X has an atom 1/2 at 0 and density u^(-1/2) on (0, 1/16];
// with u = s^2 the continuous part is uniform with density 2 on (0, 1/4].
double sum_tail_lower(double x, unsigned cells) {
  if (x <= 0.0) return 0.75;
  // One of X, X' at the atom, the other >= x.
  double atom_part = andor_survival_floor(x);
  // Both continuous: 4 * area{(s, r) in (0, 1/4]^2 : s^2 + r^2 >= x}. A cell
  // counts only if its lower-left corner already satisfies the constraint.
  const double w = 0.25 / cells;
  std::uint64_t hits = 0;
  for (unsigned i = 0; i < cells; ++i) {
    double s = i * w;
    double need = x - s * s;
    std::uint64_t jmin = 0;
    if (need > 0.0) {
      double j = std::ceil(std::sqrt(need) / w);
      // Guard against rounding putting a failing corner on the boundary.
      while (j > 0 && s * s + (j - 1) * w * ((j - 1) * w) >= x) j -= 1;
      while (s * s + j * w * (j * w) < x) j += 1;
      jmin = static_cast<std::uint64_t>(j);
    }
    if (jmin < cells) hits += cells - jmin;
  }
  double both = 4.0 * static_cast<double>(hits) * w * w;
  return atom_part + both;
}

}  // namespace

double andor_tau(double t) {
  require_time(t);
  return -0.5 * std::expm1(-t);
}

double andor_beta(int n, double t) {
  require_depth(n);
  require_time(t);
  if (n == 0) return 1.0;
  double threshold = 1.0 / (static_cast<double>(n) * n);
  return t < threshold ? 1.0 : 1.0 - std::sqrt(t) / 24.0;
}

AndOrXSeries andor_x_seq(double t, int n) {
  require_depth(n);
  AndOrXSeries out;
  out.tau = andor_tau(t);
  const double tau = out.tau;
  double x = 0.5 * (1.0 - tau);
  out.x.entries.push_back({x, SeriesMode::Linear});
  for (int k = 0; k < n; ++k) {
    x = (1.0 - tau) * (x * x + 0.25) + tau * (x - x * x);
    out.x.entries.push_back({x, SeriesMode::Linear});
  }
  // Smaller root of (1 - 2 tau) x^2 - (1 - tau) x + (1 - tau)/4, rationalized
  // so that tau = 1/2 needs no special case.
  out.fixed_point = (1.0 - tau) / (2.0 * ((1.0 - tau) + std::sqrt(tau * (1.0 - tau))));
  out.residual = std::fabs(x - out.fixed_point);
  out.converged = out.residual < 1e-10;
  return out;
}

SwitchRate andor_switch_rate(int n) {
  require_depth(n);
  SwitchRate r;
  r.expected_S = (n + 2) / 8.0;
  r.vertices = (std::uint64_t{1} << (n + 1)) - 1;
  r.per_update = r.expected_S / static_cast<double>(r.vertices);
  return r;
}

// The bound for two update events at lag t follows from splitting on which
// vertices were updated:
//   (i)   the root both times:                 1 / (16 N_{n+1}^2)
//   (ii)  the root once:                       (n + 2) / (16 N_n N_{n+1})
//   (iii) both in the same subtree:            beta_n(t) bhat_n / 4
//   (iv)  one in each subtree:                 (n + 2)^2 / (128 N_n^2)
// Cases (i), (ii), (iv) are absorbed into n^2 / 4^(n+1).
RecursionSeries andor_b_bound_seq(int n, double t) {
  require_depth(n);
  require_time(t);
  RecursionSeries s;
  double b = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k >= 3) {
      int m = k - 1;
      b = 0.25 * andor_beta(m, t) * b + static_cast<double>(m) * m / std::ldexp(1.0, 2 * (m + 1));
    }
    s.entries.push_back({b, SeriesMode::Linear});
  }
  return s;
}

double andor_b_bound_cap(int n, double t) {
  require_depth(n);
  require_time(t);
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  double ratio = n / vertices(n);
  return 800.0 * ratio * ratio / std::sqrt(t);
}

double andor_survival_floor(double x) {
  if (x <= 0.0) return 0.5;
  return std::max(0.5 * (1.0 - 4.0 * std::sqrt(x)), 0.0);
}

GFloorReport andor_survival_floor_check(unsigned grid, unsigned convolution_cells) {
  if (grid < 100) throw Error(ErrorCode::InvalidArgument, "grid resolution must be >= 100");
  if (convolution_cells < 10) throw Error(ErrorCode::InvalidArgument, "too few convolution cells");
  GFloorReport r;
  r.grid = grid;
  r.convolution_cells = convolution_cells;
  r.min_margin = std::numeric_limits<double>::infinity();
  for (unsigned i = 0; i < grid; ++i) {
    double x = static_cast<double>(i) / (grid - 1);
    double s = andor_survival_floor(x);
    double both = s * s;
    double rhs = 0.5 * (1.0 + x / 2.0) * both +
                 0.5 * (1.0 - x / 2.0) * sum_tail_lower(x, convolution_cells);
    r.xs.push_back(x);
    r.rhs.push_back(rhs);
    r.floor.push_back(s);
    if (rhs - s < r.min_margin) {
      r.min_margin = rhs - s;
      r.argmin_x = x;
    }
  }
  return r;
}

}  // namespace boolvol
