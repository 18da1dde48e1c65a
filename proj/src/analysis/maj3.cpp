#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "analysis/bigfloat.hpp"
#include "boolvol/analysis.hpp"
#include "boolvol/dynamics.hpp"
#include "boolvol/error.hpp"
#include "boolvol/parallel.hpp"
#include "boolvol/rng.hpp"

namespace boolvol {

using detail::BigFloat;

namespace {

const double kLogThreshold = std::log(kLogSwitchThreshold);

void require_depth(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "depth must be >= 0");
}

SeriesEntry entry_from(const BigFloat& v) {
  if (v.sign() > 0 && v < kLogSwitchThreshold) return {v.log_double(), SeriesMode::Log};
  return {v.to_double(), SeriesMode::Linear};
}

unsigned guard_digits(unsigned digits) { return digits + std::max(16u, digits / 4); }

BigFloat epsilon_of(const Maj3Params& params, mpfr_prec_t prec) {
  if (params.epsilon) return BigFloat(prec, *params.epsilon);
  BigFloat log_eps = log(BigFloat(prec, params.n)) * params.alpha +
                     BigFloat(prec, params.n) * log(BigFloat(prec, 2.0) / BigFloat(prec, 3.0));
  return exp(log_eps);
}

void check_params(const Maj3Params& params) {
  require_depth(params.n);
  if (params.epsilon && !(*params.epsilon >= 0.0 && *params.epsilon <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0, 1/2]");
  }
  if (!params.epsilon && params.n == 0) {
    throw Error(ErrorCode::InvalidArgument, "alpha-derived epsilon needs n >= 1");
  }
  if (!(params.t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
  if (params.t_over_a_n && !(*params.t_over_a_n >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "t_over_a_n must be >= 0");
  }
}

// a_0..a_n for p0 = 1/2 - eps. The pi form keeps eps at full relative
// precision while a_k is close to 1/2.
std::vector<BigFloat> a_series_big(const BigFloat& eps, int n) {
  std::vector<BigFloat> a;
  a.reserve(static_cast<std::size_t>(n) + 1);
  BigFloat pi = eps * 2.0;
  bool pi_form = true;
  BigFloat cur = 0.5 - eps;
  a.push_back(cur);
  for (int k = 0; k < n; ++k) {
    if (pi_form && pi < 0.5) {
      pi = pi * (1.5 - pi * pi * 0.5);
      cur = (1.0 - pi) * 0.5;
    } else {
      pi_form = false;
      cur = cur * cur * (3.0 - cur * 2.0);
    }
    a.push_back(cur);
  }
  return a;
}

struct JointBig {
  std::vector<BigFloat> a;
  std::vector<BigFloat> b;
  BigFloat eps;
  BigFloat t;
  bool t_infinite = false;
};

JointBig joint_big(const Maj3Params& params, mpfr_prec_t prec) {
  JointBig j{{}, {}, epsilon_of(params, prec), BigFloat(prec), false};
  if (j.eps > 0.5) {
    throw Error(ErrorCode::InvalidArgument, "alpha too large: epsilon exceeds 1/2 at this n");
  }
  j.a = a_series_big(j.eps, params.n);
  if (params.t_over_a_n) {
    j.t = j.a.back() * *params.t_over_a_n;
  } else if (std::isinf(params.t)) {
    j.t_infinite = true;
    j.t = BigFloat(prec, params.t);
  } else {
    j.t = BigFloat(prec, params.t);
  }
  // e^-t - 1, exact to relative precision for tiny t.
  BigFloat em = j.t_infinite ? BigFloat(prec, -1.0) : expm1(BigFloat(prec) - j.t);
  BigFloat b = (2.0 + em) * 0.25 - j.eps - j.eps * j.eps * em;
  j.b.reserve(j.a.size());
  j.b.push_back(b);
  for (int k = 0; k < params.n; ++k) {
    const BigFloat& a = j.a[static_cast<std::size_t>(k)];
    BigFloat gap = a - b;
    b = b * b * (3.0 - b * 2.0) + b * gap * gap * 6.0;
    j.b.push_back(b);
  }
  return j;
}

double log_of(const BigFloat& v) { return v.log_double(); }

}  // namespace

double SeriesEntry::linear() const { return mode == SeriesMode::Linear ? value : std::exp(value); }
double SeriesEntry::log() const { return mode == SeriesMode::Log ? value : std::log(value); }

RecursionSeries maj3_a_seq(double p0, int n) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p0 must lie in [0, 1]");
  require_depth(n);
  RecursionSeries s;
  s.entries.reserve(static_cast<std::size_t>(n) + 1);
  s.entries.push_back({p0, SeriesMode::Linear});
  double a = p0;
  bool log_mode = false;
  for (int k = 0; k < n; ++k) {
    if (log_mode) {
      a = std::log(3.0) + 2.0 * a + std::log1p(-(2.0 / 3.0) * std::exp(a));
    } else if (a > 0.0 && std::log(3.0) + 2.0 * std::log(a) + std::log1p(-(2.0 / 3.0) * a) <
                              kLogThreshold) {
      a = std::log(3.0) + 2.0 * std::log(a) + std::log1p(-(2.0 / 3.0) * a);
      log_mode = true;
    } else {
      a = a * a * (3.0 - 2.0 * a);
    }
    s.entries.push_back({a, log_mode ? SeriesMode::Log : SeriesMode::Linear});
  }
  return s;
}

RecursionSeries maj3_pi_seq(double eps, int n) {
  if (!(eps >= 0.0 && eps <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0, 1/2]");
  }
  require_depth(n);
  RecursionSeries s;
  double pi = 2.0 * eps;
  s.entries.push_back({pi, SeriesMode::Linear});
  for (int k = 0; k < n; ++k) {
    pi = 1.5 * pi - 0.5 * pi * pi * pi;
    s.entries.push_back({pi, SeriesMode::Linear});
  }
  return s;
}

double maj3_alpha0() { return std::log(1.5) / std::log(2.0); }

double maj3_log_epsilon(const Maj3Params& params) {
  if (params.epsilon) return std::log(*params.epsilon);
  return params.alpha * std::log(static_cast<double>(params.n)) +
         params.n * std::log(2.0 / 3.0);
}

Maj3JointSeries maj3_b_seq(const Maj3Params& params, unsigned digits) {
  check_params(params);
  if (digits < 16) throw Error(ErrorCode::InvalidArgument, "digits must be >= 16");
  auto prec = BigFloat::bits_for_digits(digits);
  auto j = joint_big(params, prec);
  Maj3JointSeries out;
  out.digits = digits;
  out.a.digits = out.b.digits = digits;
  for (const auto& v : j.a) out.a.entries.push_back(entry_from(v));
  for (const auto& v : j.b) out.b.entries.push_back(entry_from(v));
  out.log_epsilon = log_of(j.eps);
  out.log_t = j.t_infinite ? std::numeric_limits<double>::infinity() : log_of(j.t);
  out.t_dominates_eps = j.t_infinite || (j.t > 0.0 && !(j.t < j.eps * 10.0));
  return out;
}

CutoffDiagnostic maj3_cutoff_diagnostic(double alpha, int n, unsigned digits) {
  if (n < 10) throw Error(ErrorCode::InvalidArgument, "cutoff diagnostic needs n >= 10");
  if (digits < 30) throw Error(ErrorCode::InvalidArgument, "cutoff diagnostic needs digits >= 30");
  if (!std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be finite");
  Maj3Params params;
  params.n = n;
  params.alpha = alpha;

  auto run = [&](unsigned d) {
    auto prec = BigFloat::bits_for_digits(d);
    auto eps = epsilon_of(params, prec);
    if (!(eps < 0.5)) {
      throw Error(ErrorCode::InvalidArgument, "alpha too large: epsilon >= 1/2 at this n");
    }
    auto a = a_series_big(eps, n);
    const BigFloat& an = a.back();
    if (!(an.sign() > 0) || !an.is_finite()) {
      throw Error(ErrorCode::PrecisionExhausted, "a_n left the representable range");
    }
    BigFloat diag = BigFloat(prec, n) * log(BigFloat(prec, 3.0)) + log(an);
    CutoffDiagnostic c;
    c.alpha = alpha;
    c.n = n;
    c.log_diag = diag.to_double();
    c.log_a_n = log_of(an);
    c.log_epsilon = log_of(eps);
    c.digits = d;
    return c;
  };

  auto result = run(digits);
  auto check = run(guard_digits(digits));
  if (!std::isfinite(result.log_diag) ||
      std::fabs(result.log_diag - check.log_diag) > 1e-9 * std::max(1.0, std::fabs(check.log_diag))) {
    throw Error(ErrorCode::PrecisionExhausted,
                std::to_string(digits) + " digits do not resolve the cutoff diagnostic");
  }
  result.digits = digits;
  return result;
}

VolatilityRatio maj3_volatility_ratio(const Maj3Params& params, unsigned digits) {
  check_params(params);
  if (digits < 16) throw Error(ErrorCode::InvalidArgument, "digits must be >= 16");
  auto run = [&](unsigned d) {
    auto prec = BigFloat::bits_for_digits(d);
    auto j = joint_big(params, prec);
    const BigFloat& an = j.a.back();
    const BigFloat& bn = j.b.back();
    if (an.is_zero()) throw Error(ErrorCode::PrecisionExhausted, "a_n vanished");
    BigFloat rho = bn / (an * an) - 1.0;
    VolatilityRatio r;
    r.rho = rho.to_double();
    r.log_a_n = log_of(an);
    r.log_b_n = log_of(bn);
    r.log_epsilon = log_of(j.eps);
    r.log_t = j.t_infinite ? std::numeric_limits<double>::infinity() : log_of(j.t);
    r.t_dominates_eps = j.t_infinite || (j.t > 0.0 && !(j.t < j.eps * 10.0));
    r.digits = d;
    return r;
  };
  auto result = run(digits);
  auto check = run(guard_digits(digits));
  double tol = 1e-8 * std::fabs(check.rho) + 1e-12;
  if (!std::isfinite(result.rho) || std::fabs(result.rho - check.rho) > tol) {
    throw Error(ErrorCode::PrecisionExhausted,
                std::to_string(digits) + " digits do not resolve the volatility ratio");
  }
  result.digits = digits;
  return result;
}

GridCount maj3_grid_count(const FunctionInstance& instance, double p, double a_n, double delta,
                          std::uint64_t replicas, std::uint64_t seed, unsigned threads) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
  if (!(a_n > 0.0 && a_n <= 1.0)) throw Error(ErrorCode::InvalidArgument, "a_n must lie in (0, 1]");
  if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be at least 1");
  GridCount g;
  g.a_n = a_n;
  g.delta = delta;
  g.spacing = delta * a_n;
  double last = std::floor(1.0 / g.spacing);
  if (last > 1e15) throw Error(ErrorCode::InvalidArgument, "grid too fine");
  const auto J = static_cast<std::uint64_t>(last);
  g.points = J + 1;
  g.expected_Z = static_cast<double>(g.points) * a_n;
  g.replicas = replicas;

  DynamicsParams params;
  params.p = p;
  params.T = 1.0;
  params.seed = stream_key(seed, 0, StreamSalt::GridCount);
  params.replicas = replicas;
  const double h = g.spacing;
  // Grid indices j with j h in [s, e); `closed` makes the right end inclusive.
  auto count_in = [&](double s, double e, bool closed) -> std::uint64_t {
    auto lo = static_cast<std::uint64_t>(std::ceil(s / h));
    double top = closed ? std::floor(e / h) : std::ceil(e / h) - 1.0;
    if (top < 0.0) return 0;
    auto hi = std::min<std::uint64_t>(J, static_cast<std::uint64_t>(top));
    return hi >= lo ? hi - lo + 1 : 0;
  };

  std::vector<std::uint64_t> z(replicas);
  parallel_for(replicas, threads, [&](std::uint64_t r) {
    auto tr = simulate_trajectory(instance, params, r);
    std::uint64_t count = 0;
    bool on = tr.initial_output;
    double start = 0.0;
    for (double t : tr.switch_times) {
      if (on) count += count_in(start, t, false);
      on = !on;
      start = t;
    }
    if (on) count += count_in(start, 1.0, true);
    z[r] = count;
  });

  long double sum = 0, sum2 = 0;
  std::uint64_t positive = 0;
  for (auto v : z) {
    sum += static_cast<long double>(v);
    sum2 += static_cast<long double>(v) * static_cast<long double>(v);
    positive += v > 0;
  }
  const auto n = static_cast<long double>(replicas);
  g.mean_Z = static_cast<double>(sum / n);
  g.mean_Z2 = static_cast<double>(sum2 / n);
  double var = replicas > 1 ? static_cast<double>((sum2 - sum * sum / n) / (n - 1)) : 0.0;
  g.se_Z = std::sqrt(std::max(0.0, var) / static_cast<double>(replicas));
  g.p_positive = static_cast<double>(positive) / static_cast<double>(replicas);
  g.se_p_positive = proportion_se(g.p_positive, replicas);
  return g;
}

}  // namespace boolvol
