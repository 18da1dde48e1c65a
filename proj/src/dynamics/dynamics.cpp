#include "boolvol/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "boolvol/error.hpp"
#include "boolvol/parallel.hpp"
#include "boolvol/rng.hpp"

namespace boolvol {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must lie in [0, 1]");
  }
}

void check_time(double t, const char* name) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be finite and >= 0");
  }
}

void check_replicas(std::uint64_t replicas) {
  if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be at least 1");
}

std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

EvaluationState initial_state(const FunctionInstance& instance, double p, Engine& rng) {
  BitConfig x(instance.arity());
  for (auto& b : x) b = bernoulli(rng, p) ? 1 : 0;
  return instance.build_state(std::move(x));
}

// Runs the superposed clock on `state` up to `horizon`. on_switch(time,
// new_output) returns false to stop early.
template <class OnSwitch>
void run_events(EvaluationState& state, double p, double horizon, Engine& rng,
                OnSwitch&& on_switch) {
  const auto m = static_cast<std::uint64_t>(state.config().size());
  const double rate = static_cast<double>(m);
  double t = 0.0;
  while (true) {
    t += -std::log1p(-uniform01(rng)) / rate;
    if (t > horizon) return;
    std::uint64_t bit = uniform_index(rng, m);
    std::uint8_t value = bernoulli(rng, p) ? 1 : 0;
    auto r = state.apply_update(bit, value);
    if (r.changed && !on_switch(t, r.output)) return;
  }
}

ReplicaOutcome run_replica(const FunctionInstance& instance, const DynamicsParams& params,
                           std::uint64_t replica, std::vector<double>* times) {
  auto rng = make_stream(params.seed, replica, StreamSalt::Trajectory);
  auto state = initial_state(instance, params.p, rng);
  ReplicaOutcome out;
  out.initial_output = state.output();
  run_events(state, params.p, params.T, rng, [&](double t, bool now) {
    ++out.C;
    if (!now) ++out.S;
    if (times) times->push_back(t);
    return true;
  });
  return out;
}

}  // namespace

double proportion_se(double q, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, q * (1.0 - q)) / static_cast<double>(n));
}

double EmpiricalC::se_mean_C() const {
  return replicas ? std::sqrt(var_C / static_cast<double>(replicas)) : 0.0;
}

double EmpiricalC::se_mean_S() const {
  return replicas ? std::sqrt(var_S / static_cast<double>(replicas)) : 0.0;
}

void validate(const DynamicsParams& params) {
  check_probability(params.p, "p");
  check_time(params.T, "T");
  check_replicas(params.replicas);
}

Trajectory simulate_trajectory(const FunctionInstance& instance, const DynamicsParams& params,
                               std::uint64_t replica_index) {
  validate(params);
  Trajectory tr;
  auto out = run_replica(instance, params, replica_index, &tr.switch_times);
  tr.initial_output = out.initial_output;
  tr.C = out.C;
  tr.S = out.S;
  return tr;
}

EmpiricalC summarize(std::vector<ReplicaOutcome> outcomes, const SummaryOptions& options) {
  EmpiricalC e;
  e.replicas = outcomes.size();
  if (outcomes.empty()) return e;
  const double n = static_cast<double>(e.replicas);

  std::map<std::uint64_t, std::uint64_t> hist;
  long double sum_c = 0, sum_c2 = 0, sum_s = 0, sum_s2 = 0;
  std::uint64_t s_positive = 0, one = 0, ever = 0, always_one = 0, always_zero = 0;
  for (const auto& o : outcomes) {
    ++hist[o.C];
    auto c = static_cast<long double>(o.C);
    auto s = static_cast<long double>(o.S);
    sum_c += c;
    sum_c2 += c * c;
    sum_s += s;
    sum_s2 += s * s;
    s_positive += o.S > 0;
    one += o.initial_output;
    ever += o.initial_output || o.C > 0;
    always_one += o.initial_output && o.C == 0;
    always_zero += !o.initial_output && o.C == 0;
  }
  e.histogram.assign(hist.begin(), hist.end());
  e.mean_C = static_cast<double>(sum_c / n);
  e.mean_C2 = static_cast<double>(sum_c2 / n);
  e.mean_S = static_cast<double>(sum_s / n);
  e.mean_S2 = static_cast<double>(sum_s2 / n);
  if (e.replicas > 1) {
    e.var_C = static_cast<double>((sum_c2 - sum_c * sum_c / n) / (n - 1));
    e.var_S = static_cast<double>((sum_s2 - sum_s * sum_s / n) / (n - 1));
    e.var_C = std::max(0.0, e.var_C);
    e.var_S = std::max(0.0, e.var_S);
  }
  e.p_S_positive = static_cast<double>(s_positive) / n;
  e.p_zero = hist.count(0) ? static_cast<double>(hist[0]) / n : 0.0;
  e.p_one = static_cast<double>(one) / n;
  e.p_ever_one = static_cast<double>(ever) / n;
  e.p_always_one = static_cast<double>(always_one) / n;
  e.p_always_zero = static_cast<double>(always_zero) / n;

  for (std::uint64_t k = 1; k <= options.max_middle_k; ++k) {
    std::uint64_t mass = 0;
    for (auto it = hist.lower_bound(1); it != hist.end() && it->first <= k; ++it) mass += it->second;
    e.middle.emplace_back(k, static_cast<double>(mass) / n);
  }
  for (auto M : options.tail_grid) {
    std::uint64_t mass = 0;
    for (auto it = hist.upper_bound(M); it != hist.end(); ++it) mass += it->second;
    e.tail.emplace_back(M, static_cast<double>(mass) / n);
  }
  if (options.keep_replicas) e.per_replica = std::move(outcomes);
  return e;
}

EmpiricalC estimate_C_distribution(const FunctionInstance& instance, const DynamicsParams& params,
                                   const SummaryOptions& options) {
  validate(params);
  std::vector<ReplicaOutcome> outcomes(params.replicas);
  parallel_for(params.replicas, params.threads, [&](std::uint64_t r) {
    outcomes[r] = run_replica(instance, params, r, nullptr);
  });
  return summarize(std::move(outcomes), options);
}

JointStats joint_stats_from_counts(const std::uint64_t counts[4]) {
  JointStats s;
  for (int i = 0; i < 4; ++i) s.counts[i] = counts[i];
  s.replicas = counts[0] + counts[1] + counts[2] + counts[3];
  if (s.replicas == 0) return s;
  const double n = static_cast<double>(s.replicas);
  s.p_first = static_cast<double>(counts[2] + counts[3]) / n;
  s.p_second = static_cast<double>(counts[1] + counts[3]) / n;
  s.mean_product = static_cast<double>(counts[3]) / n;
  s.disagree = static_cast<double>(counts[1] + counts[2]) / n;
  s.covariance = s.mean_product - s.p_first * s.p_second;
  s.se_mean_product = proportion_se(s.mean_product, s.replicas);
  s.se_disagree = proportion_se(s.disagree, s.replicas);
  double var = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double v = (a - s.p_first) * (b - s.p_second) - s.covariance;
      var += static_cast<double>(counts[2 * a + b]) * v * v;
    }
  }
  s.se_covariance = std::sqrt(var / n / n);
  return s;
}

JointStats estimate_joint(const FunctionInstance& instance, double p, double t,
                          std::uint64_t replicas, std::uint64_t seed, unsigned threads) {
  check_probability(p, "p");
  check_time(t, "t");
  check_replicas(replicas);
  std::vector<std::uint8_t> cell(replicas);
  parallel_for(replicas, threads, [&](std::uint64_t r) {
    auto rng = make_stream(seed, r, StreamSalt::Joint);
    auto state = initial_state(instance, p, rng);
    bool first = state.output();
    run_events(state, p, t, rng, [](double, bool) { return true; });
    cell[r] = static_cast<std::uint8_t>(2 * first + state.output());
  });
  std::uint64_t counts[4] = {0, 0, 0, 0};
  for (auto c : cell) ++counts[c];
  return joint_stats_from_counts(counts);
}

JointStats sample_noise_pair(const FunctionInstance& instance, double p, double eps,
                             std::uint64_t replicas, std::uint64_t seed, unsigned threads) {
  check_probability(p, "p");
  check_probability(eps, "eps");
  check_replicas(replicas);
  std::vector<std::uint8_t> cell(replicas);
  const std::uint64_t m = instance.arity();
  parallel_for(replicas, threads, [&](std::uint64_t r) {
    auto rng = make_stream(seed, r, StreamSalt::NoisePair);
    auto state = initial_state(instance, p, rng);
    bool first = state.output();
    for (std::uint64_t i = 0; i < m; ++i) {
      if (bernoulli(rng, eps)) state.apply_update(i, bernoulli(rng, p) ? 1 : 0);
    }
    cell[r] = static_cast<std::uint8_t>(2 * first + state.output());
  });
  std::uint64_t counts[4] = {0, 0, 0, 0};
  for (auto c : cell) ++counts[c];
  return joint_stats_from_counts(counts);
}

std::vector<SurvivalPoint> survival_curve(const FunctionInstance& instance, double p,
                                          const std::vector<double>& xs, std::uint64_t replicas,
                                          std::uint64_t seed, unsigned threads) {
  check_probability(p, "p");
  check_replicas(replicas);
  double horizon = 0.0;
  for (double x : xs) {
    check_time(x, "x");
    horizon = std::max(horizon, x);
  }
  // Time during which the output stayed 1 from time 0; -1 if it started at 0.
  std::vector<double> held(replicas);
  parallel_for(replicas, threads, [&](std::uint64_t r) {
    auto rng = make_stream(seed, r, StreamSalt::Survival);
    auto state = initial_state(instance, p, rng);
    if (!state.output()) {
      held[r] = -1.0;
      return;
    }
    double first = std::numeric_limits<double>::infinity();
    run_events(state, p, horizon, rng, [&](double t, bool) {
      first = t;
      return false;
    });
    held[r] = first;
  });
  std::vector<SurvivalPoint> out;
  for (double x : xs) {
    std::uint64_t alive = 0;
    for (double h : held) alive += (h >= 0.0 && h > x);
    double g = static_cast<double>(alive) / static_cast<double>(replicas);
    out.push_back({x, g, proportion_se(g, replicas)});
  }
  return out;
}

SurvivalPoint survival_estimate(const FunctionInstance& instance, double p, double x,
                                std::uint64_t replicas, std::uint64_t seed, unsigned threads) {
  return survival_curve(instance, p, {x}, replicas, seed, threads).front();
}

double two_proportion_z(double q1, std::uint64_t n1, double q2, std::uint64_t n2) {
  if (n1 == 0 || n2 == 0) return 0.0;
  double pooled = (q1 * static_cast<double>(n1) + q2 * static_cast<double>(n2)) /
                  static_cast<double>(n1 + n2);
  double se = std::sqrt(pooled * (1.0 - pooled) *
                        (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  if (se == 0.0) return q1 == q2 ? 0.0 : std::numeric_limits<double>::infinity();
  return (q1 - q2) / se;
}

}  // namespace boolvol
