#include "boolvol/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "boolvol/error.hpp"
#include "boolvol/oracle.hpp"

namespace boolvol {

namespace {

bool vanishing(const std::vector<double>& v, double threshold) {
  if (v.empty() || !(v.back() < threshold)) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1] || v[i] == 0.0)) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return v.size() >= 2;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return v.size() >= 2;
}

double lookup(const std::vector<std::pair<std::uint64_t, double>>& table, std::uint64_t key) {
  for (const auto& [k, v] : table) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::InvalidArgument, "statistic not computed for " + std::to_string(key));
}

SummaryOptions summary_for(const Thresholds& th) {
  SummaryOptions opt;
  opt.max_middle_k = 0;
  for (auto k : th.middle_k) opt.max_middle_k = std::max(opt.max_middle_k, k);
  std::set<std::uint64_t> grid(opt.tail_grid.begin(), opt.tail_grid.end());
  grid.insert(th.tail_M.begin(), th.tail_M.end());
  opt.tail_grid.assign(grid.begin(), grid.end());
  return opt;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Lame: return "lame-consistent";
    case Verdict::Tame: return "tame-consistent";
    case Verdict::Volatile: return "volatile-consistent";
    case Verdict::SemiVolatileType1: return "semivolatile-type1-consistent";
    case Verdict::SemiVolatileType2: return "semivolatile-type2-consistent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Trend make_trend(std::string stat, std::vector<double> values, std::vector<double> se,
                 const Thresholds& th) {
  Trend t;
  t.stat = std::move(stat);
  t.vanishing = vanishing(values, th.vanish);
  t.bounded = !values.empty() && values.back() > th.bounded;
  t.strictly_increasing = strictly_increasing(values);
  t.strictly_decreasing = strictly_decreasing(values);
  t.values = std::move(values);
  t.se = std::move(se);
  return t;
}

const Trend& ClassificationReport::trend(const std::string& stat) const {
  for (const auto& t : trends) {
    if (t.stat == stat) return t;
  }
  throw Error(ErrorCode::InvalidArgument, "no trend named " + stat);
}

ClassificationReport classify(const SequencePlan& plan, const Thresholds& th) {
  if (plan.entries.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "classification needs at least 3 plan entries");
  }
  if (th.middle_k.empty() || th.tail_M.empty()) {
    throw Error(ErrorCode::InvalidArgument, "middle and tail grids must be nonempty");
  }
  ClassificationReport r;
  r.thresholds = th;
  r.dynamics = plan.dynamics;
  auto options = summary_for(th);
  for (const auto& entry : plan.entries) {
    auto params = plan.dynamics;
    params.p = entry.p;
    r.specs.push_back(to_string(entry.spec));
    r.ps.push_back(entry.p);
    r.per_n.push_back(estimate_C_distribution(make_instance(entry.spec), params, options));
  }

  const auto n = r.per_n.size();
  auto collect = [&](auto&& value) {
    std::vector<double> v(n), se(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = value(r.per_n[i]);
      se[i] = proportion_se(std::clamp(v[i], 0.0, 1.0), r.per_n[i].replicas);
    }
    return std::pair{v, se};
  };
  auto add = [&](const std::string& name, auto&& value) {
    auto [v, se] = collect(value);
    r.trends.push_back(make_trend(name, v, se, th));
    return r.trends.back();
  };

  const Trend p_zero = add("p_zero", [](const EmpiricalC& e) { return e.p_zero; });
  const Trend p_positive = add("p_positive", [](const EmpiricalC& e) { return 1.0 - e.p_zero; });
  const Trend p_one = add("p_one", [](const EmpiricalC& e) { return e.p_one; });
  const Trend degeneracy =
      add("degeneracy", [](const EmpiricalC& e) { return e.p_one * (1.0 - e.p_one); });
  const Trend never_one =
      add("never_one", [](const EmpiricalC& e) { return 1.0 - e.p_ever_one; });
  {
    std::vector<double> v, se;
    for (const auto& e : r.per_n) {
      v.push_back(e.mean_C);
      se.push_back(e.se_mean_C());
    }
    r.trends.push_back(make_trend("mean_C", v, se, th));
    std::vector<double> ratio, none(n, 0.0);
    for (const auto& e : r.per_n) {
      ratio.push_back(e.mean_C > 0 ? e.mean_C2 / (e.mean_C * e.mean_C)
                                   : std::numeric_limits<double>::infinity());
    }
    r.trends.push_back(make_trend("second_moment_ratio", ratio, none, th));
  }
  std::vector<Trend> middles, tails, at_most;
  for (auto k : th.middle_k) {
    middles.push_back(add("middle_" + std::to_string(k),
                          [k](const EmpiricalC& e) { return lookup(e.middle, k); }));
  }
  for (auto M : th.tail_M) {
    tails.push_back(
        add("tail_" + std::to_string(M), [M](const EmpiricalC& e) { return lookup(e.tail, M); }));
    at_most.push_back(add("at_most_" + std::to_string(M),
                          [M](const EmpiricalC& e) { return 1.0 - lookup(e.tail, M); }));
  }
  // tail_M is in caller order; use the largest M for the tail rules.
  std::size_t top = static_cast<std::size_t>(
      std::max_element(th.tail_M.begin(), th.tail_M.end()) - th.tail_M.begin());
  const Trend& tail_top = tails[top];

  Verdict v = Verdict::Inconclusive;
  if (p_positive.vanishing) {
    if (degeneracy.vanishing) {
      v = Verdict::Lame;
    } else {
      r.notes.push_back("P(C >= 1) vanishes but P(f=1)P(f=0) does not; a lame sequence "
                        "must be degenerate, so no label is given");
    }
  } else if (p_zero.vanishing &&
             std::all_of(at_most.begin(), at_most.end(), [](const Trend& t) { return t.vanishing; })) {
    v = Verdict::Volatile;
  } else if (p_zero.bounded && (tail_top.bounded || tail_top.strictly_increasing)) {
    bool all_vanish =
        std::all_of(middles.begin(), middles.end(), [](const Trend& t) { return t.vanishing; });
    bool some_bounded =
        std::any_of(middles.begin(), middles.end(), [](const Trend& t) { return t.bounded; });
    if (all_vanish) {
      v = Verdict::SemiVolatileType1;
    } else if (some_bounded) {
      v = Verdict::SemiVolatileType2;
    } else {
      r.notes.push_back("middle mass neither vanishes nor stays bounded away from 0");
    }
  } else if (tail_top.values.back() < th.vanish && !tail_top.strictly_increasing) {
    v = Verdict::Tame;
  }

  if (p_one.vanishing && never_one.vanishing && v != Verdict::Volatile) {
    r.notes.push_back("P(f=1) vanishes while P(f=1 at some time) tends to 1: volatile");
    v = Verdict::Volatile;
  }
  const Trend& mean_c = r.trend("mean_C");
  const Trend& ratio = r.trend("second_moment_ratio");
  if (v == Verdict::Tame && mean_c.strictly_increasing &&
      ratio.values.back() <= th.second_moment_cap) {
    r.notes.push_back("E[C] grows with E[C^2]/E[C]^2 bounded, which rules out tameness");
    v = Verdict::Inconclusive;
  }
  r.verdict = v;
  r.notes.push_back("labels are finite-n heuristics, not proofs");
  return r;
}

std::vector<NoiseProbeRow> noise_probe(const SequencePlan& plan, const std::vector<double>& epsilons) {
  for (double e : epsilons) {
    if (!(e > 0.0 && e <= 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1]");
  }
  std::vector<NoiseProbeRow> rows;
  for (const auto& entry : plan.entries) {
    auto instance = make_instance(entry.spec);
    NoiseProbeRow row;
    row.spec = to_string(entry.spec);
    row.p = entry.p;
    for (double eps : epsilons) {
      row.points.push_back({eps, sample_noise_pair(instance, entry.p, eps, plan.dynamics.replicas,
                                                   plan.dynamics.seed, plan.dynamics.threads)});
    }
    if (instance.arity() <= kMaxEnumerationArity) {
      row.sum_I_sq = exact_influence_report(instance, entry.p).sum_I_sq;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TamenessRow> majority_tameness_probe(const std::vector<std::int64_t>& n_list,
                                                 std::uint64_t M, std::uint64_t replicas,
                                                 std::uint64_t seed, unsigned threads) {
  std::vector<TamenessRow> rows;
  SummaryOptions options;
  options.tail_grid = {M};
  for (auto n : n_list) {
    DynamicsParams params;
    params.p = 0.5;
    params.T = 1.0;
    params.seed = seed;
    params.replicas = replicas;
    params.threads = threads;
    auto e = estimate_C_distribution(make_instance(family::Majority{n}), params, options);
    TamenessRow row;
    row.n = n;
    row.p_gt_M = e.tail.front().second;
    row.se_p_gt_M = proportion_se(row.p_gt_M, e.replicas);
    row.p_zero = e.p_zero;
    row.se_p_zero = proportion_se(e.p_zero, e.replicas);
    rows.push_back(row);
  }
  return rows;
}

std::vector<LamenessRow> lameness_probe(const SequencePlan& plan) {
  std::vector<LamenessRow> rows;
  for (const auto& entry : plan.entries) {
    auto instance = make_instance(entry.spec);
    auto params = plan.dynamics;
    params.p = entry.p;
    auto e = estimate_C_distribution(instance, params);
    LamenessRow row;
    row.spec = to_string(entry.spec);
    row.p = entry.p;
    row.p_zero = e.p_zero;
    row.se_p_zero = proportion_se(e.p_zero, e.replicas);
    row.mean_C = e.mean_C;
    row.se_mean_C = e.se_mean_C();
    double bound = row.mean_C;
    double se = std::hypot(row.se_p_zero, row.se_mean_C);
    if (instance.arity() <= kMaxEnumerationArity) {
      row.exact_mean_C = exact_total_influence(instance, entry.p);
      bound = *row.exact_mean_C;
      se = row.se_p_zero;
    }
    row.markov_violation = (1.0 - row.p_zero) > bound + 4.0 * se;
    rows.push_back(row);
  }
  return rows;
}

SequencePlan named_plan(const std::string& name) {
  SequencePlan plan;
  auto add = [&](FunctionSpec spec) { plan.entries.push_back({std::move(spec), 0.5}); };
  if (name == "parity") {
    for (std::int64_t m : {4, 8, 16, 32}) add(family::Parity{m});
  } else if (name == "dap") {
    for (std::int64_t m : {8, 16, 32}) add(family::DictatorAndParity{m});
  } else if (name == "type2") {
    for (std::int64_t m : {8, 16, 32}) add(family::Type2Example{m});
  } else if (name == "andor") {
    for (std::int64_t d = 3; d <= 7; ++d) add(family::AndOrTree{d});
  } else if (name == "majority") {
    for (std::int64_t n : {9, 101, 1001}) add(family::Majority{n});
  } else if (name == "bigtame") {
    for (std::int64_t n : {2, 4, 6, 8}) add(family::BigInfluenceTame{n});
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown plan '" + name + "'");
  }
  return plan;
}

}  // namespace boolvol
