// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "boolvol/analysis.hpp"
#include "boolvol/dynamics.hpp"
#include "boolvol/error.hpp"
#include "boolvol/experiments.hpp"
#include "boolvol/function_spec.hpp"
#include "boolvol/oracle.hpp"
#include "boolvol/perctree.hpp"

using namespace boolvol;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

DynamicsParams dyn(double p, std::uint64_t replicas, std::uint64_t seed = kSeed) {
  DynamicsParams d;
  d.p = p;
  d.T = 1.0;
  d.replicas = replicas;
  d.seed = seed;
  return d;
}

double z_of(double est, double se, double truth) {
  if (se == 0.0) return est == truth ? 0.0 : std::numeric_limits<double>::infinity();
  return (est - truth) / se;
}

// E[C] equals the total resampling influence.
void influence_identity(Outcome& o) {
  auto start = std::chrono::steady_clock::now();
  double worst = 0;
  for (const char* s : {"maj:9", "parity:8", "itermaj3:2", "andor:2", "type2:8"}) {
    auto f = make_instance(parse_spec(s));
    for (double p : {0.3, 0.5}) {
      auto e = estimate_C_distribution(f, dyn(p, 100000));
      double z = z_of(e.mean_C, e.se_mean_C(), exact_total_influence(f, p));
      worst = std::max(worst, std::abs(z));
      o.require(std::abs(z) < 4, std::string(s) + " p=" + std::to_string(p));
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < 120, "runtime");
  o.detail << "max |z| = " << worst << ", " << secs << " s";
}

void andor_switch_rate_check(Outcome& o) {
  double worst = 0;
  for (int n = 2; n <= 5; ++n) {
    auto e = estimate_C_distribution(make_instance(family::AndOrTree{n}), dyn(0.5, 100000));
    double z = z_of(e.mean_S, e.se_mean_S(), (n + 2) / 8.0);
    worst = std::max(worst, std::abs(z));
    o.require(std::abs(z) < 4, "n=" + std::to_string(n));
  }
  o.detail << "max |z| = " << worst;
}

void andor_pivotality(Outcome& o) {
  int checked = 0;
  for (int n = 0; n <= 3; ++n) {
    for (int k = 0; k <= n; ++k) {
      Dyadic want = make_dyadic(1, static_cast<unsigned>(k < n ? k + 2 : n + 1));
      o.require(andor_pivotal_enumerated(n, k) == want,
                "n=" + std::to_string(n) + " k=" + std::to_string(k));
      ++checked;
    }
  }
  o.detail << checked << " exact dyadic equalities";
}

void same_joint(Outcome& o) {
  double worst = 0;
  for (const char* s : {"maj:9", "itermaj3:2", "andor:3"}) {
    auto f = make_instance(parse_spec(s));
    for (double t : {0.1, 0.5, 1.0}) {
      auto a = estimate_joint(f, 0.5, t, 100000, kSeed);
      auto b = sample_noise_pair(f, 0.5, -std::expm1(-t), 100000, kSeed + 1);
      const double n = 100000.0;
      double z11 = two_proportion_z(a.counts[3] / n, a.replicas, b.counts[3] / n, b.replicas);
      double zd = two_proportion_z(a.disagree, a.replicas, b.disagree, b.replicas);
      worst = std::max({worst, std::abs(z11), std::abs(zd)});
      o.require(std::abs(z11) < 4 && std::abs(zd) < 4, std::string(s) + " t=" + std::to_string(t));
    }
  }
  o.detail << "max |z| = " << worst;
}

void maj3_recursions(Outcome& o) {
  double err_a = 0;
  for (double p : {0.3, 0.4, 0.5}) {
    double enumerated = exact_prob_one(make_instance(family::IterMaj3{2}), p);
    err_a = std::max(err_a, std::abs(enumerated - maj3_a_seq(p, 2).value(2)));
  }
  o.require(err_a <= 1e-12, "(a) enumeration");

  double err_b = 0;
  for (double alpha : {0.4, 1.0}) {
    Maj3Params mp;
    mp.n = 50;
    mp.alpha = alpha;
    mp.t = 0.0;
    auto same = maj3_b_seq(mp, 50);
    mp.t = std::numeric_limits<double>::infinity();
    auto ind = maj3_b_seq(mp, 50);
    for (int k = 0; k <= 50; ++k) {
      err_b = std::max(err_b, std::abs(same.b.value(k) - same.a.value(k)));
      err_b = std::max(err_b, std::abs(ind.b.value(k) - ind.a.value(k) * ind.a.value(k)));
    }
  }
  o.require(err_b <= 1e-12, "(b) limits");

  double worst = 0;
  for (double eps : {0.0, 0.1}) {
    Maj3Params mp;
    mp.n = 2;
    mp.epsilon = eps;
    mp.t = 0.5;
    double b2 = maj3_b_seq(mp, 50).b.value(2);
    auto j = estimate_joint(make_instance(family::IterMaj3{2}), 0.5 - eps, 0.5, 100000, kSeed);
    double est = j.counts[3] / 100000.0;
    double z = z_of(est, proportion_se(est, j.replicas), b2);
    worst = std::max(worst, std::abs(z));
    o.require(std::abs(z) < 4, "(c) eps=" + std::to_string(eps));
  }
  o.detail << "(a) err " << err_a << ", (b) err " << err_b << ", (c) max |z| " << worst;
}

void maj3_cutoff(Outcome& o) {
  double lame = maj3_cutoff_diagnostic(1.0, 300, 50).log_diag;
  double hot = maj3_cutoff_diagnostic(0.4, 300, 50).log_diag;
  o.require(lame < 0, "alpha=1 sign");
  o.require(hot > 0, "alpha=0.4 sign");
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {100, 200, 300, 400}) {
    double d = maj3_cutoff_diagnostic(1.0, n, 50).log_diag;
    o.require(d < prev, "monotone at n=" + std::to_string(n));
    prev = d;
  }
  o.detail << "log diag alpha=1: " << lame << ", alpha=0.4: " << hot;
}

void andor_survival(Outcome& o) {
  double worst = std::numeric_limits<double>::infinity();
  for (int n : {2, 4}) {
    auto curve = survival_curve(make_instance(family::AndOrTree{n}), 0.5, {0.01, 0.04}, 100000,
                                kSeed);
    for (const auto& pt : curve) {
      double slack = (pt.G - andor_survival_floor(pt.x)) / std::max(pt.se, 1e-300);
      worst = std::min(worst, slack);
      o.require(pt.G >= andor_survival_floor(pt.x) - 3 * pt.se,
                "n=" + std::to_string(n) + " x=" + std::to_string(pt.x));
    }
  }
  auto check = andor_survival_floor_check(1000, 2000);
  o.require(check.min_margin >= -1e-6, "fixed-point margin");
  o.detail << "min (G - floor)/se = " << worst << ", min(RHS - floor) = " << check.min_margin;
}

// Bounded E[S^2]/n^2: no step up by more than 4 standard errors.
void andor_second_moment(Outcome& o) {
  SummaryOptions keep;
  keep.keep_replicas = true;
  double prev = 0, prev_se = 0;
  std::ostringstream row;
  for (int n = 3; n <= 6; ++n) {
    auto e =
        estimate_C_distribution(make_instance(family::AndOrTree{n}), dyn(0.5, 100000), keep);
    double m4 = 0;
    for (const auto& r : e.per_replica) {
      double s2 = static_cast<double>(r.S) * static_cast<double>(r.S);
      m4 += s2 * s2;
    }
    m4 /= static_cast<double>(e.replicas);
    const double nn = static_cast<double>(n) * n;
    double ratio = e.mean_S2 / nn;
    double se = std::sqrt(std::max(0.0, m4 - e.mean_S2 * e.mean_S2) / e.replicas) / nn;
    if (n > 3) {
      o.require(ratio <= prev + 4 * std::hypot(se, prev_se), "growth at n=" + std::to_string(n));
    }
    o.require(std::abs(z_of(e.mean_S, e.se_mean_S(), (n + 2) / 8.0)) < 4,
              "E[S] at n=" + std::to_string(n));
    double pz = e.mean_S * e.mean_S / e.mean_S2;
    o.require(e.p_S_positive >= pz - 4 * proportion_se(e.p_S_positive, e.replicas),
              "Paley-Zygmund at n=" + std::to_string(n));
    o.require(e.p_S_positive > 0.1, "P(S>0) at n=" + std::to_string(n));
    row << " n=" << n << ": E[S^2]/n^2=" << ratio << " P(S>0)=" << e.p_S_positive;
    prev = ratio;
    prev_se = se;
  }
  o.detail << row.str().substr(1);
}

// Default thresholds and seed; 1e6 replicas because the dictator-AND-parity
// middle mass P(1 <= C <= 2) at n = 32 is about 0.049, next to the 0.05 cut.
void taxonomy(Outcome& o) {
  struct Case {
    const char* plan;
    Verdict want;
  };
  for (auto [name, want] : {Case{"dap", Verdict::SemiVolatileType1},
                            Case{"type2", Verdict::SemiVolatileType2},
                            Case{"andor", Verdict::SemiVolatileType2},
                            Case{"parity", Verdict::Volatile}}) {
    auto plan = named_plan(name);
    plan.dynamics.replicas = 1'000'000;
    auto r = classify(plan);
    o.require(r.verdict == want, std::string(name) + " gave " + to_string(r.verdict));
    o.detail << name << "=" << to_string(r.verdict) << " ";
  }
}

void percolation(Outcome& o) {
  RegimeOptions opt;
  opt.replicas = 10000;
  opt.seed = kSeed;
  auto binary = regime_experiment(LevelProfile{std::vector<std::uint32_t>(12, 2)}, {4, 8, 12}, opt);
  for (std::size_t i = 1; i < binary.levels.size(); ++i) {
    o.require(binary.levels[i].summary.p_one < binary.levels[i - 1].summary.p_one,
              "binary p_one at level " + std::to_string(binary.levels[i].level));
  }

  auto built = build_profile(parse_target("nalpha:3"), 10);
  auto w = weight_sequence(built.profile);
  double worst_log = 0;
  for (int k = 1; k <= 10; ++k) {
    worst_log = std::max(worst_log, std::abs(w.log_w[k] - 3 * std::log(k)));
  }
  o.require(worst_log <= std::log(4.0), "w_k within factor 4 of k^3");

  auto r = regime_experiment(built.profile, {4, 5, 6, 7, 8, 9, 10}, opt);
  double min_zero = 1;
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& s = r.levels[i].summary;
    min_zero = std::min(min_zero, s.p_always_zero);
    o.require(s.p_always_zero > 0.01, "p_always_zero at level " + std::to_string(r.levels[i].level));
    if (i > 0) {
      const auto& q = r.levels[i - 1].summary;
      o.require(s.mean_C <= q.mean_C + 4 * std::hypot(s.se_mean_C(), q.se_mean_C()),
                "mean C grows at level " + std::to_string(r.levels[i].level));
    }
  }
  o.detail << "binary p_one";
  for (const auto& l : binary.levels) o.detail << " " << l.summary.p_one;
  o.detail << "; max |log w_k - 3 log k| = " << worst_log << "; mean C "
           << r.levels.front().summary.mean_C << " -> " << r.levels.back().summary.mean_C
           << "; min p_always_zero " << min_zero;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "influence identity", influence_identity},
      {2, "AND/OR switch rate", andor_switch_rate_check},
      {3, "AND/OR pivotality", andor_pivotality},
      {4, "dynamics vs noise joint law", same_joint},
      {5, "iterated 3-majority recursions", maj3_recursions},
      {6, "iterated 3-majority cutoff", maj3_cutoff},
      {7, "AND/OR survival floor", andor_survival},
      {8, "AND/OR second moment", andor_second_moment},
      {9, "taxonomy probes", taxonomy},
      {10, "percolation regimes", percolation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
