#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "boolvol/dynamics.hpp"
#include "boolvol/error.hpp"
#include "boolvol/function_spec.hpp"
#include "boolvol/oracle.hpp"

using namespace boolvol;

namespace {

FunctionInstance inst(const char* s) { return make_instance(parse_spec(s)); }

DynamicsParams params(double p, double T, std::uint64_t replicas, std::uint64_t seed = 1) {
  DynamicsParams d;
  d.p = p;
  d.T = T;
  d.replicas = replicas;
  d.seed = seed;
  return d;
}

bool within(double est, double se, double truth, double k = 4.0) {
  return std::abs(est - truth) <= k * se + 1e-12;
}

}  // namespace

TEST_CASE("trajectory invariants") {
  auto f = inst("maj:5");
  auto d = params(0.5, 3.0, 1);
  for (std::uint64_t r = 0; r < 200; ++r) {
    auto tr = simulate_trajectory(f, d, r);
    CHECK(tr.C == tr.switch_times.size());
    for (std::size_t i = 0; i < tr.switch_times.size(); ++i) {
      CHECK(tr.switch_times[i] > 0.0);
      CHECK(tr.switch_times[i] <= 3.0);
      if (i > 0) CHECK(tr.switch_times[i] > tr.switch_times[i - 1]);
    }
    // Switches alternate starting from the initial output.
    const auto down = tr.initial_output ? (tr.C + 1) / 2 : tr.C / 2;
    CHECK(tr.S == down);
  }
}

TEST_CASE("T = 0 gives no switches") {
  auto e = estimate_C_distribution(inst("parity:4"), params(0.5, 0.0, 500));
  REQUIRE(e.histogram.size() == 1);
  CHECK(e.histogram[0].first == 0);
  CHECK(e.histogram[0].second == 500);
  CHECK(e.mean_C == 0.0);
}

TEST_CASE("constant function never switches") {
  auto ones = import_truth_table({1, 1, 1, 1});
  auto e = estimate_C_distribution(ones, params(0.5, 1.0, 2000));
  CHECK(e.p_zero == 1.0);
  CHECK(e.p_one == 1.0);
  CHECK(e.p_always_one == 1.0);
}

TEST_CASE("closed forms for dictator and parity") {
  auto dict = estimate_C_distribution(inst("dict:1"), params(0.5, 1.0, 50000));
  CHECK(within(dict.mean_C, dict.se_mean_C(), 0.5));
  CHECK(within(dict.p_zero, proportion_se(dict.p_zero, dict.replicas), std::exp(-0.5)));
  auto p8 = estimate_C_distribution(inst("parity:8"), params(0.5, 1.0, 50000));
  CHECK(within(p8.mean_C, p8.se_mean_C(), 4.0));
  auto p2 = estimate_C_distribution(inst("parity:2"), params(0.5, 1.0, 50000));
  CHECK(within(p2.p_zero, proportion_se(p2.p_zero, p2.replicas), std::exp(-1.0)));
  // P(Poisson(1/2) > 5).
  double cdf = 0, term = std::exp(-0.5);
  for (int k = 0; k <= 5; ++k) {
    cdf += term;
    term *= 0.5 / (k + 1);
  }
  auto tail = std::find_if(dict.tail.begin(), dict.tail.end(), [](auto& t) { return t.first == 5; });
  REQUIRE(tail != dict.tail.end());
  CHECK(within(tail->second, std::sqrt((1 - cdf) / 50000.0), 1 - cdf));
}

TEST_CASE("p = 0 and p = 1 freeze the output") {
  for (double p : {0.0, 1.0}) {
    auto e = estimate_C_distribution(inst("maj:7"), params(p, 1.0, 200));
    CHECK(e.mean_C == 0.0);
    CHECK(e.p_one == p);
  }
}

TEST_CASE("summary statistics are consistent") {
  auto e = estimate_C_distribution(inst("andor:3"), params(0.5, 1.0, 5000));
  std::uint64_t total = 0;
  double mean = 0;
  for (auto [c, n] : e.histogram) {
    total += n;
    mean += static_cast<double>(c * n);
  }
  CHECK(total == e.replicas);
  CHECK(mean / static_cast<double>(total) == doctest::Approx(e.mean_C));
  CHECK(e.tail.at(0).first == 0);
  CHECK(e.tail.at(0).second == doctest::Approx(1.0 - e.p_zero));
  CHECK(e.p_always_one + e.p_always_zero + (1.0 - e.p_zero) == doctest::Approx(1.0));
  CHECK(e.p_ever_one >= e.p_one);
  // Markov: P(C >= 1) <= E[C].
  CHECK(1.0 - e.p_zero <= e.mean_C + 4 * e.se_mean_C());
}

TEST_CASE("results do not depend on the thread count") {
  auto f = inst("itermaj3:3");
  auto d = params(0.4, 1.0, 3000, 17);
  d.threads = 1;
  SummaryOptions keep;
  keep.keep_replicas = true;
  auto one = estimate_C_distribution(f, d, keep);
  d.threads = 4;
  auto four = estimate_C_distribution(f, d, keep);
  CHECK(one.histogram == four.histogram);
  REQUIRE(one.per_replica.size() == four.per_replica.size());
  for (std::size_t i = 0; i < one.per_replica.size(); ++i) {
    CHECK(one.per_replica[i].C == four.per_replica[i].C);
  }
  auto j1 = estimate_joint(f, 0.5, 0.3, 2000, 3, 1);
  auto j4 = estimate_joint(f, 0.5, 0.3, 2000, 3, 3);
  for (int i = 0; i < 4; ++i) CHECK(j1.counts[i] == j4.counts[i]);
}

TEST_CASE("seeds change results") {
  auto f = inst("maj:9");
  auto a = estimate_C_distribution(f, params(0.5, 1.0, 2000, 1));
  auto b = estimate_C_distribution(f, params(0.5, 1.0, 2000, 2));
  CHECK(a.histogram != b.histogram);
}

TEST_CASE("joint law at lag t") {
  auto j0 = estimate_joint(inst("maj:5"), 0.5, 0.0, 2000, 1);
  CHECK(j0.disagree == 0.0);
  for (double t : {0.2, 1.0}) {
    auto d = estimate_joint(inst("dict:1"), 0.5, t, 40000, 5);
    CHECK(within(d.disagree, d.se_disagree, -std::expm1(-t) / 2));
    auto p = estimate_joint(inst("parity:3"), 0.5, t, 40000, 6);
    CHECK(within(p.disagree, p.se_disagree, -std::expm1(-3 * t) / 2));
  }
}

TEST_CASE("noise pairs") {
  auto z = sample_noise_pair(inst("maj:5"), 0.5, 0.0, 2000, 1);
  CHECK(z.disagree == 0.0);
  auto f = inst("andor:2");
  auto ind = sample_noise_pair(f, 0.5, 1.0, 40000, 2);
  CHECK(within(ind.mean_product, ind.se_mean_product, 0.25));
  for (double eps : {0.1, 0.5}) {
    auto d = sample_noise_pair(inst("dict:4"), 0.5, eps, 40000, 3);
    CHECK(within(d.disagree, d.se_disagree, eps / 2));
  }
  auto s = sample_noise_pair(inst("parity:4"), 0.5, 0.5, 40000, 4);
  CHECK(within(s.disagree, s.se_disagree, 15.0 / 32.0));
}

TEST_CASE("survival curves") {
  auto f = inst("andor:0");
  std::vector<double> xs{0.0, 0.2, 0.5, 1.0};
  auto curve = survival_curve(f, 0.5, xs, 40000, 9);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(within(curve[i].G, curve[i].se, 0.5 * std::exp(-xs[i] / 2)));
    if (i > 0) CHECK(curve[i].G <= curve[i - 1].G);
  }
  auto g0 = survival_estimate(inst("maj:5"), 0.5, 0.0, 20000, 2);
  CHECK(within(g0.G, g0.se, 0.5));
}

TEST_CASE("parameter validation") {
  auto f = inst("maj:3");
  CHECK_THROWS_AS(estimate_C_distribution(f, params(1.5, 1.0, 10)), Error);
  CHECK_THROWS_AS(estimate_C_distribution(f, params(0.5, -1.0, 10)), Error);
  CHECK_THROWS_AS(estimate_C_distribution(f, params(0.5, 1.0, 0)), Error);
  CHECK_THROWS_AS(sample_noise_pair(f, 0.5, 1.5, 10, 1), Error);
}

TEST_CASE("two-proportion z") {
  CHECK(two_proportion_z(0.5, 100, 0.5, 100) == 0.0);
  CHECK(two_proportion_z(0.6, 1000, 0.5, 1000) > 4.0);
}
