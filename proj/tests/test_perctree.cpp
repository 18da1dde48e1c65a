#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "boolvol/dynamics.hpp"
#include "boolvol/error.hpp"
#include "boolvol/function_spec.hpp"
#include "boolvol/oracle.hpp"
#include "boolvol/perctree.hpp"

using namespace boolvol;

TEST_CASE("targets parse and print") {
  for (const char* s : {"logn", "logn1p:0.5", "nlogn:2", "nalpha:3", "const"}) {
    CHECK(to_string(parse_target(s)) == s);
  }
  CHECK_THROWS_AS(parse_target("bogus"), Error);
  CHECK_THROWS_AS(parse_target("nalpha:"), Error);
  CHECK(parse_target("nalpha:3").k_min() == 1);
  CHECK(parse_target("logn").k_min() == 3);
}

TEST_CASE("constant target builds the binary tree") {
  auto b = build_profile(parse_target("const"), 12);
  for (auto c : b.profile.children) CHECK(c == 2);
  auto w = weight_sequence(b.profile);
  for (double lw : w.log_w) CHECK(std::abs(lw) < 1e-12);
}

TEST_CASE("custom target 2^k gives four children per level") {
  const std::string path = "test_perctree_target.txt";
  {
    std::ofstream f(path);
    for (int k = 1; k <= 8; ++k) f << std::ldexp(1.0, k) << "\n";
  }
  auto b = build_profile(parse_target("custom:" + path), 8);
  for (auto c : b.profile.children) CHECK(c == 4);
  std::remove(path.c_str());
}

TEST_CASE("polynomial target stays within a factor 4") {
  auto b = build_profile(parse_target("nalpha:3"), 10);
  auto w = weight_sequence(b.profile);
  for (int k = 1; k <= 10; ++k) {
    CHECK(std::abs(w.log_w[k] - 3 * std::log(k)) <= std::log(4.0));
  }
  for (const char* s : {"logn", "logn1p:0.5", "nlogn:2", "nalpha:1.5"}) {
    CAPTURE(s);
    auto t = parse_target(s);
    auto p = build_profile(t, 12);
    for (const auto& l : p.levels) {
      if (l.k >= p.k_min) {
        CHECK(l.ratio >= 0.25);
        CHECK(l.ratio <= 4.0);
      }
    }
  }
}

TEST_CASE("unreachable targets are reported") {
  try {
    build_profile(parse_target("nalpha:60"), 10);
    FAIL("expected UnreachableTarget");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnreachableTarget);
  }
}

TEST_CASE("weight sequences") {
  auto w = weight_sequence(LevelProfile{{4, 4, 4}});
  CHECK(std::exp(w.log_w[1]) == doctest::Approx(2));
  CHECK(std::exp(w.log_w[2]) == doctest::Approx(4));
  CHECK(std::exp(w.log_w[3]) == doctest::Approx(8));
  LevelProfile p{{3, 5, 2, 7}};
  auto v = weight_sequence(p);
  for (std::size_t k = 0; k <= 4; ++k) {
    CHECK(std::llround(std::exp(v.log_w[k]) * std::ldexp(1.0, static_cast<int>(k))) ==
          static_cast<long long>(p.vertices_at(k)));
  }
}

TEST_CASE("explorer agrees with the generic simulator and the oracle") {
  LevelProfile profile{{2, 3, 2}};
  auto inst = make_instance(family::TreePercolation{profile, 3, ""});
  const double p_one = exact_prob_one(inst, 0.5);
  const double mean_C = exact_total_influence(inst, 0.5);

  RegimeOptions opt;
  opt.replicas = 60000;
  opt.seed = 4;
  auto r = regime_experiment(profile, {3}, opt);
  const auto& e = r.levels.at(0).summary;
  CHECK(std::abs(e.p_one - p_one) <= 4 * proportion_se(p_one, e.replicas));
  CHECK(std::abs(e.mean_C - mean_C) <= 4 * e.se_mean_C());

  DynamicsParams d;
  d.replicas = 60000;
  d.seed = 5;
  auto g = estimate_C_distribution(inst, d);
  CHECK(std::abs(g.mean_C - mean_C) <= 4 * g.se_mean_C());
  CHECK(std::abs(two_proportion_z(e.p_zero, e.replicas, g.p_zero, g.replicas)) < 4);
  CHECK(std::abs(two_proportion_z(e.p_always_zero, e.replicas, g.p_always_zero, g.replicas)) <
        4);
}

TEST_CASE("regime estimates are monotone in the level") {
  LevelProfile binary{std::vector<std::uint32_t>(12, 2)};
  RegimeOptions opt;
  opt.replicas = 4000;
  auto r = regime_experiment(binary, {12, 4, 8, 1, 4}, opt);
  REQUIRE(r.levels.size() == 4);
  CHECK(r.levels[0].level == 1);
  CHECK(r.levels[0].summary.p_one == doctest::Approx(0.75).epsilon(0.03));
  for (std::size_t i = 1; i < r.levels.size(); ++i) {
    CHECK(r.levels[i].summary.p_one <= r.levels[i - 1].summary.p_one);
    CHECK(r.levels[i].summary.p_ever_one <= r.levels[i - 1].summary.p_ever_one);
    CHECK(r.levels[i].summary.p_always_zero >= r.levels[i - 1].summary.p_always_zero);
  }
  CHECK_FALSE(r.p_outside_theory);
}

TEST_CASE("explorer is independent of the thread count") {
  LevelProfile profile{{2, 4, 3, 3}};
  RegimeOptions opt;
  opt.replicas = 1500;
  opt.threads = 1;
  auto a = regime_experiment(profile, {2, 4}, opt);
  opt.threads = 3;
  auto b = regime_experiment(profile, {2, 4}, opt);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.levels[i].summary.histogram == b.levels[i].summary.histogram);
  }
  CHECK(a.mean_edges_explored == b.mean_edges_explored);
}

TEST_CASE("explorer caps and validation") {
  LevelProfile big{std::vector<std::uint32_t>(30, 3)};
  RegimeOptions opt;
  opt.replicas = 10;
  try {
    regime_experiment(big, {30}, opt);
    FAIL("expected InstanceTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InstanceTooLarge);
  }
  opt.T = 0.0;
  CHECK_THROWS_AS(regime_experiment(LevelProfile{{2, 2}}, {1}, opt), Error);
  opt.T = 1.0;
  CHECK_THROWS_AS(regime_experiment(LevelProfile{{2, 2}}, {3}, opt), Error);
  opt.p = 0.3;
  CHECK(regime_experiment(LevelProfile{{2, 2}}, {2}, opt).p_outside_theory);
}
