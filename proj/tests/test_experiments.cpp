#include <doctest.h>

#include <cmath>

#include "boolvol/error.hpp"
#include "boolvol/experiments.hpp"
#include "boolvol/function_spec.hpp"
#include "boolvol/json_io.hpp"

using namespace boolvol;

namespace {

SequencePlan plan_of(std::initializer_list<const char*> specs, double p, std::uint64_t replicas) {
  SequencePlan plan;
  for (const char* s : specs) plan.entries.push_back({parse_spec(s), p});
  plan.dynamics.replicas = replicas;
  return plan;
}

}  // namespace

TEST_CASE("trend conventions") {
  Thresholds th;
  auto t = make_trend("x", {0.3, 0.1, 0.01}, {0, 0, 0}, th);
  CHECK(t.vanishing);
  CHECK(t.strictly_decreasing);
  CHECK_FALSE(t.bounded);

  // Once at 0 a value may stay there.
  CHECK(make_trend("x", {0.2, 0.0, 0.0}, {0, 0, 0}, th).vanishing);
  CHECK_FALSE(make_trend("x", {0.2, 0.0, 0.0}, {0, 0, 0}, th).strictly_decreasing);
  // Small but not decreasing.
  CHECK_FALSE(make_trend("x", {0.01, 0.02, 0.03}, {0, 0, 0}, th).vanishing);
  CHECK_FALSE(make_trend("x", {0.5, 0.2, 0.06}, {0, 0, 0}, th).vanishing);

  auto b = make_trend("x", {0.2, 0.3, 0.4}, {0, 0, 0}, th);
  CHECK(b.bounded);
  CHECK(b.strictly_increasing);
  CHECK_FALSE(make_trend("x", {0.2, 0.3, 0.1}, {0, 0, 0}, th).bounded);
}

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::SemiVolatileType1) == "semivolatile-type1-consistent");
  CHECK(to_string(Verdict::SemiVolatileType2) == "semivolatile-type2-consistent");
  CHECK(to_string(Verdict::Volatile) == "volatile-consistent");
  CHECK(to_string(Verdict::Lame) == "lame-consistent");
  CHECK(to_string(Verdict::Tame) == "tame-consistent");
  CHECK(to_string(Verdict::Inconclusive) == "inconclusive");
}

TEST_CASE("classify needs three entries") {
  CHECK_THROWS_AS(classify(plan_of({"parity:4", "parity:8"}, 0.5, 100)), Error);
}

TEST_CASE("biased majority is lame and degenerate") {
  auto r = classify(plan_of({"maj:9", "maj:31", "maj:101"}, 0.2, 4000));
  CHECK(r.verdict == Verdict::Lame);
  CHECK(r.trend("degeneracy").vanishing);
}

TEST_CASE("parity plan is volatile") {
  auto r = classify(plan_of({"parity:4", "parity:8", "parity:16", "parity:32"}, 0.5, 4000));
  CHECK(r.verdict == Verdict::Volatile);
  CHECK(r.trend("p_zero").values.front() == doctest::Approx(std::exp(-2.0)).epsilon(0.2));
}

TEST_CASE("classification report carries raw data") {
  auto r = classify(plan_of({"dap:8", "dap:16", "dap:32"}, 0.5, 2000));
  CHECK(r.per_n.size() == 3);
  CHECK(r.specs.front() == "dap:8");
  for (const char* name : {"p_zero", "p_positive", "p_one", "degeneracy", "never_one", "mean_C",
                           "second_moment_ratio", "middle_1", "middle_2", "tail_2", "tail_5",
                           "at_most_2", "at_most_5"}) {
    CHECK_NOTHROW(r.trend(name));
    CHECK(r.trend(name).values.size() == 3);
  }
  CHECK_THROWS_AS(r.trend("nope"), Error);
  auto doc = io::to_json(r);
  CHECK(doc["heuristic"] == true);
  CHECK(doc["thresholds"]["vanish"] == 0.05);
}

TEST_CASE("plans from JSON") {
  auto plan = io::parse_plan(nlohmann::json::parse(R"([["maj:3", 0.5], ["maj:5", 0.4]])"));
  REQUIRE(plan.entries.size() == 2);
  CHECK(plan.entries[1].p == 0.4);
  auto obj = io::parse_plan(nlohmann::json::parse(
      R"({"entries": [{"spec": "parity:4"}, ["parity:8", 0.5]], "T": 2, "replicas": 77, "seed": 9})"));
  CHECK(obj.entries.size() == 2);
  CHECK(obj.dynamics.T == 2.0);
  CHECK(obj.dynamics.replicas == 77);
  CHECK(obj.dynamics.seed == 9);
  CHECK_THROWS_AS(io::parse_plan(nlohmann::json::parse("[]")), Error);
  CHECK_THROWS_AS(io::parse_plan(nlohmann::json::parse(R"([["maj:3", 1.5]])")), Error);
  CHECK_THROWS_AS(io::parse_plan(nlohmann::json::parse(R"([["bogus:3", 0.5]])")), Error);
  CHECK_THROWS_AS(io::parse_plan(nlohmann::json::parse(R"({"T": 1})")), Error);
}

TEST_CASE("named plans") {
  CHECK(named_plan("parity").entries.size() == 4);
  CHECK(named_plan("andor").entries.size() == 5);
  CHECK(named_plan("dap").entries.size() == 3);
  CHECK_THROWS_AS(named_plan("nope"), Error);
}

TEST_CASE("noise probe") {
  auto plan = plan_of({"dict:1", "dict:8", "dict:64"}, 0.5, 20000);
  auto rows = noise_probe(plan, {0.2});
  for (const auto& row : rows) {
    const auto& s = row.points.at(0).stats;
    CHECK(std::abs(s.disagree - 0.1) <= 4 * s.se_disagree);
  }
  CHECK(rows[0].sum_I_sq.has_value());
  CHECK_FALSE(rows[2].sum_I_sq.has_value());
  CHECK_THROWS_AS(noise_probe(plan, {0.0}), Error);
}

TEST_CASE("majority tameness probe") {
  auto rows = majority_tameness_probe({1, 101}, 5, 20000, 3);
  REQUIRE(rows.size() == 2);
  // P(Poisson(1/2) > 5).
  CHECK(rows[0].p_gt_M == doctest::Approx(1.4e-4).epsilon(1.0));
  CHECK(rows[1].p_zero > 0.1);
  auto zero = majority_tameness_probe({9}, 0, 5000, 3);
  CHECK(zero[0].p_gt_M == doctest::Approx(1.0 - zero[0].p_zero));
}

TEST_CASE("lameness probe") {
  SequencePlan plan;
  plan.entries.push_back({family::TruthTable{{1, 1}, ""}, 0.5});
  plan.entries.push_back({parse_spec("bigtame:2"), 0.5});
  plan.dynamics.replicas = 20000;
  auto rows = lameness_probe(plan);
  CHECK(rows[0].p_zero == 1.0);
  CHECK(rows[0].mean_C == 0.0);
  REQUIRE(rows[1].exact_mean_C);
  CHECK(*rows[1].exact_mean_C == 1.75);
  for (const auto& r : rows) CHECK_FALSE(r.markov_violation);
}
