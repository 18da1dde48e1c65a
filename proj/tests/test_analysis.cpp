#include <doctest.h>

#include <cmath>
#include <limits>

#include "boolvol/analysis.hpp"
#include "boolvol/dynamics.hpp"
#include "boolvol/error.hpp"
#include "boolvol/function_spec.hpp"
#include "boolvol/oracle.hpp"

using namespace boolvol;

TEST_CASE("maj3 a-series") {
  auto half = maj3_a_seq(0.5, 30);
  for (std::size_t k = 0; k < half.size(); ++k) CHECK(half.value(k) == 0.5);
  auto zero = maj3_a_seq(0.0, 10);
  auto one = maj3_a_seq(1.0, 10);
  for (std::size_t k = 0; k <= 10; ++k) {
    CHECK(zero.value(k) == 0.0);
    CHECK(one.value(k) == 1.0);
  }
  CHECK(maj3_a_seq(0.4, 1).value(1) == doctest::Approx(0.352).epsilon(1e-15));
}

TEST_CASE("maj3 a-series switches to log space without losing the trend") {
  auto s = maj3_a_seq(0.45, 40);
  bool seen_log = false;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s.entries[k].mode == SeriesMode::Log) seen_log = true;
    if (seen_log) CHECK(s.entries[k].mode == SeriesMode::Log);
    CHECK(s.log_value(k) < s.log_value(k - 1));
  }
  CHECK(seen_log);
  CHECK(std::isfinite(s.back().log()));
}

TEST_CASE("maj3 pi-series") {
  auto z = maj3_pi_seq(0.0, 10);
  for (std::size_t k = 0; k < z.size(); ++k) CHECK(z.value(k) == 0.0);
  CHECK(maj3_pi_seq(0.01, 1).value(1) == doctest::Approx(0.029996).epsilon(1e-14));
  for (double eps : {1e-6, 1e-3, 0.01, 0.1}) {
    auto s = maj3_pi_seq(eps, 20);
    for (int k = 1; k <= 20; ++k) CHECK(s.value(k) < 2 * eps * std::pow(1.5, k));
    auto a = maj3_a_seq(0.5 - eps, 20);
    for (int k = 0; k <= 20; ++k) CHECK(a.value(k) == doctest::Approx((1 - s.value(k)) / 2));
  }
}

TEST_CASE("maj3 joint series limits") {
  Maj3Params p;
  p.n = 50;
  p.alpha = 0.6;
  p.t = 0.0;
  auto same = maj3_b_seq(p, 40);
  for (int k = 0; k <= 50; ++k) {
    CHECK(std::abs(same.b.value(k) - same.a.value(k)) < 1e-12);
  }
  p.t = std::numeric_limits<double>::infinity();
  auto ind = maj3_b_seq(p, 40);
  for (int k = 0; k <= 50; ++k) {
    const double a = ind.a.value(k);
    CHECK(std::abs(ind.b.value(k) - a * a) < 1e-12);
  }

  Maj3Params wide;
  wide.n = 3;
  wide.alpha = 0.6;
  CHECK_THROWS_AS(maj3_b_seq(wide, 40), Error);
}

TEST_CASE("maj3 joint series against the dynamics") {
  Maj3Params p;
  p.n = 2;
  p.epsilon = 0.0;
  p.t = 0.5;
  auto s = maj3_b_seq(p, 30);
  auto j = estimate_joint(make_instance(family::IterMaj3{2}), 0.5, 0.5, 100000, 11);
  const double est = static_cast<double>(j.counts[3]) / static_cast<double>(j.replicas);
  CHECK(std::abs(est - s.b.value(2)) <= 4 * proportion_se(est, j.replicas));
}

TEST_CASE("cutoff diagnostic") {
  CHECK(maj3_alpha0() == doctest::Approx(0.5849625).epsilon(1e-7));
  auto lame = maj3_cutoff_diagnostic(1.0, 300, 50);
  CHECK(lame.log_diag == doctest::Approx(-66294.5).epsilon(1e-6));
  auto hot = maj3_cutoff_diagnostic(0.4, 300, 50);
  CHECK(hot.log_diag == doctest::Approx(136.70).epsilon(1e-4));
  double prev = 0;
  for (int n : {100, 200, 300, 400}) {
    auto c = maj3_cutoff_diagnostic(1.0, n, 50);
    if (n > 100) CHECK(c.log_diag < prev);
    prev = c.log_diag;
  }
  CHECK(maj3_cutoff_diagnostic(0.4, 100, 50).log_diag == doctest::Approx(18.28).epsilon(1e-3));
  const double mid = maj3_cutoff_diagnostic(0.7095, 300, 50).log_diag;
  CHECK(hot.log_diag > mid);
  CHECK(mid > lame.log_diag);
  CHECK(mid == doctest::Approx(-3593.0).epsilon(1e-4));
  CHECK_THROWS_AS(maj3_cutoff_diagnostic(1.0, 5, 50), Error);
  CHECK_THROWS_AS(maj3_cutoff_diagnostic(1.0, 100, 10), Error);
}

TEST_CASE("volatility ratio") {
  Maj3Params p;
  p.n = 1500;
  p.alpha = 0.4;
  p.t_over_a_n = 0.01;
  auto v = maj3_volatility_ratio(p, 400);
  CHECK(v.t_dominates_eps);
  CHECK(v.rho < 0.1);
  CHECK(v.rho == doctest::Approx(4.285e-6).epsilon(1e-3));

  try {
    maj3_volatility_ratio(p, 50);
    FAIL("expected PrecisionExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PrecisionExhausted);
  }

  Maj3Params q;
  q.n = 20;
  q.alpha = 0.4;
  q.t = 0.0;
  auto r0 = maj3_volatility_ratio(q, 50);
  CHECK(r0.rho == doctest::Approx(std::exp(-r0.log_a_n) - 1).epsilon(1e-10));
  q.t = std::numeric_limits<double>::infinity();
  CHECK(std::abs(maj3_volatility_ratio(q, 50).rho) < 1e-12);
}

TEST_CASE("grid count") {
  auto ones = import_truth_table({1, 1});
  auto g = maj3_grid_count(ones, 0.5, 0.5, 0.25, 200, 1);
  CHECK(g.mean_Z == static_cast<double>(g.points));
  CHECK(g.p_positive == 1.0);

  const double p = 0.3;
  const double a2 = maj3_a_seq(p, 2).value(2);
  auto im = maj3_grid_count(make_instance(family::IterMaj3{2}), p, a2, 0.25, 20000, 3);
  CHECK(std::abs(im.mean_Z - im.expected_Z) <= 4 * im.se_Z);
  CHECK(im.expected_Z == doctest::Approx(1 / 0.25).epsilon(0.25));
}

TEST_CASE("AND/OR x-series") {
  auto z = andor_x_seq(0.0, 20);
  for (std::size_t k = 0; k < z.x.size(); ++k) CHECK(z.x.value(k) == 0.5);
  for (int n : {1, 2, 5, 10, 20}) {
    for (double t : {0.001, 0.01, 0.1, 0.5, 1.0}) {
      auto s = andor_x_seq(t, n);
      CHECK(s.x.value(static_cast<std::size_t>(n)) <= 0.5 * andor_beta(n, t) + 1e-15);
    }
  }
  auto far = andor_x_seq(1.0, 200);
  CHECK(far.converged);
  CHECK(far.residual < 1e-10);

  auto mc = estimate_joint(make_instance(family::AndOrTree{3}), 0.5, 0.5, 100000, 21);
  CHECK(std::abs(mc.mean_product - andor_x_seq(0.5, 3).x.value(3)) <= 4 * mc.se_mean_product);
}

TEST_CASE("AND/OR scalars") {
  CHECK(andor_tau(0.0) == 0.0);
  CHECK(andor_beta(0, 0.5) == 1.0);
  CHECK(andor_beta(4, 0.01) == 1.0);
  CHECK(andor_beta(4, 0.25) == doctest::Approx(1 - 0.5 / 24));
  CHECK(andor_switch_rate(0).expected_S == 0.25);
  CHECK(andor_switch_rate(2).expected_S == 0.5);
  CHECK(andor_switch_rate(2).vertices == 7);
}

TEST_CASE("AND/OR second-moment bound") {
  auto b = andor_b_bound_seq(10, 0.25);
  const double cap = andor_b_bound_cap(10, 0.25);
  CHECK(cap == doctest::Approx(800 * std::pow(10.0 / 2047.0, 2) * 2));
  CHECK(b.value(10) <= cap);
  for (int n : {3, 6, 10}) {
    double prev = 2.0;
    for (double t : {0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0}) {
      auto s = andor_b_bound_seq(n, t);
      CHECK(s.value(n) >= 0.0);
      CHECK(s.value(n) <= prev);
      prev = s.value(n);
    }
  }
}

TEST_CASE("AND/OR survival floor") {
  CHECK(andor_survival_floor(0.0) == 0.5);
  CHECK(andor_survival_floor(1.0 / 16) == 0.0);
  CHECK(andor_survival_floor(0.5) == 0.0);
  auto r = andor_survival_floor_check(1000, 2000);
  CHECK(r.xs.size() == 1000);
  CHECK(r.min_margin >= -1e-6);
  auto g0 = survival_estimate(make_instance(family::AndOrTree{0}), 0.5, 0.0, 20000, 5);
  CHECK(std::abs(g0.G - 0.5) <= 4 * g0.se);
}
