#include "boolvol/oracle.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "boolvol/error.hpp"

namespace boolvol {

namespace {

void require_enumerable(const FunctionInstance& instance, std::uint64_t cap) {
  if (instance.arity() > cap) {
    throw Error(ErrorCode::ArityTooLarge, "arity " + std::to_string(instance.arity()) +
                                              " exceeds the enumeration cap of " +
                                              std::to_string(cap));
  }
}

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must lie in [0, 1]");
  }
}

// weights[k] = p^k (1-p)^(m-k)
std::vector<long double> popcount_weights(std::uint64_t m, double p) {
  std::vector<long double> w(m + 1);
  for (std::uint64_t k = 0; k <= m; ++k) {
    w[k] = std::pow(static_cast<long double>(p), static_cast<long double>(k)) *
           std::pow(1.0L - p, static_cast<long double>(m - k));
  }
  return w;
}

std::uint64_t andor_vertices(int n) { return (std::uint64_t{1} << (n + 1)) - 1; }

void require_andor_args(int n, int k, int max_n) {
  if (n < 0 || k < 0 || k > n) {
    throw Error(ErrorCode::InvalidArgument, "need 0 <= k <= n");
  }
  if (n > max_n) {
    throw Error(ErrorCode::DepthTooLarge,
                "AND/OR pivotal enumeration supports n <= " + std::to_string(max_n));
  }
}

}  // namespace

std::vector<std::uint8_t> truth_table(const FunctionInstance& instance) {
  require_enumerable(instance, kMaxEnumerationArity);
  const std::uint64_t m = instance.arity();
  const std::uint64_t size = std::uint64_t{1} << m;
  std::vector<std::uint8_t> table(size);
  BitConfig x(m, 0);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    for (std::uint64_t i = 0; i < m; ++i) x[i] = static_cast<std::uint8_t>((idx >> i) & 1U);
    table[idx] = instance.evaluate(x) ? 1 : 0;
  }
  return table;
}

double exact_prob_one(const FunctionInstance& instance, double p) {
  require_probability(p, "p");
  auto table = truth_table(instance);
  auto w = popcount_weights(instance.arity(), p);
  long double sum = 0;
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    if (table[idx]) sum += w[std::popcount(idx)];
  }
  return static_cast<double>(sum);
}

HalfCounts exact_half_counts(const FunctionInstance& instance) {
  auto table = truth_table(instance);
  HalfCounts c;
  c.arity = instance.arity();
  c.pivotal.assign(c.arity, 0);
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    c.ones += table[idx];
    for (std::uint64_t i = 0; i < c.arity; ++i) {
      c.pivotal[i] += table[idx] != table[idx ^ (std::uint64_t{1} << i)];
    }
  }
  return c;
}

InfluenceReport exact_influence_report(const FunctionInstance& instance, double p) {
  require_probability(p, "p");
  auto table = truth_table(instance);
  const std::uint64_t m = instance.arity();
  auto w = popcount_weights(m, p);

  // s0[i]: weight of pivotal configs with x_i = 0; s1[i]: with x_i = 1.
  std::vector<long double> s0(m, 0), s1(m, 0);
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    long double wx = w[std::popcount(idx)];
    for (std::uint64_t i = 0; i < m; ++i) {
      std::uint64_t mask = std::uint64_t{1} << i;
      if (table[idx] != table[idx ^ mask]) {
        if (idx & mask) s1[i] += wx; else s0[i] += wx;
      }
    }
  }

  InfluenceReport r;
  r.p = p;
  r.influence.resize(m);
  r.pivotality.resize(m);
  long double total_i = 0, total_pi = 0, sum_sq = 0;
  for (std::uint64_t i = 0; i < m; ++i) {
    // Resampling from 0 lands on 1 w.p. p; from 1 lands on 0 w.p. 1 - p.
    long double infl = p * s0[i] + (1.0L - p) * s1[i];
    long double piv = s0[i] + s1[i];
    r.influence[i] = static_cast<double>(infl);
    r.pivotality[i] = static_cast<double>(piv);
    total_i += infl;
    total_pi += piv;
    sum_sq += infl * infl;
  }
  r.total_I = static_cast<double>(total_i);
  r.total_pi = static_cast<double>(total_pi);
  r.sum_I_sq = static_cast<double>(sum_sq);
  if (p == 0.5) r.exact = exact_half_counts(instance);
  return r;
}

double exact_total_influence(const FunctionInstance& instance, double p) {
  return exact_influence_report(instance, p).total_I;
}

NoiseCovariance exact_noise_covariance(const FunctionInstance& instance, double p, double eps) {
  require_probability(p, "p");
  require_probability(eps, "eps");
  require_enumerable(instance, kMaxNoiseArity);
  auto table = truth_table(instance);
  const std::uint64_t m = instance.arity();

  // g = K_eps f, applied one coordinate at a time:
  // g(x) <- (1 - eps) g(x) + eps [(1 - p) g(x_i = 0) + p g(x_i = 1)].
  std::vector<long double> g(table.begin(), table.end());
  const long double keep = 1.0L - eps;
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint64_t mask = std::uint64_t{1} << i;
    for (std::uint64_t idx = 0; idx < g.size(); ++idx) {
      if (idx & mask) continue;
      long double g0 = g[idx], g1 = g[idx | mask];
      long double mixed = (1.0L - p) * g0 + p * g1;
      g[idx] = keep * g0 + eps * mixed;
      g[idx | mask] = keep * g1 + eps * mixed;
    }
  }

  auto w = popcount_weights(m, p);
  long double p1 = 0, product = 0;
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    long double wx = w[std::popcount(idx)];
    if (table[idx]) {
      p1 += wx;
      product += wx * g[idx];
    }
  }
  NoiseCovariance out;
  out.prob_one = static_cast<double>(p1);
  out.mean_product = static_cast<double>(product);
  out.covariance = static_cast<double>(product - p1 * p1);
  out.disagree = static_cast<double>(2.0L * (p1 - product));
  return out;
}

double Dyadic::value() const { return std::ldexp(static_cast<double>(num), -static_cast<int>(log2_den)); }

Dyadic make_dyadic(std::uint64_t num, unsigned log2_den) {
  if (num == 0) return {0, 0};
  auto shift = std::min<unsigned>(static_cast<unsigned>(std::countr_zero(num)), log2_den);
  return {num >> shift, log2_den - shift};
}

Dyadic andor_pivotal_enumerated(int n, int k) {
  require_andor_args(n, k, 3);
  auto table = truth_table(make_instance(family::AndOrTree{n}));
  // Preorder numbering puts the leftmost level-k vertex at bit k.
  const std::uint64_t mask = std::uint64_t{1} << k;
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    if (table[idx] && (idx & mask) && !table[idx ^ mask]) ++count;
  }
  return make_dyadic(count, static_cast<unsigned>(andor_vertices(n)));
}

Dyadic andor_pivotal_decomposed(int n, int k) {
  require_andor_args(n, k, 4);
  // Output-1 counts of complete subtrees by height, from enumeration.
  std::vector<std::uint64_t> ones(static_cast<std::size_t>(n), 0);
  for (int h = 0; h < n; ++h) {
    auto table = truth_table(make_instance(family::AndOrTree{h}));
    for (auto b : table) ones[static_cast<std::size_t>(h)] += b;
  }
  auto zeros = [&](int h) { return (std::uint64_t{1} << andor_vertices(h)) - ones[h]; };

  // Each ancestor passes the signal iff (AND, sibling 1) or (OR, sibling 0).
  std::uint64_t count = 1;
  for (int j = 0; j < k; ++j) {
    int h = n - j - 1;
    count *= ones[h] + zeros(h);
  }
  // The vertex is OR and flips to 0 as AND iff exactly one child outputs 1;
  // a leaf always sees in-signals 0 and 1.
  if (k < n) {
    int h = n - k - 1;
    count *= 2 * ones[h] * zeros(h);
  }
  return make_dyadic(count, static_cast<unsigned>(andor_vertices(n)));
}

Dyadic exact_andor_pivotal(int n, int k) {
  require_andor_args(n, k, 4);
  return n <= 3 ? andor_pivotal_enumerated(n, k) : andor_pivotal_decomposed(n, k);
}

Dyadic andor_switch_mass_enumerated(int n) {
  require_andor_args(n, 0, 3);
  auto table = truth_table(make_instance(family::AndOrTree{n}));
  const std::uint64_t vertices = andor_vertices(n);
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    if (!table[idx]) continue;
    for (std::uint64_t v = 0; v < vertices; ++v) {
      std::uint64_t mask = std::uint64_t{1} << v;
      if ((idx & mask) && !table[idx ^ mask]) ++count;
    }
  }
  // The resampled gate becomes AND with probability 1/2.
  return make_dyadic(count, static_cast<unsigned>(vertices) + 1);
}

}  // namespace boolvol
