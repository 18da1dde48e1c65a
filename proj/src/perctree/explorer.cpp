#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "boolvol/error.hpp"
#include "boolvol/parallel.hpp"
#include "boolvol/perctree.hpp"
#include "boolvol/rng.hpp"

// Space-time exploration of the edge dynamics. Each edge runs its own
// two-state process on [0, T): Bernoulli(p) at time 0, resampled to a fresh
// Bernoulli(p) at the points of a rate-1 Poisson process. A vertex carries
// the set of times at which it is joined to the root, stored as disjoint
// half-open intervals; a child's set is the parent's set intersected with
// the open times of the connecting edge. Children are only sampled while
// the parent's set is nonempty, which leaves the law of every level's
// connectivity process unchanged.

namespace boolvol {

namespace {

using Interval = std::pair<double, double>;
using IntervalSet = std::vector<Interval>;

void open_times(Engine& rng, double p, double T, IntervalSet& out) {
  out.clear();
  bool open = bernoulli(rng, p);
  double start = 0.0;
  double t = 0.0;
  while (true) {
    t += -std::log1p(-uniform01(rng));
    if (t >= T) break;
    bool next = bernoulli(rng, p);
    if (next == open) continue;
    if (open) out.emplace_back(start, t); else start = t;
    open = next;
  }
  if (open) out.emplace_back(start, T);
}

void intersect(const IntervalSet& a, const IntervalSet& b, IntervalSet& out) {
  out.clear();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].first, b[j].first);
    double hi = std::min(a[i].second, b[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second) ++i; else ++j;
  }
}

ReplicaOutcome outcome_of(IntervalSet& pieces, double T) {
  ReplicaOutcome o;
  if (pieces.empty()) return o;
  std::sort(pieces.begin(), pieces.end());
  std::size_t merged = 0;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].first <= pieces[merged].second) {
      pieces[merged].second = std::max(pieces[merged].second, pieces[i].second);
    } else {
      pieces[++merged] = pieces[i];
    }
  }
  pieces.resize(merged + 1);
  o.initial_output = pieces.front().first <= 0.0;
  for (const auto& [s, e] : pieces) {
    if (s > 0.0) ++o.C;
    if (e < T) {
      ++o.C;
      ++o.S;
    }
  }
  return o;
}

struct Frame {
  int level;
  IntervalSet times;
};

}  // namespace

std::vector<std::vector<ReplicaOutcome>> explore_replicas(const LevelProfile& profile,
                                                          const std::vector<int>& levels,
                                                          const RegimeOptions& options,
                                                          double* mean_edges) {
  validate(profile);
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "no levels requested");
  if (!(options.p >= 0.0 && options.p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "p must lie in [0, 1]");
  }
  if (!(options.T > 0.0) || !std::isfinite(options.T)) {
    throw Error(ErrorCode::InvalidArgument, "T must be finite and > 0");
  }
  if (options.replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be at least 1");
  int deepest = 0;
  for (int level : levels) {
    if (level < 1 || static_cast<std::size_t>(level) > profile.levels()) {
      throw Error(ErrorCode::InvalidArgument,
                  "level " + std::to_string(level) + " outside 1.." +
                      std::to_string(profile.levels()));
    }
    deepest = std::max(deepest, level);
  }
  auto edges = profile.edges_through(static_cast<std::size_t>(deepest));
  if (edges > options.max_edges) {
    throw Error(ErrorCode::InstanceTooLarge,
                "level " + std::to_string(deepest) + " has " + std::to_string(edges) +
                    " edges, above the cap of " + std::to_string(options.max_edges));
  }

  std::vector<std::vector<ReplicaOutcome>> out(levels.size(),
                                               std::vector<ReplicaOutcome>(options.replicas));
  std::vector<std::uint64_t> sampled(options.replicas, 0);
  const double T = options.T;

  parallel_for(options.replicas, options.threads, [&](std::uint64_t r) {
    auto rng = make_stream(options.seed, r, StreamSalt::Explorer);
    std::vector<IntervalSet> reached(static_cast<std::size_t>(deepest) + 1);
    std::vector<Frame> stack;
    stack.push_back({0, {{0.0, T}}});
    IntervalSet edge, child;
    std::uint64_t count = 0;
    while (!stack.empty()) {
      Frame frame = std::move(stack.back());
      stack.pop_back();
      const int next = frame.level + 1;
      const auto children = profile.children[static_cast<std::size_t>(frame.level)];
      for (std::uint32_t c = 0; c < children; ++c) {
        open_times(rng, options.p, T, edge);
        ++count;
        intersect(frame.times, edge, child);
        if (child.empty()) continue;
        auto& bucket = reached[static_cast<std::size_t>(next)];
        bucket.insert(bucket.end(), child.begin(), child.end());
        if (next < deepest) stack.push_back({next, child});
      }
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      out[i][r] = outcome_of(reached[static_cast<std::size_t>(levels[i])], T);
    }
    sampled[r] = count;
  });

  if (mean_edges) {
    long double total = 0;
    for (auto c : sampled) total += static_cast<long double>(c);
    *mean_edges = static_cast<double>(total / static_cast<long double>(options.replicas));
  }
  return out;
}

}  // namespace boolvol
