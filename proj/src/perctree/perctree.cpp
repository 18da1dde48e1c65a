#include "boolvol/perctree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "boolvol/error.hpp"

namespace boolvol {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double parse_number(const std::string& token, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidSpec, "bad number '" + token + "' in target '" + text + "'");
  }
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double WeightTarget::log_target(int k) const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "target levels start at 1");
  const double lk = std::log(static_cast<double>(k));
  switch (kind) {
    case TargetKind::LogN:
      return safe_log(lk);
    case TargetKind::LogN1pDelta:
      return (1.0 + param) * safe_log(lk);
    case TargetKind::NLogNAlpha:
      return k == 1 ? kNegInf : lk + param * std::log(lk);
    case TargetKind::NAlpha:
      return param * lk;
    case TargetKind::Constant:
      return 0.0;
    case TargetKind::Custom:
      if (static_cast<std::size_t>(k) > custom.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "custom target has no value for level " + std::to_string(k));
      }
      return safe_log(custom[static_cast<std::size_t>(k) - 1]);
  }
  return 0.0;
}

int WeightTarget::k_min() const {
  if (kind == TargetKind::Custom) return 1;
  for (int k = 1; k < 1'000'000; ++k) {
    if (log_target(k) >= 0.0) return k;
  }
  return 1'000'000;
}

WeightTarget parse_target(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw Error(ErrorCode::InvalidSpec, "target '" + name + "' needs a parameter");
  };
  auto no_arg = [&] {
    if (colon != std::string::npos) {
      throw Error(ErrorCode::InvalidSpec, "target '" + name + "' takes no parameter");
    }
  };
  WeightTarget t;
  if (name == "logn") {
    no_arg();
    t.kind = TargetKind::LogN;
  } else if (name == "logn1p") {
    need_arg();
    t.kind = TargetKind::LogN1pDelta;
    t.param = parse_number(arg, text);
    if (!(t.param > 0.0)) throw Error(ErrorCode::InvalidSpec, "logn1p needs delta > 0");
  } else if (name == "nlogn") {
    need_arg();
    t.kind = TargetKind::NLogNAlpha;
    t.param = parse_number(arg, text);
  } else if (name == "nalpha") {
    need_arg();
    t.kind = TargetKind::NAlpha;
    t.param = parse_number(arg, text);
    if (!(t.param > 0.0)) throw Error(ErrorCode::InvalidSpec, "nalpha needs alpha > 0");
  } else if (name == "const") {
    no_arg();
    t.kind = TargetKind::Constant;
  } else if (name == "custom") {
    need_arg();
    t.kind = TargetKind::Custom;
    std::ifstream in(arg);
    if (!in) throw Error(ErrorCode::InvalidSpec, "cannot open custom target file " + arg);
    std::string line;
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      auto last = line.find_last_not_of(" \t\r");
      double v = parse_number(line.substr(first, last - first + 1), text);
      if (!(v > 0.0)) throw Error(ErrorCode::InvalidSpec, "custom targets must be positive");
      t.custom.push_back(v);
    }
    if (t.custom.empty()) throw Error(ErrorCode::InvalidSpec, "custom target file is empty");
    t.param = 0;
  } else {
    throw Error(ErrorCode::InvalidSpec, "unknown target '" + name + "'");
  }
  return t;
}

std::string to_string(const WeightTarget& target) {
  switch (target.kind) {
    case TargetKind::LogN: return "logn";
    case TargetKind::LogN1pDelta: return "logn1p:" + format_param(target.param);
    case TargetKind::NLogNAlpha: return "nlogn:" + format_param(target.param);
    case TargetKind::NAlpha: return "nalpha:" + format_param(target.param);
    case TargetKind::Constant: return "const";
    case TargetKind::Custom: return "custom";
  }
  return "unknown";
}

BuiltProfile build_profile(const WeightTarget& target, int n_levels) {
  if (n_levels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 levels");
  const double log2 = std::log(2.0);
  const double tolerance = std::log(4.0) + 1e-12;
  BuiltProfile out;
  out.k_min = target.k_min();
  double log_v = 0.0;
  for (int k = 1; k <= n_levels; ++k) {
    double log_t = target.log_target(k);
    bool tracked = k >= out.k_min;
    double aim = tracked ? log_t : 0.0;
    double desired = k * log2 + aim - log_v;
    if (desired > std::log(4.0e9)) {
      throw Error(ErrorCode::UnreachableTarget,
                  "level " + std::to_string(k) + " needs more than 2^32 children per vertex");
    }
    double r = std::exp(desired);
    double lo = std::max(1.0, std::floor(r));
    double hi = lo + 1.0;
    double c = std::fabs(std::log(lo) - desired) <= std::fabs(std::log(hi) - desired) ? lo : hi;
    log_v += std::log(c);

    ProfileLevel level;
    level.k = k;
    level.children = static_cast<std::uint32_t>(c);
    level.log_w = log_v - k * log2;
    level.log_aim = aim;
    if (tracked) {
      double gap = level.log_w - log_t;
      level.ratio = std::exp(gap);
      if (!(std::fabs(gap) <= tolerance)) {
        throw Error(ErrorCode::UnreachableTarget,
                    "level " + std::to_string(k) + ": w_k / target = " +
                        format_param(level.ratio) + " is outside a factor 4");
      }
    }
    out.profile.children.push_back(level.children);
    out.levels.push_back(level);
  }
  return out;
}

WeightSequence weight_sequence(const LevelProfile& profile) {
  validate(profile);
  WeightSequence w;
  w.log_w.push_back(0.0);
  double log_v = 0.0;
  for (std::size_t k = 1; k <= profile.levels(); ++k) {
    log_v += std::log(static_cast<double>(profile.children[k - 1]));
    w.log_w.push_back(log_v - static_cast<double>(k) * std::log(2.0));
  }
  return w;
}

RegimeReport regime_experiment(const LevelProfile& profile, const std::vector<int>& levels,
                               const RegimeOptions& options) {
  RegimeReport report;
  report.profile = profile;
  report.options = options;
  report.p_outside_theory = options.p != 0.5;
  std::vector<int> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto outcomes = explore_replicas(profile, sorted, options, &report.mean_edges_explored);
  auto weights = weight_sequence(profile);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    PercLevelReport level;
    level.level = sorted[i];
    level.edges = profile.edges_through(static_cast<std::size_t>(sorted[i]));
    level.log_w = weights.log_w[static_cast<std::size_t>(sorted[i])];
    level.summary = summarize(std::move(outcomes[i]), options.summary);
    report.levels.push_back(std::move(level));
  }
  return report;
}

}  // namespace boolvol
