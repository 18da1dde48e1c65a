#include "boolvol/json_io.hpp"

#include <cmath>
#include <fstream>

#include "boolvol/error.hpp"

namespace boolvol::io {

namespace {

// JSON has no infinities; they are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json pairs(const std::vector<std::pair<std::uint64_t, double>>& v) {
  json out = json::array();
  for (const auto& [k, x] : v) out.push_back({k, number(x)});
  return out;
}

json number_list(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

const char* mode_name(SeriesMode m) { return m == SeriesMode::Linear ? "linear" : "log"; }

}  // namespace

json to_json(const EmpiricalC& e) {
  json hist = json::array();
  for (const auto& [c, n] : e.histogram) hist.push_back({c, n});
  json out = {
      {"replicas", e.replicas},
      {"histogram", hist},
      {"mean_C", number(e.mean_C)},
      {"se_mean_C", number(e.se_mean_C())},
      {"var_C", number(e.var_C)},
      {"mean_C2", number(e.mean_C2)},
      {"mean_S", number(e.mean_S)},
      {"se_mean_S", number(e.se_mean_S())},
      {"var_S", number(e.var_S)},
      {"mean_S2", number(e.mean_S2)},
      {"p_S_positive", number(e.p_S_positive)},
      {"p_zero", number(e.p_zero)},
      {"p_one", number(e.p_one)},
      {"p_ever_one", number(e.p_ever_one)},
      {"p_always_one", number(e.p_always_one)},
      {"p_always_zero", number(e.p_always_zero)},
      {"middle", pairs(e.middle)},
      {"tail", pairs(e.tail)},
  };
  return out;
}

json to_json(const InfluenceReport& r) {
  json per_bit = json::array();
  for (std::size_t i = 0; i < r.influence.size(); ++i) {
    per_bit.push_back({i + 1, r.influence[i], r.pivotality[i]});
  }
  json out = {{"p", r.p},
              {"per_bit", per_bit},
              {"total_I", r.total_I},
              {"total_pi", r.total_pi},
              {"sum_I_sq", r.sum_I_sq}};
  if (r.exact) {
    out["exact_half"] = {{"arity", r.exact->arity},
                         {"ones", r.exact->ones},
                         {"pivotal_counts", r.exact->pivotal}};
  }
  return out;
}

json to_json(const JointStats& s) {
  return {{"replicas", s.replicas},
          {"counts", {s.counts[0], s.counts[1], s.counts[2], s.counts[3]}},
          {"p_first", s.p_first},
          {"p_second", s.p_second},
          {"mean_product", s.mean_product},
          {"disagree", s.disagree},
          {"covariance", s.covariance},
          {"std_errors",
           {{"mean_product", s.se_mean_product},
            {"disagree", s.se_disagree},
            {"covariance", s.se_covariance}}}};
}

json to_json(const NoiseCovariance& c) {
  return {{"prob_one", c.prob_one},
          {"mean_product", c.mean_product},
          {"covariance", c.covariance},
          {"disagree", c.disagree}};
}

json to_json(const RecursionSeries& s) {
  json entries = json::array();
  for (std::size_t k = 0; k < s.entries.size(); ++k) {
    entries.push_back(
        {{"k", k}, {"value", number(s.entries[k].value)}, {"mode", mode_name(s.entries[k].mode)}});
  }
  return {{"digits", s.digits}, {"entries", entries}};
}

json to_json(const CutoffDiagnostic& c) {
  return {{"alpha", c.alpha},
          {"n", c.n},
          {"log_diag", number(c.log_diag)},
          {"log_a_n", number(c.log_a_n)},
          {"log_epsilon", number(c.log_epsilon)},
          {"digits", c.digits}};
}

json to_json(const VolatilityRatio& v) {
  return {{"rho", number(v.rho)},
          {"log_a_n", number(v.log_a_n)},
          {"log_b_n", number(v.log_b_n)},
          {"log_t", number(v.log_t)},
          {"log_epsilon", number(v.log_epsilon)},
          {"t_dominates_eps", v.t_dominates_eps},
          {"digits", v.digits}};
}

json to_json(const AndOrXSeries& x) {
  return {{"tau", x.tau},
          {"fixed_point", x.fixed_point},
          {"residual", x.residual},
          {"converged", x.converged},
          {"series", to_json(x.x)}};
}

json to_json(const GFloorReport& g) {
  return {{"grid", g.grid},
          {"convolution_cells", g.convolution_cells},
          {"min_margin", g.min_margin},
          {"argmin_x", g.argmin_x},
          {"x", number_list(g.xs)},
          {"rhs", number_list(g.rhs)},
          {"floor", number_list(g.floor)}};
}

json to_json(const GridCount& g) {
  return {{"a_n", g.a_n},
          {"delta", g.delta},
          {"grid_spacing", g.spacing},
          {"points", g.points},
          {"expected_Z", g.expected_Z},
          {"replicas", g.replicas},
          {"mean_Z", g.mean_Z},
          {"se_Z", g.se_Z},
          {"mean_Z2", g.mean_Z2},
          {"p_positive", g.p_positive},
          {"se_p_positive", g.se_p_positive}};
}

json to_json(const BuiltProfile& b) {
  json levels = json::array();
  for (const auto& l : b.levels) {
    levels.push_back({{"k", l.k},
                      {"children", l.children},
                      {"log_w", l.log_w},
                      {"log_aim", l.log_aim},
                      {"ratio", l.ratio}});
  }
  return {{"children", b.profile.children}, {"k_min", b.k_min}, {"levels", levels}};
}

json to_json(const WeightSequence& w) {
  json levels = json::array();
  for (std::size_t k = 0; k < w.log_w.size(); ++k) {
    levels.push_back({{"k", k}, {"log_w", w.log_w[k]}, {"w", number(std::exp(w.log_w[k]))}});
  }
  return {{"levels", levels}};
}

json to_json(const RegimeReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    json s = to_json(l.summary);
    levels.push_back({{"level", l.level},
                      {"edges", l.edges},
                      {"log_w", l.log_w},
                      {"p_one", l.summary.p_one},
                      {"p_ever_one", l.summary.p_ever_one},
                      {"p_always_one", l.summary.p_always_one},
                      {"p_always_zero", l.summary.p_always_zero},
                      {"C", s}});
  }
  return {{"children", r.profile.children},
          {"p", r.options.p},
          {"T", r.options.T},
          {"replicas", r.options.replicas},
          {"seed", r.options.seed},
          {"p_outside_theory", r.p_outside_theory},
          {"mean_edges_explored", r.mean_edges_explored},
          {"levels", levels}};
}

json to_json(const ClassificationReport& r) {
  json per_n = json::array();
  for (std::size_t i = 0; i < r.per_n.size(); ++i) {
    per_n.push_back({{"spec", r.specs[i]}, {"p", r.ps[i]}, {"C", to_json(r.per_n[i])}});
  }
  json trends = json::array();
  for (const auto& t : r.trends) {
    trends.push_back({{"stat", t.stat},
                      {"values", number_list(t.values)},
                      {"se", number_list(t.se)},
                      {"vanishing", t.vanishing},
                      {"bounded", t.bounded},
                      {"strictly_increasing", t.strictly_increasing},
                      {"strictly_decreasing", t.strictly_decreasing}});
  }
  return {{"verdict", to_string(r.verdict)},
          {"heuristic", true},
          {"thresholds",
           {{"vanish", r.thresholds.vanish},
            {"bounded", r.thresholds.bounded},
            {"middle_k", r.thresholds.middle_k},
            {"tail_M", r.thresholds.tail_M},
            {"second_moment_cap", r.thresholds.second_moment_cap}}},
          {"T", r.dynamics.T},
          {"replicas", r.dynamics.replicas},
          {"seed", r.dynamics.seed},
          {"per_n", per_n},
          {"trends", trends},
          {"notes", r.notes}};
}

json to_json(const Dyadic& d) {
  return {{"numerator", d.num}, {"log2_denominator", d.log2_den}, {"value", d.value()}};
}

SequencePlan parse_plan(const json& doc) {
  SequencePlan plan;
  const json* entries = &doc;
  try {
    if (doc.is_object()) {
      if (!doc.contains("entries")) throw Error(ErrorCode::InvalidSpec, "plan has no \"entries\"");
      entries = &doc.at("entries");
      if (doc.contains("T")) plan.dynamics.T = doc.at("T").get<double>();
      if (doc.contains("replicas")) plan.dynamics.replicas = doc.at("replicas").get<std::uint64_t>();
      if (doc.contains("seed")) plan.dynamics.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (!entries->is_array()) throw Error(ErrorCode::InvalidSpec, "plan entries must be a list");
    for (const auto& e : *entries) {
      PlanEntry entry;
      if (e.is_array() && e.size() == 2) {
        entry.spec = parse_spec(e.at(0).get<std::string>());
        entry.p = e.at(1).get<double>();
      } else if (e.is_object()) {
        entry.spec = parse_spec(e.at("spec").get<std::string>());
        entry.p = e.value("p", 0.5);
      } else {
        throw Error(ErrorCode::InvalidSpec, "plan entry must be [spec, p] or {spec, p}");
      }
      if (!(entry.p >= 0.0 && entry.p <= 1.0)) {
        throw Error(ErrorCode::InvalidSpec, "plan entry p outside [0, 1]");
      }
      plan.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("malformed plan: ") + e.what());
  }
  if (plan.entries.empty()) throw Error(ErrorCode::InvalidSpec, "plan is empty");
  return plan;
}

SequencePlan read_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidSpec, "cannot open plan file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("plan is not valid JSON: ") + e.what());
  }
  return parse_plan(doc);
}

}  // namespace boolvol::io
