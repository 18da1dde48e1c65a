#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boolvol/analysis.hpp"
#include "boolvol/dynamics.hpp"
#include "boolvol/error.hpp"
#include "boolvol/experiments.hpp"
#include "boolvol/function_spec.hpp"
#include "boolvol/instance.hpp"
#include "boolvol/json_io.hpp"
#include "boolvol/oracle.hpp"
#include "boolvol/perctree.hpp"

namespace bv = boolvol;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

constexpr const char* kSpecHelp = R"(Function specs:
  dict:<m>  parity:<m>  dap:<m>  type2:<m>  maj:<n>  itermaj3:<depth>
  andor:<depth>  bigtame:<n>  perc:<profile>:<level>  table:<file>
<profile> is a file with one child count per line or an inline list such
as 2,2,2. A table file holds 2^m characters '0'/'1' (whitespace ignored);
character i is f at the configuration whose bit 1 is the most significant
bit of i.)";

constexpr const char* kCsvHelp = R"(CSV columns (--csv):
  simulate               C,count,fraction
  influence              bit,I,pi
  joint                  a,b,count
  noise                  eps,replicas,p_first,p_second,mean_product,disagree,covariance,se_covariance,exact_covariance
  survival               x,G,se
  pivotal                k,numerator,log2_denominator,value
  recursion (series)     k,value,log_value,mode
  recursion maj3-cutoff  alpha,n,log_diag,log_a_n,log_epsilon
  recursion maj3-rho     n,alpha,rho,log_a_n,log_b_n,log_t,log_epsilon,t_dominates_eps
  recursion maj3-grid    depth,a_n,delta,points,expected_Z,mean_Z,se_Z,p_positive,se_p_positive
  recursion andor-gfloor x,rhs,floor,margin
  perc build             k,children,w,ratio
  perc weights           k,log_w,w
  perc run               level,edges,p_one,p_ever_one,p_always_one,p_always_zero,mean_C,se_mean_C
  classify               n,spec,stat,value,stderr
Exit codes: 0 ok, 1 runtime failure, 2 bad spec or usage, 3 resource cap.)";

struct Globals {
  std::uint64_t seed = 1;
  std::uint64_t replicas = 10000;
  bool csv = false;
  bool json_flag = false;
  std::string out;
  unsigned precision = 50;
  unsigned threads = 0;
};

struct Output {
  json doc;
  std::string csv;
};

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

json envelope(const std::string& command, const Globals& g) {
  return {{"schema_version", bv::io::kSchemaVersion},
          {"command", command},
          {"seed", g.seed},
          {"replicas", g.replicas}};
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& header) { os_ << header << '\n'; }

  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "true" : "false"; }
  template <typename T>
  static std::string cell(T v) requires std::is_integral_v<T> {
    return std::to_string(v);
  }
  std::ostringstream os_;
};

CsvWriter series_csv(const bv::RecursionSeries& s) {
  CsvWriter w("k,value,log_value,mode");
  for (std::size_t k = 0; k < s.size(); ++k) {
    w.row(k, s.value(k), s.log_value(k),
          s.entries[k].mode == bv::SeriesMode::Linear ? "linear" : "log");
  }
  return w;
}

void emit(const Output& out, const Globals& g) {
  std::string text = g.csv ? out.csv : out.doc.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw bv::Error(bv::ErrorCode::Io, "cannot write " + g.out);
  f << text;
}

// ---------------------------------------------------------------------------

Output run_simulate(const Globals& g, const std::string& spec_text, double p, double T) {
  auto instance = bv::make_instance(bv::parse_spec(spec_text));
  bv::DynamicsParams params{p, T, g.seed, g.replicas, g.threads};
  auto e = bv::estimate_C_distribution(instance, params);
  Output out;
  out.doc = envelope("simulate", g);
  out.doc["spec"] = bv::to_string(instance.spec());
  out.doc["p"] = p;
  out.doc["T"] = T;
  out.doc["result"] = bv::io::to_json(e);
  if (instance.arity() <= bv::kMaxNoiseArity) {
    double expected = T * bv::exact_total_influence(instance, p);
    double se = e.se_mean_C();
    out.doc["oracle"] = {{"expected_C", expected},
                         {"z", se > 0 ? (e.mean_C - expected) / se : 0.0}};
  }
  CsvWriter w("C,count,fraction");
  for (const auto& [c, n] : e.histogram) {
    w.row(c, n, static_cast<double>(n) / static_cast<double>(e.replicas));
  }
  out.csv = w.str();
  return out;
}

Output run_influence(const Globals& g, const std::string& spec_text, double p) {
  auto instance = bv::make_instance(bv::parse_spec(spec_text));
  auto r = bv::exact_influence_report(instance, p);
  Output out;
  out.doc = envelope("influence", g);
  out.doc["spec"] = bv::to_string(instance.spec());
  out.doc["result"] = bv::io::to_json(r);
  CsvWriter w("bit,I,pi");
  for (std::size_t i = 0; i < r.influence.size(); ++i) w.row(i + 1, r.influence[i], r.pivotality[i]);
  out.csv = w.str();
  return out;
}

Output run_joint(const Globals& g, const std::string& spec_text, double p, double t) {
  auto instance = bv::make_instance(bv::parse_spec(spec_text));
  auto s = bv::estimate_joint(instance, p, t, g.replicas, g.seed, g.threads);
  Output out;
  out.doc = envelope("joint", g);
  out.doc["spec"] = bv::to_string(instance.spec());
  out.doc["p"] = p;
  out.doc["t"] = t;
  out.doc["eps_equivalent"] = -std::expm1(-t);
  out.doc["result"] = bv::io::to_json(s);
  if (instance.arity() <= bv::kMaxNoiseArity) {
    out.doc["exact"] = bv::io::to_json(bv::exact_noise_covariance(instance, p, -std::expm1(-t)));
  }
  CsvWriter w("a,b,count");
  for (int i = 0; i < 4; ++i) w.row(i / 2, i % 2, s.counts[i]);
  out.csv = w.str();
  return out;
}

Output run_noise(const Globals& g, const std::string& spec_text, double p,
                 const std::vector<double>& epsilons) {
  auto instance = bv::make_instance(bv::parse_spec(spec_text));
  const bool exact = instance.arity() <= bv::kMaxNoiseArity;
  Output out;
  out.doc = envelope("noise", g);
  out.doc["spec"] = bv::to_string(instance.spec());
  out.doc["p"] = p;
  json points = json::array();
  CsvWriter w(
      "eps,replicas,p_first,p_second,mean_product,disagree,covariance,se_covariance,"
      "exact_covariance");
  for (double eps : epsilons) {
    auto s = bv::sample_noise_pair(instance, p, eps, g.replicas, g.seed, g.threads);
    json pt = {{"eps", eps}, {"sampled", bv::io::to_json(s)}};
    double exact_cov = std::numeric_limits<double>::quiet_NaN();
    if (exact) {
      auto c = bv::exact_noise_covariance(instance, p, eps);
      pt["exact"] = bv::io::to_json(c);
      exact_cov = c.covariance;
    }
    points.push_back(pt);
    w.row(eps, s.replicas, s.p_first, s.p_second, s.mean_product, s.disagree, s.covariance,
          s.se_covariance, exact_cov);
  }
  out.doc["points"] = points;
  out.csv = w.str();
  return out;
}

Output run_survival(const Globals& g, const std::string& spec_text, double p,
                    const std::vector<double>& xs) {
  auto instance = bv::make_instance(bv::parse_spec(spec_text));
  auto curve = bv::survival_curve(instance, p, xs, g.replicas, g.seed, g.threads);
  Output out;
  out.doc = envelope("survival", g);
  out.doc["spec"] = bv::to_string(instance.spec());
  out.doc["p"] = p;
  json pts = json::array();
  CsvWriter w("x,G,se");
  for (const auto& pt : curve) {
    pts.push_back({{"x", pt.x}, {"G", pt.G}, {"se", pt.se}});
    w.row(pt.x, pt.G, pt.se);
  }
  out.doc["points"] = pts;
  out.csv = w.str();
  return out;
}

Output run_pivotal(const Globals& g, int n) {
  Output out;
  out.doc = envelope("pivotal", g);
  out.doc["depth"] = n;
  json rows = json::array();
  CsvWriter w("k,numerator,log2_denominator,value");
  for (int k = 0; k <= n; ++k) {
    auto d = bv::exact_andor_pivotal(n, k);
    json row = bv::io::to_json(d);
    row["k"] = k;
    rows.push_back(row);
    w.row(k, d.num, d.log2_den, d.value());
  }
  out.doc["pivotal"] = rows;
  auto rate = bv::andor_switch_rate(n);
  out.doc["switch_rate"] = {{"expected_S", rate.expected_S},
                            {"per_update", rate.per_update},
                            {"vertices", rate.vertices}};
  if (n <= 3) out.doc["switch_mass_enumerated"] = bv::io::to_json(bv::andor_switch_mass_enumerated(n));
  out.csv = w.str();
  return out;
}

// ---------------------------------------------------------------------------

Output series_output(const Globals& g, const std::string& name, const bv::RecursionSeries& s) {
  Output out;
  out.doc = envelope("recursion " + name, g);
  out.doc["result"] = bv::io::to_json(s);
  out.csv = series_csv(s).str();
  return out;
}

struct Maj3Flags {
  int n = 10;
  double alpha = 1.0;
  std::optional<double> eps;
  double t = 0.0;
  std::optional<double> t_over_a;
  bool t_inf = false;

  bv::Maj3Params params() const {
    bv::Maj3Params p;
    p.n = n;
    p.alpha = alpha;
    p.epsilon = eps;
    p.t = t_inf ? std::numeric_limits<double>::infinity() : t;
    p.t_over_a_n = t_over_a;
    return p;
  }
};

Output run_maj3_b(const Globals& g, const Maj3Flags& f) {
  auto s = bv::maj3_b_seq(f.params(), g.precision);
  Output out;
  out.doc = envelope("recursion maj3-b", g);
  out.doc["result"] = {{"a", bv::io::to_json(s.a)},
                       {"b", bv::io::to_json(s.b)},
                       {"log_epsilon", s.log_epsilon},
                       {"log_t", s.log_t},
                       {"t_dominates_eps", s.t_dominates_eps},
                       {"digits", s.digits}};
  out.csv = series_csv(s.b).str();
  return out;
}

Output run_maj3_cutoff(const Globals& g, double alpha, const std::vector<int>& ns) {
  Output out;
  out.doc = envelope("recursion maj3-cutoff", g);
  json rows = json::array();
  CsvWriter w("alpha,n,log_diag,log_a_n,log_epsilon");
  for (int n : ns) {
    auto c = bv::maj3_cutoff_diagnostic(alpha, n, g.precision);
    rows.push_back(bv::io::to_json(c));
    w.row(c.alpha, c.n, c.log_diag, c.log_a_n, c.log_epsilon);
  }
  out.doc["alpha_0"] = bv::maj3_alpha0();
  out.doc["result"] = rows;
  out.csv = w.str();
  return out;
}

Output run_maj3_rho(const Globals& g, const Maj3Flags& f) {
  auto v = bv::maj3_volatility_ratio(f.params(), g.precision);
  Output out;
  out.doc = envelope("recursion maj3-rho", g);
  out.doc["n"] = f.n;
  out.doc["alpha"] = f.alpha;
  out.doc["result"] = bv::io::to_json(v);
  CsvWriter w("n,alpha,rho,log_a_n,log_b_n,log_t,log_epsilon,t_dominates_eps");
  w.row(f.n, f.alpha, v.rho, v.log_a_n, v.log_b_n, v.log_t, v.log_epsilon, v.t_dominates_eps);
  out.csv = w.str();
  return out;
}

Output run_maj3_grid(const Globals& g, int depth, double alpha, double delta) {
  bv::Maj3Params mp;
  mp.n = depth;
  mp.alpha = alpha;
  const double p = 0.5 - std::exp(bv::maj3_log_epsilon(mp));
  if (!(p >= 0.0 && p <= 1.0)) {
    throw bv::Error(bv::ErrorCode::InvalidArgument, "n^alpha (2/3)^n exceeds 1/2");
  }
  const double a_n = bv::maj3_a_seq(p, depth).value(static_cast<std::size_t>(depth));
  auto instance = bv::make_instance(bv::family::IterMaj3{depth});
  auto r = bv::maj3_grid_count(instance, p, a_n, delta, g.replicas, g.seed, g.threads);
  Output out;
  out.doc = envelope("recursion maj3-grid", g);
  out.doc["depth"] = depth;
  out.doc["alpha"] = alpha;
  out.doc["p"] = p;
  out.doc["result"] = bv::io::to_json(r);
  CsvWriter w("depth,a_n,delta,points,expected_Z,mean_Z,se_Z,p_positive,se_p_positive");
  w.row(depth, r.a_n, r.delta, r.points, r.expected_Z, r.mean_Z, r.se_Z, r.p_positive,
        r.se_p_positive);
  out.csv = w.str();
  return out;
}

Output run_andor_x(const Globals& g, double t, int n) {
  auto x = bv::andor_x_seq(t, n);
  Output out;
  out.doc = envelope("recursion andor-x", g);
  out.doc["t"] = t;
  out.doc["result"] = bv::io::to_json(x);
  out.csv = series_csv(x.x).str();
  return out;
}

Output run_andor_bbound(const Globals& g, int n, double t) {
  auto s = bv::andor_b_bound_seq(n, t);
  Output out;
  out.doc = envelope("recursion andor-bbound", g);
  out.doc["t"] = t;
  out.doc["cap"] = bv::andor_b_bound_cap(n, t);
  out.doc["result"] = bv::io::to_json(s);
  out.csv = series_csv(s).str();
  return out;
}

Output run_andor_gfloor(const Globals& g, unsigned grid, unsigned cells) {
  auto r = bv::andor_survival_floor_check(grid, cells);
  Output out;
  out.doc = envelope("recursion andor-gfloor", g);
  out.doc["result"] = bv::io::to_json(r);
  CsvWriter w("x,rhs,floor,margin");
  for (std::size_t i = 0; i < r.xs.size(); ++i) {
    w.row(r.xs[i], r.rhs[i], r.floor[i], r.rhs[i] - r.floor[i]);
  }
  out.csv = w.str();
  return out;
}

// ---------------------------------------------------------------------------

bv::LevelProfile load_profile(const std::string& text) {
  if (std::ifstream(text).good()) return bv::read_profile(text);
  return bv::parse_inline_profile(text);
}

Output run_perc_build(const Globals& g, const std::string& target_text, int levels,
                      const std::string& save) {
  auto target = bv::parse_target(target_text);
  auto built = bv::build_profile(target, levels);
  if (!save.empty()) bv::write_profile(save, built.profile);
  Output out;
  out.doc = envelope("perc build", g);
  out.doc["target"] = bv::to_string(target);
  out.doc["result"] = bv::io::to_json(built);
  CsvWriter w("k,children,w,ratio");
  for (const auto& l : built.levels) w.row(l.k, l.children, std::exp(l.log_w), l.ratio);
  out.csv = w.str();
  return out;
}

Output run_perc_weights(const Globals& g, const std::string& profile_text) {
  auto profile = load_profile(profile_text);
  bv::validate(profile);
  auto ws = bv::weight_sequence(profile);
  Output out;
  out.doc = envelope("perc weights", g);
  out.doc["children"] = profile.children;
  out.doc["result"] = bv::io::to_json(ws);
  CsvWriter w("k,log_w,w");
  for (std::size_t k = 0; k < ws.log_w.size(); ++k) w.row(k, ws.log_w[k], std::exp(ws.log_w[k]));
  out.csv = w.str();
  return out;
}

Output run_perc_run(const Globals& g, const std::string& profile_text, std::vector<int> levels,
                    double p, double T, std::uint64_t max_edges) {
  auto profile = load_profile(profile_text);
  bv::validate(profile);
  if (levels.empty()) {
    for (std::size_t k = 1; k <= profile.levels(); ++k) levels.push_back(static_cast<int>(k));
  }
  bv::RegimeOptions opt;
  opt.p = p;
  opt.T = T;
  opt.replicas = g.replicas;
  opt.seed = g.seed;
  opt.threads = g.threads;
  opt.max_edges = max_edges;
  auto r = bv::regime_experiment(profile, levels, opt);
  Output out;
  out.doc = envelope("perc run", g);
  out.doc["result"] = bv::io::to_json(r);
  CsvWriter w("level,edges,p_one,p_ever_one,p_always_one,p_always_zero,mean_C,se_mean_C");
  for (const auto& l : r.levels) {
    const auto& s = l.summary;
    w.row(l.level, l.edges, s.p_one, s.p_ever_one, s.p_always_one, s.p_always_zero, s.mean_C,
          s.se_mean_C());
  }
  out.csv = w.str();
  return out;
}

// ---------------------------------------------------------------------------

Output run_classify(const Globals& g, bv::SequencePlan plan, const bv::Thresholds& th) {
  plan.dynamics.threads = g.threads;
  auto r = bv::classify(plan, th);
  Output out;
  out.doc = envelope("classify", g);
  out.doc["seed"] = plan.dynamics.seed;
  out.doc["replicas"] = plan.dynamics.replicas;
  out.doc["result"] = bv::io::to_json(r);
  CsvWriter w("n,spec,stat,value,stderr");
  for (const auto& t : r.trends) {
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      w.row(i, r.specs[i], t.stat, t.values[i], t.se[i]);
    }
  }
  out.csv = w.str();
  return out;
}

int exit_code_for(bv::ErrorCode code) {
  switch (code) {
    case bv::ErrorCode::InvalidSpec:
    case bv::ErrorCode::InvalidArgument:
    case bv::ErrorCode::ArityMismatch:
    case bv::ErrorCode::IndexOutOfRange:
    case bv::ErrorCode::NotPowerOfTwo:
    case bv::ErrorCode::Io:
      return kExitUsage;
    case bv::ErrorCode::ArityTooLarge:
    case bv::ErrorCode::DepthTooLarge:
    case bv::ErrorCode::InstanceTooLarge:
      return kExitCap;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean functions under bit resampling dynamics: simulation, exact oracles and "
               "recursions."};
  app.footer(std::string(kSpecHelp) + "\n\n" + kCsvHelp);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Base seed (fixed default, never time based)")
      ->default_val(1);
  app.add_option("--replicas", g.replicas, "Monte Carlo replicas")
      ->default_val(10000)
      ->check(CLI::PositiveNumber);
  auto* json_opt = app.add_flag("--json", g.json_flag, "JSON output (default)");
  app.add_flag("--csv", g.csv, "CSV output; columns listed below")->excludes(json_opt);
  app.add_option("--out", g.out, "Write output to FILE instead of stdout");
  app.add_option("--precision", g.precision, "Decimal digits for high precision recursions")
      ->default_val(50);
  app.add_option("--threads", g.threads, "Worker threads, 0 = all cores; never changes results")
      ->default_val(0);

  std::optional<Output> result;

  // simulate
  std::string spec_text;
  double p = 0.5, T = 1.0, t = 0.0;
  auto* sim = app.add_subcommand("simulate", "Switch-count distribution of f over [0, T]");
  sim->add_option("spec", spec_text, "Function spec")->required();
  sim->add_option("--p", p, "Resampling bias")->default_val(0.5);
  sim->add_option("--T", T, "Horizon")->default_val(1.0);
  sim->callback([&] { result = run_simulate(g, spec_text, p, T); });

  auto* inf = app.add_subcommand("influence", "Exact per-bit influence and pivotality");
  inf->add_option("spec", spec_text, "Function spec")->required();
  inf->add_option("--p", p, "Bit bias")->default_val(0.5);
  inf->callback([&] { result = run_influence(g, spec_text, p); });

  auto* joint = app.add_subcommand("joint", "Joint law of (f(X(0)), f(X(t)))");
  joint->add_option("spec", spec_text, "Function spec")->required();
  joint->add_option("--p", p, "Resampling bias")->default_val(0.5);
  joint->add_option("--t", t, "Time lag")->default_val(1.0);
  joint->callback([&] { result = run_joint(g, spec_text, p, t); });

  std::vector<double> values;
  auto* noise = app.add_subcommand("noise", "Sampled and exact statistics of (f(w), f(w^eps))");
  noise->add_option("spec", spec_text, "Function spec")->required();
  noise->add_option("--p", p, "Bit bias")->default_val(0.5);
  noise->add_option("--eps", values, "Noise levels (comma separated)")
      ->delimiter(',')
      ->required();
  noise->callback([&] { result = run_noise(g, spec_text, p, values); });

  auto* surv = app.add_subcommand("survival", "P(f = 1 throughout [0, x])");
  surv->add_option("spec", spec_text, "Function spec")->required();
  surv->add_option("--p", p, "Resampling bias")->default_val(0.5);
  surv->add_option("--x", values, "Horizons (comma separated)")->delimiter(',')->required();
  surv->callback([&] { result = run_survival(g, spec_text, p, values); });

  int n = 2;
  auto* piv = app.add_subcommand("pivotal", "Exact AND/OR pivotal probabilities by level");
  piv->add_option("--n", n, "Tree depth (at most 4)")->required();
  piv->callback([&] { result = run_pivotal(g, n); });

  // recursion
  auto* rec = app.add_subcommand("recursion", "Analytical recursions");
  rec->require_subcommand(1);
  rec->fallthrough();
  double p0 = 0.5, eps = 0.0, alpha = 1.0, delta = 0.5;
  std::vector<int> ns;
  Maj3Flags mf;

  auto* ma = rec->add_subcommand("maj3-a", "P(root = 1) by depth, leaves Bernoulli(p0)");
  ma->add_option("--p0", p0, "Leaf bias")->default_val(0.5);
  ma->add_option("--n", n, "Depth")->required();
  ma->callback([&] { result = series_output(g, "maj3-a", bv::maj3_a_seq(p0, n)); });

  auto* mpi = rec->add_subcommand("maj3-pi", "Bias gap 1 - 2 a_k for p0 = 1/2 - eps");
  mpi->add_option("--eps", eps, "Leaf bias offset")->required();
  mpi->add_option("--n", n, "Depth")->required();
  mpi->callback([&] { result = series_output(g, "maj3-pi", bv::maj3_pi_seq(eps, n)); });

  auto add_maj3_flags = [&](CLI::App* sub) {
    sub->add_option("--n", mf.n, "Depth")->required();
    sub->add_option("--alpha", mf.alpha, "eps = n^alpha (2/3)^n")->default_val(1.0);
    sub->add_option("--eps", mf.eps, "Explicit eps (overrides alpha)");
    sub->add_option("--t", mf.t, "Time lag")->default_val(0.0);
    sub->add_flag("--t-inf", mf.t_inf, "Infinite time lag");
    sub->add_option("--t-over-a", mf.t_over_a, "Time lag as a multiple of a_n");
  };
  auto* mb = rec->add_subcommand("maj3-b", "Joint probabilities b_k at lag t");
  add_maj3_flags(mb);
  mb->callback([&] { result = run_maj3_b(g, mf); });

  auto* mr = rec->add_subcommand("maj3-rho", "Volatility ratio b_n / a_n^2 - 1");
  add_maj3_flags(mr);
  mr->callback([&] { result = run_maj3_rho(g, mf); });

  auto* mc = rec->add_subcommand("maj3-cutoff", "First-moment diagnostic n log 3 + log a_n");
  mc->add_option("--alpha", alpha, "Exponent")->default_val(1.0);
  mc->add_option("--n", ns, "Depths (comma separated, each >= 10)")->delimiter(',')->required();
  mc->callback([&] { result = run_maj3_cutoff(g, alpha, ns); });

  auto* mg = rec->add_subcommand("maj3-grid", "Monte Carlo count of grid times with f = 1");
  mg->add_option("--n", n, "Depth")->required();
  mg->add_option("--alpha", alpha, "Exponent")->default_val(1.0);
  mg->add_option("--delta", delta, "Grid spacing in units of a_n")->default_val(0.5);
  mg->callback([&] { result = run_maj3_grid(g, n, alpha, delta); });

  auto* ax = rec->add_subcommand("andor-x", "AND/OR joint probability series x_k(t)");
  ax->add_option("--t", t, "Time lag")->default_val(1.0);
  ax->add_option("--n", n, "Depth")->required();
  ax->callback([&] { result = run_andor_x(g, t, n); });

  auto* ab = rec->add_subcommand("andor-bbound", "AND/OR upper bounds bhat_k(t)");
  ab->add_option("--t", t, "Time lag")->default_val(1.0);
  ab->add_option("--n", n, "Depth")->required();
  ab->callback([&] { result = run_andor_bbound(g, n, t); });

  unsigned grid = 1000, cells = 2000;
  auto* ag = rec->add_subcommand("andor-gfloor", "Numeric check of the survival floor");
  ag->add_option("--grid", grid, "Grid points on [0, 1]")->default_val(1000);
  ag->add_option("--cells", cells, "Convolution cells")->default_val(2000);
  ag->callback([&] { result = run_andor_gfloor(g, grid, cells); });

  // perc
  auto* perc = app.add_subcommand("perc", "Spherically symmetric tree percolation");
  perc->require_subcommand(1);
  perc->fallthrough();
  std::string target_text, save, profile_text;
  int levels = 10;
  std::vector<int> level_list;
  std::uint64_t max_edges = 10'000'000;

  auto* pb = perc->add_subcommand("build", "Greedy profile for a weight target");
  pb->add_option("--target", target_text,
                 "logn | logn1p:<delta> | nlogn:<alpha> | nalpha:<alpha> | const | custom:<file>")
      ->required();
  pb->add_option("--levels", levels, "Number of levels")->default_val(10);
  pb->add_option("--save", save, "Also write the profile file here");
  pb->callback([&] { result = run_perc_build(g, target_text, levels, save); });

  auto* pw = perc->add_subcommand("weights", "w_k = |level k| 2^-k for a profile");
  pw->add_option("--profile", profile_text, "Profile file or inline list")->required();
  pw->callback([&] { result = run_perc_weights(g, profile_text); });

  auto* pr = perc->add_subcommand("run", "Root-to-level connectivity under edge dynamics");
  pr->add_option("--profile", profile_text, "Profile file or inline list")->required();
  pr->add_option("--levels", level_list, "Levels (comma separated, default all)")
      ->delimiter(',');
  pr->add_option("--p", p, "Edge bias")->default_val(0.5);
  pr->add_option("--T", T, "Horizon")->default_val(1.0);
  pr->add_option("--max-edges", max_edges, "Edge cap for the deepest level")
      ->default_val(10'000'000);
  pr->callback([&] { result = run_perc_run(g, profile_text, level_list, p, T, max_edges); });

  // classify
  std::string plan_path, plan_name;
  bv::Thresholds th;
  auto* cls = app.add_subcommand(
      "classify",
      "Heuristic taxonomy label for a sequence. PLAN is a JSON list of [spec, p] pairs or an "
      "object {entries, T, replicas, seed}; global --seed/--replicas override the file.");
  auto* plan_opt = cls->add_option("plan", plan_path, "Plan file");
  auto* named_opt = cls->add_option("--named", plan_name,
                                    "Built-in plan: parity, dap, type2, andor, majority, bigtame");
  plan_opt->excludes(named_opt);
  cls->add_option("--vanish", th.vanish, "Vanishing threshold")->default_val(th.vanish);
  cls->add_option("--bounded", th.bounded, "Bounded-away threshold")->default_val(th.bounded);
  cls->add_option("--middle-k", th.middle_k, "Middle-mass k values")->delimiter(',');
  cls->add_option("--tail-m", th.tail_M, "Tail-mass M values")->delimiter(',');
  cls->add_option("--second-moment-cap", th.second_moment_cap, "E[C^2]/E[C]^2 cap")
      ->default_val(th.second_moment_cap);
  cls->callback([&] {
    if (plan_path.empty() && plan_name.empty()) {
      throw bv::Error(bv::ErrorCode::InvalidArgument, "classify needs a plan file or --named");
    }
    auto plan = plan_path.empty() ? bv::named_plan(plan_name) : bv::io::read_plan(plan_path);
    if (app.get_option("--seed")->count() > 0 || plan_path.empty()) plan.dynamics.seed = g.seed;
    if (app.get_option("--replicas")->count() > 0 || plan_path.empty()) {
      plan.dynamics.replicas = g.replicas;
    }
    result = run_classify(g, std::move(plan), th);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const bv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (!result) return kExitUsage;
  try {
    emit(*result, g);
  } catch (const bv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return 0;
}
