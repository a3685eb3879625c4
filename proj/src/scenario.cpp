#include "psys/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "psys/theorem1_diagnostics.hpp"

namespace psys {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ConfigError, key + ": " + why);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, "not a number: '" + v + "'");
  }
  if (used != v.size()) bad(key, "not a number: '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    bad(key, "not an integer: '" + v + "'");
  }
  if (used != v.size()) bad(key, "not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(key, "expected true or false: '" + v + "'");
}

struct Field {
  std::string key;
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};

Field real(const std::string& key, double& ref) {
  return {key, [&ref] { return fmt_double(ref); }, [&ref, key](const std::string& v) { ref = to_double(key, v); }};
}

Field integer(const std::string& key, int& ref) {
  return {key, [&ref] { return std::to_string(ref); }, [&ref, key](const std::string& v) {
            long long x = to_int(key, v);
            if (x < -2147483647LL || x > 2147483647LL) bad(key, "out of range");
            ref = static_cast<int>(x);
          }};
}

std::vector<Field> fields(ScenarioConfig& c) {
  std::vector<Field> f;
  f.push_back({"scenario", [&c] { return c.scenario; }, [&c](const std::string& v) { c.scenario = v; }});
  f.push_back({"output_dir", [&c] { return c.output_dir; }, [&c](const std::string& v) { c.output_dir = v; }});
  f.push_back({"seed", [&c] { return std::to_string(c.seed); }, [&c](const std::string& v) {
                 long long x = to_int("seed", v);
                 if (x < 0) bad("seed", "must be nonnegative");
                 c.seed = static_cast<std::uint64_t>(x);
               }});
  f.push_back(real("gas.gamma", c.gamma));
  f.push_back(real("gas.A", c.A));

  EngineConfig& e = c.engine;
  f.push_back(real("engine.delta_rarefaction", e.delta_rarefaction));
  f.push_back(real("engine.delta0_shock_threshold", e.delta0_shock_threshold));
  f.push_back(real("engine.lambda_hat", e.lambda_hat));
  f.push_back(real("engine.tie_tolerance", e.tie_tolerance));
  f.push_back({"engine.speed_mode", [&e] { return std::string(e.speed_mode == SpeedMode::Exact ? "exact" : "prescribed"); },
               [&e](const std::string& v) {
                 if (v == "exact") e.speed_mode = SpeedMode::Exact;
                 else if (v == "prescribed") e.speed_mode = SpeedMode::Prescribed;
                 else bad("engine.speed_mode", "expected exact or prescribed");
               }});
  f.push_back(real("engine.domain.a", e.domain.a));
  f.push_back(real("engine.domain.b", e.domain.b));
  f.push_back(real("engine.eps0", e.eps0));
  f.push_back({"engine.event_cap", [&e] { return std::to_string(e.event_cap); }, [&e](const std::string& v) {
                 long long x = to_int("engine.event_cap", v);
                 if (x <= 0) bad("engine.event_cap", "must be positive");
                 e.event_cap = static_cast<std::size_t>(x);
               }});
  f.push_back(real("engine.c1_tolerance", e.c1_tolerance));
  f.push_back({"engine.adopt_planned_states", [&e] { return std::string(e.adopt_planned_states ? "true" : "false"); },
               [&e](const std::string& v) { e.adopt_planned_states = to_bool("engine.adopt_planned_states", v); }});

  PatternConfig& p = c.pattern;
  f.push_back(real("pattern.epsilon", p.epsilon));
  f.push_back(real("pattern.split", p.split));
  f.push_back(real("pattern.alpha", p.alpha));
  f.push_back(integer("pattern.K", p.K));
  f.push_back(integer("pattern.periods", p.periods));
  f.push_back(real("pattern.period", p.period));
  f.push_back(real("pattern.lambda", p.lambda));

  BlowupConfig& b = c.blowup;
  f.push_back(real("blowup.T", b.T));
  f.push_back(real("blowup.lambda", b.lambda));
  f.push_back(real("blowup.h_strip", b.h_strip));
  f.push_back(real("blowup.epsilon_rate", b.epsilon_rate));
  f.push_back(real("blowup.period", b.period));
  f.push_back(real("blowup.density_floor", b.density_floor));
  f.push_back(real("blowup.c2_required", b.c2_required));

  RiemannConfig& r = c.riemann;
  f.push_back(real("riemann.left_u", r.left_u));
  f.push_back(real("riemann.left_h", r.left_h));
  f.push_back(real("riemann.right_u", r.right_u));
  f.push_back(real("riemann.right_h", r.right_h));

  SuiteConfig& s = c.suite;
  f.push_back(integer("suite.runs", s.runs));
  f.push_back(real("suite.slack", s.slack));
  f.push_back(integer("suite.breakpoints", s.data.breakpoints));
  f.push_back(real("suite.spacing", s.data.spacing));
  f.push_back(real("suite.max_jump", s.data.max_jump));
  f.push_back(real("suite.h_lo", s.data.h_lo));
  f.push_back(real("suite.h_hi", s.data.h_hi));
  f.push_back(real("suite.domain.a", s.data.domain.a));
  f.push_back(real("suite.domain.b", s.data.domain.b));
  f.push_back(real("suite.V_max", s.data.V_max));
  f.push_back(real("suite.shock_max", s.data.shock_max));
  f.push_back(real("suite.t_end", s.data.t_end));

  CensusConfig& cc = c.census;
  f.push_back(real("census.delta0", cc.delta0));
  f.push_back({"census.radii",
               [&cc] {
                 std::string out;
                 for (std::size_t i = 0; i < cc.radii.size(); ++i) out += (i ? "," : "") + fmt_double(cc.radii[i]);
                 return out;
               },
               [&cc](const std::string& v) {
                 std::vector<double> r;
                 std::stringstream ss(v);
                 std::string item;
                 while (std::getline(ss, item, ',')) r.push_back(to_double("census.radii", trim(item)));
                 if (r.empty()) bad("census.radii", "empty list");
                 cc.radii = r;
               }});
  return f;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"riemann", "periodic", "perturbed", "blowup", "small_data_suite", "census"};
  return names;
}

void ScenarioConfig::set(const std::string& key, const std::string& value) {
  for (Field& f : fields(*this))
    if (f.key == key) {
      f.set(trim(value));
      return;
    }
  bad(key, "unknown key");
}

void ScenarioConfig::validate() const {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end()) bad("scenario", "unknown scenario '" + scenario + "'");
  try {
    GasParams g(gamma, A);
  } catch (const Error& e) {
    bad("gas", e.what());
  }
  try {
    engine.validate();
  } catch (const Error& e) {
    bad("engine", e.what());
  }
  if (!(pattern.split > 0.0 && pattern.split < 1.0)) bad("pattern.split", "must lie in (0, 1)");
  if (!(pattern.alpha >= 0.0)) bad("pattern.alpha", "must be nonnegative");
  if (pattern.K < 1) bad("pattern.K", "must be at least 1");
  if (pattern.periods < 1) bad("pattern.periods", "must be at least 1");
  if (!(pattern.period > 0.0)) bad("pattern.period", "must be positive");
  if (pattern.epsilon < 0.0 || pattern.epsilon >= 0.5) bad("pattern.epsilon", "must lie in [0, 1/2)");
  if (pattern.lambda < 0.0) bad("pattern.lambda", "must be nonnegative");
  BlowupConfig b = blowup;
  b.cycles = pattern.K;
  b.alpha = pattern.alpha;
  try {
    b.validate();
  } catch (const Error& e) {
    bad("blowup", e.what());
  }
  if (!(riemann.left_h > 0.0)) bad("riemann.left_h", "must be positive");
  if (!(riemann.right_h > 0.0)) bad("riemann.right_h", "must be positive");
  if (suite.runs < 1) bad("suite.runs", "must be at least 1");
  if (suite.data.breakpoints < 1) bad("suite.breakpoints", "must be at least 1");
  if (!(suite.data.max_jump > 0.0)) bad("suite.max_jump", "must be positive");
  if (!(suite.data.t_end > 0.0)) bad("suite.t_end", "must be positive");
  if (!(suite.data.domain.a > 0.0) || !(suite.data.domain.b > suite.data.domain.a)) bad("suite.domain", "needs 0 < a < b");
  if (!(census.delta0 > 0.0)) bad("census.delta0", "must be positive");
  for (double r : census.radii)
    if (!(r > 0.0)) bad("census.radii", "radii must be positive");
}

std::string ScenarioConfig::manifest() const {
  ScenarioConfig copy = *this;
  std::vector<std::string> lines;
  for (Field& f : fields(copy)) lines.push_back(f.key + "=" + f.get());
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno), "expected key=value");
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) bad("config", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

bool ScenarioResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string ScenarioResult::summary(const std::string& scenario) const {
  std::string out = "scenario: " + scenario + "\n";
  for (const CheckResult& c : checks)
    out += std::string(c.pass ? "PASS " : "FAIL ") + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "\n";
  out += std::string("overall: ") + (pass() ? "PASS" : "FAIL") + "\n";
  return out;
}

namespace {

class Writer {
 public:
  Writer(std::filesystem::path dir, ScenarioResult& res) : dir_(std::move(dir)), res_(res) {}

  void text(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigError, "output_dir: cannot write " + (dir_ / name).string());
    out << content;
    res_.files.push_back(name);
  }

 private:
  std::filesystem::path dir_;
  ScenarioResult& res_;
};

class Table {
 public:
  explicit Table(const std::string& header) { out_ << header << "\n"; }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  static std::string cell(double x) { return fmt_double(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "true" : "false"; }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  std::ostringstream out_;
};

const char* event_kind_name(EventKind k) { return k == EventKind::Collision ? "collision" : "break"; }

std::string join_tags(const std::vector<std::string>& tags) {
  std::string s;
  for (std::size_t i = 0; i < tags.size(); ++i) s += (i ? " " : "") + tags[i];
  return s;
}

std::string join_ids(const std::vector<long>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + std::to_string(ids[i]);
  return s;
}

void write_history(Writer& w, const History& h) {
  Table fronts("id,family,kind,strength,speed,anchor_t,anchor_x,birth,death,tag");
  for (const FrontTrace& f : h.fronts)
    fronts.row(f.id, f.wave.family, kind_name(f.wave.kind), f.wave.strength, f.speed, f.anchor_t, f.anchor_x, f.birth,
               f.death, f.tag);
  w.text("fronts.csv", fronts.str());
  Table events("index,time,position,kind,label,in_ids,in_tags,out_ids,interaction_amount,c1_residual");
  for (const EventRecord& e : h.events)
    events.row(e.index, e.time, e.position, event_kind_name(e.kind), e.label, join_ids(e.in_ids), join_tags(e.in_tags),
               join_ids(e.out_ids), e.interaction_amount, e.c1_residual);
  w.text("events.csv", events.str());
  Table diag("event_index,time,fronts,V,Q,Q_pairs,functional,bv_hu,max_shock,ledger_total,discarded,min_h,"
             "dab_violations,speed_violations,lemma3_ok");
  for (const DiagnosticRow& r : h.diagnostics)
    diag.row(r.event_index, r.time, r.fronts, r.V, r.Q, r.Q_pairs, r.functional, r.bv_hu, r.max_shock, r.ledger_total,
             r.discarded, r.min_h, r.dab_violations, r.speed_violations, r.lemma3_ok);
  w.text("diagnostics.csv", diag.str());
}

void check(ScenarioResult& res, const std::string& name, bool pass, const std::string& detail = "") {
  res.checks.push_back({name, pass, detail});
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

PatternStates base_pattern(const ScenarioConfig& cfg, const GasParams& g) {
  double eps = cfg.pattern.epsilon > 0.0 ? cfg.pattern.epsilon : find_lemma2_epsilon(g);
  return build_lemma2(g, eps);
}

void check_interactions(ScenarioResult& res, Writer& w, const GasParams& g, const PatternStates& ps) {
  Table t("label,residual,kinds_ok");
  double worst = 0.0;
  bool kinds = true;
  for (const InteractionCheck& c : verify_pattern_interactions(g, ps)) {
    t.row(c.label, c.residual, c.kinds_ok);
    worst = std::max(worst, c.residual);
    kinds = kinds && c.kinds_ok;
  }
  w.text("interactions.csv", t.str());
  check(res, "pattern interactions re-solve", worst <= 1e-8 && kinds, "max residual " + num(worst));
}

void run_riemann(const ScenarioConfig& cfg, const GasParams& g, Writer& w, ScenarioResult& res) {
  State l = state_from_uh(g, cfg.riemann.left_u, cfg.riemann.left_h);
  State r = state_from_uh(g, cfg.riemann.right_u, cfg.riemann.right_h);
  RiemannSolution sol = solve_riemann(g, l, r);
  Table t("family,kind,strength,speed,left_v,left_u,right_v,right_u");
  double rh = 0.0;
  for (const Wave* wv : {&sol.wave1, &sol.wave2}) {
    t.row(wv->family, kind_name(wv->kind), wv->strength, wv->speed, wv->left.v, wv->left.u, wv->right.v, wv->right.u);
    if (wv->kind == WaveKind::Shock && !wv->is_zero()) rh = std::max(rh, rh_residual(g, *wv));
  }
  w.text("riemann.csv", t.str());
  check(res, "riemann residual", sol.residual <= 1e-10, num(sol.residual));
  check(res, "rankine-hugoniot", rh <= 1e-10, num(rh));
  const Domain& d = cfg.engine.domain;
  bool inside = d.contains(g, l) && d.contains(g, r) && d.contains(g, sol.middle);
  check(res, "invariant domain", inside);
}

void run_periodic(const ScenarioConfig& cfg, const GasParams& g, Writer& w, ScenarioResult& res, bool perturbed) {
  PatternStates ps = base_pattern(cfg, g);
  if (perturbed) ps = build_perturbed_pattern(g, ps, cfg.pattern.split);
  w.text("states.txt", dump_pattern(g, ps));
  check_interactions(res, w, g, ps);
  PeriodicRunOptions opt;
  opt.periods = cfg.pattern.periods;
  opt.period = cfg.pattern.period;
  opt.lambda = cfg.pattern.lambda;
  opt.engine = cfg.engine;
  PeriodicRun run = run_periodic_pattern(g, ps, opt);
  write_history(w, run.history);
  Table t("period,error,events");
  bool err_ok = true;
  for (std::size_t n = 0; n < run.report.errors.size(); ++n) {
    t.row(n + 1, run.report.errors[n], run.report.events_per_period[n]);
    if (!(run.report.errors[n] <= 1e-7 * static_cast<double>(n + 1))) err_ok = false;
  }
  w.text("periodicity.csv", t.str());
  double last = run.report.errors.empty() ? 0.0 : run.report.errors.back();
  check(res, "periodicity", err_ok, "error after last period " + num(last));
  check(res, "seven events per period in order", run.report.order_ok);
  check(res, "C1 residual", run.max_c1_residual <= cfg.engine.c1_tolerance, num(run.max_c1_residual));
  int dab = run.history.diagnostics.back().dab_violations;
  check(res, "invariant domain", dab == 0, std::to_string(dab) + " violations");
}

BlowupReport blowup_report(const ScenarioConfig& cfg, const GasParams& g, Writer& w) {
  PatternStates ps = build_perturbed_pattern(g, base_pattern(cfg, g), cfg.pattern.split);
  w.text("states.txt", dump_pattern(g, ps));
  CycleSequence seq = build_cycle_sequence(g, ps, cfg.pattern.alpha, cfg.pattern.K);
  BlowupConfig b = cfg.blowup;
  b.cycles = cfg.pattern.K;
  b.alpha = cfg.pattern.alpha;
  BlowupReport rep = assemble_blowup_run(g, seq, b, cfg.engine);
  Table t("cycle,tau,bv_hu,V,leftover_sum,leftover_expected");
  for (const BVRow& r : rep.series) t.row(r.cycle, r.tau, r.bv_hu, r.V, r.leftover_sum, r.leftover_expected);
  w.text("bv_series.csv", t.str());
  return rep;
}

void run_blowup(const ScenarioConfig& cfg, const GasParams& g, Writer& w, ScenarioResult& res) {
  BlowupReport rep = blowup_report(cfg, g, w);
  write_history(w, rep.history);
  check(res, "C1 exact interaction strengths", rep.c1_ok, "max residual " + num(rep.c1_max_residual));
  check(res, "C2 rarefaction decay", rep.c2.pass, "min C0 " + num(rep.c2.min_c0));
  check(res, "C3 density floor", rep.c3_ok, "min h " + num(rep.min_h) + " >= " + num(rep.density_floor));
  check(res, "C4 divergence trend", rep.c4_ok, "slope " + num(rep.c4_slope));
  check(res, "BV above leftover sum", rep.bv_ok);
  double target = 2.0 * cfg.pattern.alpha * harmonic_number(cfg.pattern.K);
  double last_sum = rep.series.empty() ? 0.0 : rep.series.back().leftover_sum;
  double last_V = rep.series.empty() ? 0.0 : rep.series.back().V;
  check(res, "leftover sum equals harmonic sum", std::abs(last_sum - target) <= 1e-9,
        num(last_sum) + " vs " + num(target));
  check(res, "final BV", last_V >= target - 1e-6, num(last_V));
  check(res, "invariant domain", rep.dab_violations == 0, std::to_string(rep.dab_violations) + " violations");
}

void run_suite(const ScenarioConfig& cfg, const GasParams& g, Writer& w, ScenarioResult& res) {
  Table t("run,seed,events,V0,max_shock0,max_increase,max_increase_pairs,violations,violations_pairs,lemma3_ok,"
          "dab_violations,speed_violations");
  std::size_t viol = 0, viol_pairs = 0;
  bool l3 = true;
  int dab = 0, speed = 0;
  double worst = 0.0;
  for (int i = 0; i < cfg.suite.runs; ++i) {
    std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    SmallDataRun run = run_small_data_case(g, cfg.suite.data, cfg.engine, seed);
    MonotonicityReport m = functional_monotonicity(run.history, cfg.engine.eps0, cfg.suite.slack);
    t.row(i, static_cast<std::size_t>(seed), m.events, m.V0, m.max_shock0, m.max_increase, m.max_increase_pairs,
          m.violations, m.violations_pairs, m.lemma3_ok, m.dab_violations, m.speed_violations);
    viol += m.violations;
    viol_pairs += m.violations_pairs;
    l3 = l3 && m.lemma3_ok;
    dab += m.dab_violations;
    speed += m.speed_violations;
    worst = std::max(worst, m.max_increase);
  }
  w.text("suite.csv", t.str());
  check(res, "V + eps0 Q non-increasing", viol == 0,
        std::to_string(viol) + " increasing events, largest " + num(worst) + "; distinct-pair potential: " +
            std::to_string(viol_pairs));
  check(res, "local strength bound", l3);
  check(res, "invariant domain", dab == 0, std::to_string(dab) + " violations");
  check(res, "speed bound", speed == 0, std::to_string(speed) + " violations");
}

void run_census(const ScenarioConfig& cfg, const GasParams& g, Writer& w, ScenarioResult& res) {
  BlowupReport rep = blowup_report(cfg, g, w);
  ShockCensus c = census(rep.history, cfg.census.delta0, cfg.census.radii);
  Table t("t,x,radius,count");
  for (const CensusPoint& p : c.points)
    for (std::size_t i = 0; i < c.radii.size(); ++i) t.row(p.t, p.x, c.radii[i], p.counts[i]);
  w.text("census.csv", t.str());
  bool monotone = true;
  for (const CensusPoint& p : c.points)
    for (std::size_t i = 1; i < p.counts.size(); ++i)
      if (p.counts[i] > p.counts[i - 1]) monotone = false;
  check(res, "counts monotone in radius", monotone);
  double bv0 = rep.history.diagnostics.front().V;
  double bv1 = rep.history.diagnostics.back().V;
  bool grew = bv1 > 3.0 * bv0;
  check(res, "large shocks accompany BV growth", !grew || !c.empty(),
        "max count at largest radius " + std::to_string(c.max_count(0)));
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::ConfigError, "output_dir: " + ec.message());
  ScenarioResult res;
  Writer w(out_dir, res);
  w.text("manifest.txt", cfg.manifest());
  GasParams g = cfg.gas();
  if (cfg.scenario == "riemann") run_riemann(cfg, g, w, res);
  else if (cfg.scenario == "periodic") run_periodic(cfg, g, w, res, false);
  else if (cfg.scenario == "perturbed") run_periodic(cfg, g, w, res, true);
  else if (cfg.scenario == "blowup") run_blowup(cfg, g, w, res);
  else if (cfg.scenario == "small_data_suite") run_suite(cfg, g, w, res);
  else run_census(cfg, g, w, res);
  w.text("summary.txt", res.summary(cfg.scenario));
  return res;
}

}  // namespace psys
