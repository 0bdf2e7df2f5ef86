#include "hai/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "hai/checks.hpp"
#include "hai/effort.hpp"
#include "hai/errors.hpp"
#include "hai/literacy.hpp"
#include "hai/mcsim.hpp"
#include "hai/numeric.hpp"

namespace hai {

std::vector<std::string> verbs() {
  return {"sweep",         "steady-state", "classify-ara", "check-paradox", "construct-bad",
          "literacy-scan", "mc-validate",  "reproduce",    "report"};
}

unsigned resolve_workers(const json& config, const RunContext& ctx) {
  if (ctx.workers) return *ctx.workers;
  if (const char* env = std::getenv("HAI_WORKERS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw ConfigError("HAI_WORKERS", "expected a positive integer");
  }
  if (config.contains("workers")) {
    const auto& w = config.at("workers");
    if (!w.is_number_integer() || w.get<long long>() <= 0) throw ConfigError("/workers", "expected a positive integer");
    return static_cast<unsigned>(w.get<long long>());
  }
  return 1;
}

std::uint64_t resolve_seed(const json& config, const RunContext& ctx) {
  if (ctx.seed) return *ctx.seed;
  if (config.contains("seed")) {
    const auto& sd = config.at("seed");
    if (!sd.is_number_integer() || (!sd.is_number_unsigned() && sd.get<long long>() < 0)) {
      throw ConfigError("/seed", "expected a non-negative integer");
    }
    return config.at("seed").get<std::uint64_t>();
  }
  return CheckOptions{}.seed;
}

void apply_override(json& config, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0 || assignment[0] != '/') {
    throw ConfigError(assignment, "override must look like /path/to/field=value");
  }
  const std::string ptr = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  try {
    config[json::json_pointer(ptr)] = value;
  } catch (const json::exception& e) {
    throw ConfigError(ptr, e.what());
  }
}

std::vector<double> grid_from_json(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw ConfigError(path + "/" + std::to_string(i), "expected a number");
      out.push_back(j[i].get<double>());
    }
  } else if (j.is_object()) {
    for (const char* k : {"lo", "hi", "n"}) {
      if (!j.contains(k) || !j.at(k).is_number()) throw ConfigError(path + "/" + k, "expected a number");
    }
    const double lo = j.at("lo").get<double>(), hi = j.at("hi").get<double>();
    const auto n = j.at("n").get<long long>();
    if (n < 1) throw ConfigError(path + "/n", "grid must be non-empty");
    const std::string scale = j.value("scale", "linear");
    if (scale == "linear") {
      out = numeric::linspace(lo, hi, static_cast<std::size_t>(n));
    } else if (scale == "log") {
      if (!(lo > 0 && hi > 0)) throw ConfigError(path, "log grid needs positive bounds");
      out = numeric::logspace(lo, hi, static_cast<std::size_t>(n));
    } else {
      throw ConfigError(path + "/scale", "expected 'linear' or 'log'");
    }
  } else {
    throw ConfigError(path, "expected an array or {lo, hi, n}");
  }
  if (out.empty()) throw ConfigError(path, "grid must be non-empty");
  return out;
}

std::string artifact_name(const std::string& verb, const json& spec, const json& grid, const std::string& ext) {
  return verb + "_" + hash_hex(spec) + "_" + hash_hex(grid) + "." + ext;
}

namespace {

const json& require(const json& config, const std::string& key) {
  if (!config.is_object() || !config.contains(key)) throw ConfigError("/" + key, "missing field");
  return config.at(key);
}

double require_number(const json& config, const std::string& key) {
  const json& v = require(config, key);
  if (!v.is_number()) throw ConfigError("/" + key, "expected a number");
  return v.get<double>();
}

std::string require_string(const json& config, const std::string& key) {
  const json& v = require(config, key);
  if (!v.is_string()) throw ConfigError("/" + key, "expected a string");
  return v.get<std::string>();
}

double number_or(const json& config, const std::string& key, double fallback) {
  return config.contains(key) ? require_number(config, key) : fallback;
}

class Writer {
 public:
  Writer(const RunContext& ctx, RunOutcome& out) : ctx_(ctx), out_(out) {
    std::filesystem::create_directories(ctx.out_dir);
  }
  std::string put(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::path(ctx_.out_dir) / name).string();
    write_file(path, content);
    out_.files.push_back(path);
    return name;
  }

 private:
  const RunContext& ctx_;
  RunOutcome& out_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json regions_json(const std::vector<DeclineRegion>& regions) {
  json arr = json::array();
  for (const auto& r : regions) {
    arr.push_back({{"m", r.m}, {"a_start", r.a_start}, {"a_end", r.a_end}, {"drop", r.drop}});
  }
  return arr;
}

// "nondecreasing", "nonincreasing", "v_shaped" or "other".
std::string curve_shape(const std::vector<double>& y) {
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);
  std::size_t turn = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] < y[turn] - tol) turn = i;
  }
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    if (i < turn && y[i + 1] > y[i] + tol) return "other";
    if (i >= turn && y[i + 1] < y[i] - tol) return "other";
  }
  bool rises = false;
  for (std::size_t i = turn; i + 1 < y.size(); ++i) rises |= y[i + 1] > y[i] + tol;
  if (turn == 0) return "nondecreasing";
  return rises ? "v_shaped" : "nonincreasing";
}

struct Model {
  ProductionFunction p;
  CostFunction c;
  json spec;
};

Model load_model(const json& config) {
  auto p = production_from_json(require(config, "production"), "/production");
  auto c = cost_from_json(require(config, "cost"), "/cost");
  return {p, c, {{"production", to_json(p)}, {"cost", to_json(c)}}};
}

RunOutcome run_sweep(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  Model m = load_model(config);
  const json grid_cfg = config.value("grid", json::object());
  if (config.contains("chain")) {
    SkillChain chain = chain_from_json(config.at("chain"), "/chain");
    m.spec["chain"] = to_json(chain);
    std::vector<double> a_grid;
    if (grid_cfg.contains("a")) {
      a_grid = grid_from_json(grid_cfg.at("a"), "/grid/a");
    } else {
      double a_max = grid_cfg.contains("a_max") ? grid_cfg.at("a_max").get<double>()
                                                : critical_level(m.p, m.c) + 0.5;
      auto ppi = grid_cfg.value("points_per_interval", 512);
      if (ppi < 16) throw ConfigError("/grid/points_per_interval", "must be >= 16");
      a_grid = adjacent_interval_grid(chain, m.p, m.c, a_max, static_cast<std::size_t>(ppi));
    }
    auto series = sweep(chain, m.p, m.c, a_grid, resolve_workers(config, ctx));
    const json grid = {{"a", a_grid}};
    const std::string hash = hash_hex(m.spec);
    auto csv = w.put(artifact_name("sweep", m.spec, grid, "csv"), sweep_table(series, hash).render());
    auto rec = w.put(artifact_name("sweep", m.spec, grid, "json"), dump(sweep_record(series, m.spec)));
    out.summary = {{"csv", csv}, {"json", rec}, {"spec_hash", hash}, {"x_star", series.x_star},
                   {"decline_regions", regions_json(detect_decline_regions(series))}};
    return out;
  }

  // Basic model: e*(s, a), p*(s, a) over the s and a grids.
  if (!grid_cfg.contains("s") || !grid_cfg.contains("a")) {
    throw ConfigError("/grid", "basic sweep needs grid.s and grid.a");
  }
  const auto s_grid = grid_from_json(grid_cfg.at("s"), "/grid/s");
  const auto a_grid = grid_from_json(grid_cfg.at("a"), "/grid/a");
  std::optional<double> q;
  if (config.contains("reliability")) {
    q = config.at("reliability").value("q", 1.0);
    if (!(*q >= 0 && *q <= 1)) throw ConfigError("/reliability/q", "must lie in [0, 1]");
    m.spec["reliability"] = {{"q", *q}};
  }
  CsvTable t;
  t.spec_hash = hash_hex(m.spec);
  t.header = {"s", q ? "a_bar" : "a", "e_star", "p_star", "regime"};
  for (double s : s_grid) {
    for (double a : a_grid) {
      EffortSolution sol = q ? effort_exante(m.p, m.c, s, {a, *q}) : effort_static(m.p, m.c, s, a);
      t.rows.push_back({format_double(s), format_double(a), format_double(sol.e), format_double(sol.p),
                        to_string(sol.regime)});
    }
  }
  const json grid = {{"s", s_grid}, {"a", a_grid}};
  auto csv = w.put(artifact_name("sweep", m.spec, grid, "csv"), t.render());
  out.summary = {{"csv", csv}, {"spec_hash", t.spec_hash}, {"rows", t.rows.size()}};
  return out;
}

RunOutcome run_steady_state(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  Model m = load_model(config);
  SkillChain chain = chain_from_json(require(config, "chain"), "/chain");
  m.spec["chain"] = to_json(chain);
  const json& a_cfg = require(config, "a");
  std::vector<double> as = a_cfg.is_number() ? std::vector<double>{a_cfg.get<double>()} : grid_from_json(a_cfg, "/a");
  const double xs = critical_level(m.p, m.c);
  json arr = json::array();
  for (double a : as) {
    auto ss = steady_state(chain, m.p, m.c, a);
    arr.push_back({{"a", a},
                   {"pi", ss.pi},
                   {"effort", ss.effort},
                   {"productivity", ss.productivity},
                   {"up_rates", ss.up_rates},
                   {"P", ss.P},
                   {"E", ss.E},
                   {"interval_m", interval_index(chain.states, xs, a)}});
  }
  json rec = {{"spec", m.spec}, {"spec_hash", hash_hex(m.spec)}, {"x_star", xs}, {"steady_states", arr}};
  auto name = w.put(artifact_name("steady-state", m.spec, json(as), "json"), dump(rec));
  out.summary = {{"json", name}, {"spec_hash", hash_hex(m.spec)}};
  return out;
}

RunOutcome run_classify_ara(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  auto p = production_from_json(require(config, "production"), "/production");
  json spec = {{"production", to_json(p)}};
  auto cls = classify_ara(p);
  json rec = {{"spec", spec},
              {"spec_hash", hash_hex(spec)},
              {"family", p.family_name()},
              {"verdict", to_string(cls.verdict)},
              {"saturation", cls.saturation ? json(*cls.saturation) : json(nullptr)}};
  json ara = json::array();
  for (double v : cls.ara) ara.push_back(std::isfinite(v) ? json(v) : json("inf"));
  rec["samples"] = {{"x", cls.xs}, {"ara", ara}};
  if (config.contains("cost")) {
    auto c = cost_from_json(config.at("cost"), "/cost");
    spec["cost"] = to_json(c);
    rec["spec"] = spec;
    rec["spec_hash"] = hash_hex(spec);
    auto rep = validate_admissible(p, c);
    json conds = json::array();
    for (const auto& cond : rep.conditions) {
      conds.push_back({{"name", cond.name},
                       {"passed", cond.passed},
                       {"witness", cond.witness ? json(*cond.witness) : json(nullptr)},
                       {"detail", cond.detail}});
    }
    rec["admissible"] = rep.passed();
    rec["conditions"] = conds;
  }
  auto name = w.put(artifact_name("classify-ara", spec, json(cls.xs.size()), "json"), dump(rec));
  out.summary = {{"json", name}, {"verdict", rec["verdict"]}};
  return out;
}

RunOutcome run_check_paradox(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  Model m = load_model(config);
  json rec;
  bool declines = false;
  if (config.contains("chain")) {
    SkillChain chain = chain_from_json(config.at("chain"), "/chain");
    m.spec["chain"] = to_json(chain);
    const double a_max = number_or(config, "a_max", critical_level(m.p, m.c) + 0.5);
    auto a_grid = adjacent_interval_grid(chain, m.p, m.c, a_max);
    auto series = sweep(chain, m.p, m.c, a_grid, resolve_workers(config, ctx));
    auto regions = detect_decline_regions(series);
    declines = !regions.empty();
    json gaps = json::array();
    if (m.c.is_linear()) {
      for (int k = 1; k < static_cast<int>(chain.size()); ++k) {
        try {
          gaps.push_back(sensitivity_gap(chain, m.p, m.c, k));
        } catch (const DegenerateStatesError&) {
          gaps.push_back(nullptr);
        }
      }
    }
    rec = {{"kind", "skill"}, {"decline_regions", regions_json(regions)}, {"sensitivity_gaps", gaps}};
    if (chain.size() == 2 && m.c.is_linear()) {
      auto mb = mu_bar_two_state(chain, m.p, m.c);
      rec["mu_bar"] = mb ? json(*mb) : json(nullptr);
    }
    const json grid = {{"a", a_grid}};
    rec["csv"] = w.put(artifact_name("check-paradox", m.spec, grid, "csv"), sweep_table(series, hash_hex(m.spec)).render());
    rec["spec"] = m.spec;
    rec["spec_hash"] = hash_hex(m.spec);
    rec["json"] = w.put(artifact_name("check-paradox", m.spec, grid, "json"), dump(rec));
  } else {
    const json& rel = require(config, "reliability");
    if (!rel.contains("q") || !rel.at("q").is_number()) throw ConfigError("/reliability/q", "expected a number");
    const double q = rel.at("q").get<double>();
    const double s = number_or(config, "s", 0.0);
    if (!rel.contains("a_bar")) throw ConfigError("/reliability/a_bar", "missing field");
    const auto grid = grid_from_json(rel.at("a_bar"), "/reliability/a_bar");
    m.spec["reliability"] = {{"q", q}};
    m.spec["s"] = s;
    CsvTable t;
    t.spec_hash = hash_hex(m.spec);
    t.header = {"a_bar", "e_star", "p_star"};
    std::vector<double> P;
    for (double a : grid) {
      auto sol = effort_exante(m.p, m.c, s, {a, q});
      P.push_back(sol.p);
      t.rows.push_back({format_double(a), format_double(sol.e), format_double(sol.p)});
    }
    auto first_decline = smallest_decline_abar(m.p, m.c, s, q, grid);
    declines = first_decline.has_value();
    rec = {{"kind", "unreliability"},
           {"ara_verdict", to_string(classify_ara(m.p).verdict)},
           {"shape", curve_shape(P)},
           {"smallest_decline_abar", first_decline ? json(*first_decline) : json(nullptr)}};
    if (m.c.is_linear()) {
      double tau = vshape_threshold(m.p, s, q, m.c.c1());
      rec["vshape_threshold"] = std::isfinite(tau) ? json(tau) : json("inf");
    }
    const json gj = json(grid);
    rec["csv"] = w.put(artifact_name("check-paradox", m.spec, gj, "csv"), t.render());
    rec["spec"] = m.spec;
    rec["spec_hash"] = hash_hex(m.spec);
    rec["json"] = w.put(artifact_name("check-paradox", m.spec, gj, "json"), dump(rec));
  }
  if (config.contains("expect")) {
    const std::string expect = require_string(config, "expect");
    if (expect != "decline" && expect != "none") throw ConfigError("/expect", "expected 'decline' or 'none'");
    out.passed = (expect == "decline") == declines;
  }
  out.summary = {{"declines", declines}, {"passed", out.passed}, {"json", rec["json"]}};
  return out;
}

RunOutcome run_construct_bad(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  const std::string kind = require_string(config, "kind");
  const double eps = require_number(config, "eps");
  json rec;
  json spec = {{"kind", kind}, {"eps", eps}};
  if (kind == "skill") {
    std::vector<double> states = config.contains("states") ? grid_from_json(config.at("states"), "/states")
                                                           : std::vector<double>{0.0, 0.1};
    const double lambda0 = number_or(config, "lambda0", 1e-6);
    spec["states"] = states;
    spec["lambda0"] = lambda0;
    auto inst = construct_skill_paradox_instance(eps, states, lambda0);
    rec = {{"production", to_json(inst.p)}, {"cost", to_json(inst.c)},       {"chain", to_json(inst.chain)},
           {"a_lo", inst.a_lo},            {"a_hi", inst.a_hi},              {"ratio", inst.ratio},
           {"limit_ratio", inst.limit_ratio}};
    out.passed = inst.ratio <= eps;
  } else if (kind == "unreliability") {
    auto inst = construct_unreliability_bad_instance(eps);
    rec = {{"production", to_json(inst.p)}, {"cost", to_json(inst.c)}, {"s", inst.s},        {"q", inst.q},
           {"a_lo", inst.a_lo},            {"a_hi", inst.a_hi},        {"ratio", inst.ratio}};
    out.passed = std::abs(inst.ratio - inst.q) <= 1e-9;
  } else {
    throw ConfigError("/kind", "expected 'skill' or 'unreliability'");
  }
  rec["passed"] = out.passed;
  auto name = w.put(artifact_name("construct-bad", spec, json(nullptr), "json"), dump(rec));
  out.summary = {{"json", name}, {"ratio", rec["ratio"]}, {"passed", out.passed}};
  return out;
}

RunOutcome run_literacy_scan(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  LiteracyModel m = literacy_from_json(require(config, "literacy"), "/literacy");
  const double a_bar = require_number(config, "a_bar");
  std::vector<double> s_grid = config.contains("s_grid") ? grid_from_json(config.at("s_grid"), "/s_grid")
                                                         : numeric::linspace(0.0, 1.5 / m.beta, 2001);
  json spec = {{"literacy", to_json(m)}, {"a_bar", a_bar}};
  const std::string hash = hash_hex(spec);
  auto prof = effort_skill_profile(m, a_bar, s_grid);
  json rec = {{"spec", spec}, {"spec_hash", hash}, {"threshold", m.threshold()}};
  rec["decreasing"] = prof.decreasing;
  rec["witnesses"] = prof.witnesses.size();
  rec["a_tilde"] = prof.a_tilde ? json(*prof.a_tilde) : json(nullptr);
  if (m.q < 1.0) {
    auto cond = check_condition_multimodal(m);
    rec["condition"] = {{"holds", cond.holds},
                        {"clause", to_string(cond.clause)},
                        {"omega", cond.omega},
                        {"s_tilde", std::isfinite(cond.s_tilde) ? json(cond.s_tilde) : json("inf")},
                        {"bound", std::isfinite(cond.bound) ? json(cond.bound) : json("-inf")},
                        {"v_slope", cond.v_slope},
                        {"kink", cond.kink_flag}};
  }
  if (m.lambda) {
    auto rep = search_multimodal_instance(m, a_bar);
    if (rep) {
      rec["multimodal"] = {{"modes", rep->mode_count}, {"mu", *rep->mu}, {"states", rep->states},
                           {"pi", rep->pi},            {"superset_stable", rep->superset_stable}};
    } else {
      rec["multimodal"] = nullptr;
    }
  }
  const json grid = json(s_grid);
  rec["csv"] = w.put(artifact_name("literacy-scan", spec, grid, "csv"), literacy_table(prof, hash).render());
  auto name = w.put(artifact_name("literacy-scan", spec, grid, "json"), dump(rec));
  out.summary = {{"json", name}, {"csv", rec["csv"]}, {"decreasing", prof.decreasing}};
  return out;
}

RunOutcome run_mc_validate(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  const std::uint64_t seed = resolve_seed(config, ctx);
  const unsigned workers = resolve_workers(config, ctx);
  const double horizon = number_or(config, "horizon", 1e6);
  const double replicas = number_or(config, "replicas", 5);
  const double tol = number_or(config, "tolerance", 0.02);
  if (!(horizon >= 1e4)) throw ConfigError("/horizon", "must be >= 1e4 events");
  if (!(replicas >= 1)) throw ConfigError("/replicas", "must be >= 1");

  struct Inst {
    ProductionFunction p;
    CostFunction c;
    SkillChain chain;
    double a;
  };
  std::vector<Inst> insts;
  if (config.contains("instances")) {
    const json& arr = config.at("instances");
    if (!arr.is_array() || arr.empty()) throw ConfigError("/instances", "expected a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/instances/" + std::to_string(i);
      const json& it = arr[i];
      if (!it.contains("a") || !it.at("a").is_number()) throw ConfigError(path + "/a", "expected a number");
      insts.push_back({production_from_json(require(it, "production"), path + "/production"),
                       cost_from_json(require(it, "cost"), path + "/cost"),
                       chain_from_json(require(it, "chain"), path + "/chain"), it.at("a").get<double>()});
    }
  } else {
    for (const auto& p : skill_figure_productions()) {
      for (double a : {0.05, 0.25}) insts.push_back({p, CostFunction::linear(0.5), skill_figure_chain(), a});
    }
  }
  json spec = {{"seed", seed}, {"horizon", horizon}, {"replicas", replicas}, {"tolerance", tol}};
  json results = json::array();
  std::uint64_t stream = 0;
  for (const auto& in : insts) {
    auto ss = steady_state(in.chain, in.p, in.c, in.a);
    auto runs = simulate_replicas(ss.up_rates, in.chain.mu, static_cast<std::uint64_t>(horizon),
                                  replica_seed(seed, stream++), static_cast<std::size_t>(replicas), workers);
    json recs = json::array();
    double worst = 0.0;
    for (const auto& r : runs) {
      recs.push_back(simulation_record(r, ss.pi));
      worst = std::max(worst, r.tv_distance(ss.pi));
    }
    json ispec = {{"production", to_json(in.p)}, {"cost", to_json(in.c)}, {"chain", to_json(in.chain)}, {"a", in.a}};
    bool ok = worst <= tol;
    out.passed = out.passed && ok;
    results.push_back({{"spec", ispec}, {"spec_hash", hash_hex(ispec)}, {"pi", ss.pi}, {"runs", recs},
                       {"max_tv", worst}, {"passed", ok}});
  }
  spec["instances"] = json::array();
  for (const auto& r : results) spec["instances"].push_back(r["spec_hash"]);
  json rec = {{"spec", spec}, {"results", results}, {"passed", out.passed}};
  auto name = w.put(artifact_name("mc-validate", spec, json(static_cast<double>(horizon)), "json"), dump(rec));
  out.summary = {{"json", name}, {"passed", out.passed}};
  return out;
}

RunOutcome run_reproduce(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  const std::string fig = require_string(config, "figure");
  const unsigned workers = resolve_workers(config, ctx);
  json manifest = {{"figure", fig}, {"curves", json::array()}};
  if (fig == "D4-skill") {
    const auto chain = skill_figure_chain();
    for (const auto& p : skill_figure_productions()) {
      for (double c2 : skill_figure_c2()) {
        const auto c = CostFunction::quadratic(0.5, c2);
        auto series = skill_figure_sweep(p, c2, workers);
        json spec = {{"production", to_json(p)}, {"cost", to_json(c)}, {"chain", to_json(chain)}};
        auto name = w.put(artifact_name("reproduce", spec, json{{"a", series.a}}, "csv"),
                          sweep_table(series, hash_hex(spec)).render());
        manifest["curves"].push_back({{"file", name},
                                      {"production", to_json(p)},
                                      {"c2", c2},
                                      {"decline_regions", detect_decline_regions(series).size()}});
      }
    }
  } else if (fig == "D4-unreliability") {
    const auto grid = numeric::linspace(0.0, 2.0, 401);
    for (const auto& p : unreliability_figure_productions()) {
      for (double c2 : skill_figure_c2()) {
        const auto c = CostFunction::quadratic(0.5, c2);
        for (double q : unreliability_figure_q()) {
          json spec = {{"production", to_json(p)}, {"cost", to_json(c)}, {"s", 0.0}, {"reliability", {{"q", q}}}};
          CsvTable t;
          t.spec_hash = hash_hex(spec);
          t.header = {"a_bar", "e_star", "p_star"};
          std::vector<double> P;
          for (double a : grid) {
            auto sol = effort_exante(p, c, 0.0, {a, q});
            P.push_back(sol.p);
            t.rows.push_back({format_double(a), format_double(sol.e), format_double(sol.p)});
          }
          auto name = w.put(artifact_name("reproduce", spec, json(grid), "csv"), t.render());
          manifest["curves"].push_back(
              {{"file", name}, {"production", to_json(p)}, {"c2", c2}, {"q", q}, {"shape", curve_shape(P)}});
        }
      }
    }
  } else {
    throw ConfigError("/figure", "unknown figure id '" + fig + "' (expected D4-skill or D4-unreliability)");
  }
  auto name = w.put(artifact_name("reproduce", json{{"figure", fig}}, json(manifest["curves"].size()), "json"),
                    dump(manifest));
  out.summary = {{"manifest", name}, {"curves", manifest["curves"].size()}};
  return out;
}

RunOutcome run_report(const json& config, const RunContext& ctx) {
  RunOutcome out;
  Writer w(ctx, out);
  CheckOptions o;
  o.seed = resolve_seed(config, ctx);
  o.workers = resolve_workers(config, ctx);
  std::vector<std::string> ids = check_ids();
  if (config.contains("checks")) {
    ids.clear();
    const json& arr = config.at("checks");
    if (!arr.is_array() || arr.empty()) throw ConfigError("/checks", "expected a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) throw ConfigError("/checks/" + std::to_string(i), "expected a string");
      ids.push_back(arr[i].get<std::string>());
    }
    const auto known = check_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (std::find(known.begin(), known.end(), ids[i]) == known.end()) {
        throw ConfigError("/checks/" + std::to_string(i), "unknown check '" + ids[i] + "'");
      }
    }
  }
  json report = json::array();
  for (const auto& id : ids) {
    CheckResult r;
    try {
      r = run_check(id, o);
    } catch (const std::exception& e) {
      r.check_id = id;
      r.detail = std::string("error: ") + e.what();
    }
    out.passed = out.passed && r.passed;
    report.push_back(to_json(r));
  }
  json spec = {{"checks", ids}, {"seed", o.seed}};
  auto name = w.put(artifact_name("report", spec, json(nullptr), "json"), dump(report));
  out.summary = {{"json", name}, {"passed", out.passed}, {"checks", report.size()}};
  return out;
}

RunOutcome dispatch(const std::string& verb, const json& config, const RunContext& ctx);

}  // namespace

RunOutcome run_verb(const std::string& verb, const json& config, const RunContext& ctx) {
  if (!config.is_object()) throw ConfigError("", "config must be a JSON object");
  try {
    return dispatch(verb, config, ctx);
  } catch (const json::exception& e) {
    throw ConfigError("", e.what());
  }
}

namespace {

RunOutcome dispatch(const std::string& verb, const json& config, const RunContext& ctx) {
  if (verb == "sweep") return run_sweep(config, ctx);
  if (verb == "steady-state") return run_steady_state(config, ctx);
  if (verb == "classify-ara") return run_classify_ara(config, ctx);
  if (verb == "check-paradox") return run_check_paradox(config, ctx);
  if (verb == "construct-bad") return run_construct_bad(config, ctx);
  if (verb == "literacy-scan") return run_literacy_scan(config, ctx);
  if (verb == "mc-validate") return run_mc_validate(config, ctx);
  if (verb == "reproduce") return run_reproduce(config, ctx);
  if (verb == "report") return run_report(config, ctx);
  throw ConfigError("", "unknown verb '" + verb + "'");
}

}  // namespace

}  // namespace hai
