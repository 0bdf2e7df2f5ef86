#include "hai/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hai/errors.hpp"
#include "hai/numeric.hpp"

namespace hai {

namespace {

json domain_json(const Interval& d) {
  json hi = std::isfinite(d.hi) ? json(d.hi) : json(nullptr);
  return json::array({d.lo, hi});
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "/" + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number()) throw ConfigError(path + "/" + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  return number(j, key, path);
}

std::string text(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) throw ConfigError(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::optional<Interval> domain_from(const json& j, const std::string& path) {
  if (!j.contains("domain")) return std::nullopt;
  const json& d = j.at("domain");
  const std::string p = path + "/domain";
  if (!d.is_array() || d.size() != 2) throw ConfigError(p, "expected [lo, hi]");
  if (!d[0].is_number()) throw ConfigError(p + "/0", "expected a number");
  Interval out{d[0].get<double>(), numeric::kInf};
  if (d[1].is_number()) {
    out.hi = d[1].get<double>();
  } else if (!d[1].is_null()) {
    throw ConfigError(p + "/1", "expected a number or null");
  }
  return out;
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

json to_json(const ProductionFunction& p) {
  json j;
  j["family"] = p.family_name();
  j["params"] = json::object();
  for (auto& [k, v] : p.params()) j["params"][k] = v;
  j["domain"] = domain_json(p.domain());
  if (p.distribution()) {
    const auto& d = *p.distribution();
    if (std::holds_alternative<UniformDist>(d)) j["distribution"] = "uniform";
    if (std::holds_alternative<ExponentialDist>(d)) j["distribution"] = "exponential";
    if (std::holds_alternative<TruncatedGaussianDist>(d)) j["distribution"] = "truncated_gaussian";
  }
  return j;
}

json to_json(const CostFunction& c) {
  json j;
  if (c.kind() == CostFunction::Kind::Linear) {
    j["family"] = "linear";
    j["params"] = {{"gamma", c.c1()}};
  } else {
    j["family"] = "quadratic";
    j["params"] = {{"c1", c.c1()}, {"c2", c.c2()}};
  }
  return j;
}

json to_json(const TransitionFunction& t) { return {{"lambda0", t.lambda0}, {"lambda1", t.lambda1}}; }

json to_json(const SkillChain& chain) {
  return {{"states", chain.states}, {"lambda", to_json(chain.lambda)}, {"mu", chain.mu}};
}

json to_json(const VerificationCurve& v) {
  json j;
  j["family"] = v.kind_name();
  if (v.kind() == VerificationCurve::Kind::Constant) {
    j["params"] = {{"level", v.parameter()}};
  } else {
    j["params"] = {{"kappa", v.parameter()}};
  }
  return j;
}

json to_json(const LiteracyModel& m) {
  json j = {{"v", to_json(m.v)}, {"beta", m.beta}, {"gamma", m.gamma}, {"q", m.q}};
  if (m.lambda) j["lambda"] = to_json(*m.lambda);
  return j;
}

ProductionFunction production_from_json(const json& j, const std::string& path) {
  const std::string name = text(j, "family", path);
  auto fam = family_from_name(name);
  if (!fam) throw ConfigError(path + "/family", "unknown family '" + name + "'");
  json params = j.contains("params") ? j.at("params") : json::object();
  const std::string pp = path + "/params";
  if (!params.is_object()) throw ConfigError(pp, "expected an object");
  auto dom = domain_from(j, path);
  return wrap(path, [&]() -> ProductionFunction {
    switch (*fam) {
      case Family::PiecewiseLinearCapped:
        return ProductionFunction::piecewise_linear_capped(number(params, "beta", pp));
      case Family::Fractional:
        return ProductionFunction::fractional(number_or(params, "scale", 1.0, pp));
      case Family::PowerLaw:
        return ProductionFunction::power_law(number(params, "coef", pp), number(params, "exponent", pp));
      case Family::Logarithmic:
        return ProductionFunction::logarithmic(number(params, "c", pp));
      case Family::GaussianIntegral:
        return ProductionFunction::gaussian_integral();
      case Family::ExpoPower:
        return ProductionFunction::expo_power(number(params, "b", pp), number(params, "c", pp));
      case Family::TruncatedQuadratic:
        return ProductionFunction::truncated_quadratic(number(params, "c1", pp), number(params, "c2", pp));
      case Family::Translog:
        return ProductionFunction::translog(number(params, "b", pp), dom);
      case Family::Transcendental:
        return ProductionFunction::transcendental(number(params, "a", pp), number(params, "b", pp), dom);
      case Family::KinkedLinear:
        return ProductionFunction::kinked_linear(number(params, "kink", pp), number(params, "left_slope", pp),
                                                 number(params, "right_slope", pp));
      case Family::Perturbed:
        if (params.contains("delta")) {
          return ProductionFunction::perturbed(number(params, "beta", pp), number(params, "delta", pp));
        }
        return ProductionFunction::perturbed(number(params, "beta", pp));
      case Family::FromDistribution: {
        const std::string dist = text(j, "distribution", path);
        if (dist == "uniform") {
          return ProductionFunction::from_distribution(
              UniformDist{number(params, "lo", pp), number(params, "hi", pp)});
        }
        if (dist == "exponential") {
          return ProductionFunction::from_distribution(ExponentialDist{number(params, "rate", pp)});
        }
        if (dist == "truncated_gaussian") {
          return ProductionFunction::from_distribution(TruncatedGaussianDist{
              number(params, "mean", pp), number(params, "sd", pp), number_or(params, "lo", 0.0, pp)});
        }
        throw ConfigError(path + "/distribution", "unknown distribution '" + dist + "'");
      }
    }
    throw ConfigError(path + "/family", "unsupported family");
  });
}

CostFunction cost_from_json(const json& j, const std::string& path) {
  const std::string name = text(j, "family", path);
  const json& params = field(j, "params", path);
  const std::string pp = path + "/params";
  return wrap(path, [&] {
    if (name == "linear") return CostFunction::linear(number(params, "gamma", pp));
    if (name == "quadratic") {
      return CostFunction::quadratic(number(params, "c1", pp), number_or(params, "c2", 0.0, pp));
    }
    throw ConfigError(path + "/family", "unknown cost family '" + name + "'");
  });
}

TransitionFunction transition_from_json(const json& j, const std::string& path) {
  TransitionFunction t{number(j, "lambda0", path), number_or(j, "lambda1", 0.0, path)};
  wrap(path, [&] {
    t.validate();
    return 0;
  });
  return t;
}

SkillChain chain_from_json(const json& j, const std::string& path) {
  SkillChain c;
  const json& st = field(j, "states", path);
  if (!st.is_array()) throw ConfigError(path + "/states", "expected an array");
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (!st[i].is_number()) throw ConfigError(path + "/states/" + std::to_string(i), "expected a number");
    c.states.push_back(st[i].get<double>());
  }
  c.lambda = transition_from_json(field(j, "lambda", path), path + "/lambda");
  c.mu = number(j, "mu", path);
  wrap(path, [&] {
    c.validate();
    return 0;
  });
  return c;
}

VerificationCurve verification_from_json(const json& j, const std::string& path) {
  const std::string name = text(j, "family", path);
  const json& params = field(j, "params", path);
  const std::string pp = path + "/params";
  return wrap(path, [&] {
    if (name == "saturating_affine") return VerificationCurve::saturating_affine(number(params, "kappa", pp));
    if (name == "exponential_approach") {
      return VerificationCurve::exponential_approach(number(params, "kappa", pp));
    }
    if (name == "constant") return VerificationCurve::constant(number(params, "level", pp));
    throw ConfigError(path + "/family", "unknown verification family '" + name + "'");
  });
}

LiteracyModel literacy_from_json(const json& j, const std::string& path) {
  LiteracyModel m;
  m.v = verification_from_json(field(j, "v", path), path + "/v");
  m.beta = number(j, "beta", path);
  m.gamma = number(j, "gamma", path);
  m.q = number(j, "q", path);
  if (j.contains("lambda")) m.lambda = transition_from_json(j.at("lambda"), path + "/lambda");
  wrap(path, [&] {
    m.validate();
    return 0;
  });
  return m;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(const json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string CsvTable::render() const {
  std::ostringstream os;
  os << "# spec_hash=" << spec_hash << "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
    os << "\n";
  };
  line(header);
  for (auto& r : rows) line(r);
  return os.str();
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("/" + name, "no such column");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  std::size_t k = column(name);
  std::vector<double> out;
  for (auto& r : rows) out.push_back(std::stod(r.at(k)));
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string cell;
  bool quoted = false, any = false;
  std::size_t i = 0;
  // Leading comment lines carry metadata.
  while (i < text.size() && text[i] == '#') {
    std::size_t end = text.find('\n', i);
    std::string line = text.substr(i, end == std::string::npos ? std::string::npos : end - i);
    const std::string key = "# spec_hash=";
    if (line.rfind(key, 0) == 0) t.spec_hash = line.substr(key.size());
    i = end == std::string::npos ? text.size() : end + 1;
  }
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      rec.push_back(cell);
      cell.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cell.empty()) {
        rec.push_back(cell);
        records.push_back(rec);
      }
      rec.clear();
      cell.clear();
      any = false;
    } else {
      cell += ch;
      any = true;
    }
  }
  if (any || !cell.empty()) {
    rec.push_back(cell);
    records.push_back(rec);
  }
  if (records.empty()) throw ConfigError("", "csv has no header");
  t.header = records.front();
  t.rows.assign(records.begin() + 1, records.end());
  return t;
}

CsvTable sweep_table(const SweepSeries& s, const std::string& spec_hash) {
  CsvTable t;
  t.spec_hash = spec_hash;
  t.header = {"a", "P", "E"};
  for (std::size_t k = 0; k < s.states.size(); ++k) t.header.push_back("pi_" + std::to_string(k + 1));
  t.header.push_back("interval_m");
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    std::vector<std::string> r = {format_double(s.a[i]), format_double(s.P[i]), format_double(s.E[i])};
    for (double x : s.pi[i]) r.push_back(format_double(x));
    r.push_back(std::to_string(s.interval[i]));
    t.rows.push_back(std::move(r));
  }
  return t;
}

CsvTable literacy_table(const EffortProfile& prof, const std::string& spec_hash) {
  CsvTable t;
  t.spec_hash = spec_hash;
  t.header = {"s", "e_b", "p_b", "q1", "q0", "signal_prob_good"};
  for (std::size_t i = 0; i < prof.s.size(); ++i) {
    const auto& v = prof.values[i];
    t.rows.push_back({format_double(prof.s[i]), format_double(v.e_b), format_double(v.p_b), format_double(v.q1),
                      format_double(v.q0), format_double(v.prob_good)});
  }
  return t;
}

json sweep_record(const SweepSeries& s, const json& spec) {
  return {{"spec", spec},       {"spec_hash", hash_hex(spec)}, {"states", s.states},
          {"x_star", s.x_star}, {"a", s.a},                    {"P", s.P},
          {"E", s.E},           {"pi", s.pi},                  {"interval", s.interval}};
}

json simulation_record(const SimulationRun& run, const std::vector<double>& pi) {
  return {{"seed", run.seed},
          {"horizon", run.horizon},
          {"occupancy", run.occupancy},
          {"tv_distance", run.tv_distance(pi)}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace hai
