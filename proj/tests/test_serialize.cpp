#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "hai/checks.hpp"
#include "hai/errors.hpp"
#include "hai/numeric.hpp"
#include "hai/serialize.hpp"

using namespace hai;

namespace {

std::vector<ProductionFunction> all_families() {
  return {ProductionFunction::piecewise_linear_capped(2.0),
          ProductionFunction::fractional(1.5),
          ProductionFunction::power_law(0.5, 0.25),
          ProductionFunction::logarithmic(2.0),
          ProductionFunction::gaussian_integral(),
          ProductionFunction::expo_power(1.0, 2.0),
          ProductionFunction::truncated_quadratic(2.0, 1.0),
          ProductionFunction::translog(1.0),
          ProductionFunction::transcendental(-0.5, 0.5),
          ProductionFunction::kinked_linear(0.5, 1.2, 0.3),
          ProductionFunction::perturbed(2.0, 0.05),
          ProductionFunction::from_distribution(UniformDist{0.0, 1.0}),
          ProductionFunction::from_distribution(ExponentialDist{1.5}),
          ProductionFunction::from_distribution(TruncatedGaussianDist{1.0, 0.5, 0.0})};
}

ConfigError config_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError thrown";
  return ConfigError("", "");
}

}  // namespace

TEST(Json, ProductionRoundTrip) {
  for (const auto& p : all_families()) {
    json j = to_json(p);
    auto back = production_from_json(j);
    EXPECT_EQ(back.family(), p.family());
    EXPECT_EQ(to_json(back), j) << j.dump();
    double x = 0.5 * (p.domain().lo + std::min(p.domain().hi, 2.0));
    EXPECT_DOUBLE_EQ(back.value(x), p.value(x)) << p.family_name();
  }
}

TEST(Json, UnboundedDomainIsNull) {
  json j = to_json(ProductionFunction::fractional());
  ASSERT_TRUE(j["domain"].is_array());
  EXPECT_TRUE(j["domain"][1].is_null());
}

TEST(Json, CostChainAndLiteracyRoundTrip) {
  for (const auto& c : {CostFunction::linear(0.5), CostFunction::quadratic(0.5, 0.125)}) {
    EXPECT_EQ(to_json(cost_from_json(to_json(c))), to_json(c));
  }
  auto chain = skill_figure_chain();
  auto back = chain_from_json(to_json(chain));
  EXPECT_EQ(back.states, chain.states);
  EXPECT_EQ(back.mu, chain.mu);
  EXPECT_EQ(back.lambda.lambda0, chain.lambda.lambda0);

  LiteracyModel m;
  m.v = VerificationCurve::exponential_approach(3.0);
  m.q = 0.4;
  m.lambda = TransitionFunction{0.01, 1.0};
  EXPECT_EQ(to_json(literacy_from_json(to_json(m))), to_json(m));
  for (const auto& v : {VerificationCurve::saturating_affine(2.0), VerificationCurve::constant(0.8)}) {
    EXPECT_EQ(to_json(verification_from_json(to_json(v))), to_json(v));
  }
}

TEST(Json, ErrorsCarryPointer) {
  json bad = {{"family", "piecewise_linear_capped"}, {"params", {{"beta", "two"}}}};
  EXPECT_EQ(config_error([&] { production_from_json(bad, "/production"); }).path(), "/production/params/beta");

  json missing = {{"family", "power_law"}, {"params", {{"coef", 1.0}}}};
  EXPECT_EQ(config_error([&] { production_from_json(missing, "/p"); }).path(), "/p/params/exponent");

  json unknown = {{"family", "cobb_douglas"}};
  EXPECT_EQ(config_error([&] { production_from_json(unknown, "/p"); }).path(), "/p/family");

  json states = {{"states", {0.0, "x"}}, {"lambda", {{"lambda0", 0.1}}}, {"mu", 1.0}};
  EXPECT_EQ(config_error([&] { chain_from_json(states, "/chain"); }).path(), "/chain/states/1");
}

TEST(Json, ModelErrorsBecomeConfigErrors) {
  json neg = {{"family", "linear"}, {"params", {{"gamma", -1.0}}}};
  EXPECT_EQ(config_error([&] { cost_from_json(neg, "/cost"); }).path(), "/cost");
}

TEST(Hash, FnvVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Hash, KeyOrderInsensitive) {
  json a = json::parse(R"({"b": 1, "a": [1, 2]})");
  json b = json::parse(R"({"a": [1, 2], "b": 1})");
  EXPECT_EQ(hash_hex(a), hash_hex(b));
  EXPECT_EQ(hash_hex(a).size(), 16u);
  EXPECT_NE(hash_hex(a), hash_hex(json::parse(R"({"a": [2, 1], "b": 1})")));
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Csv, RenderParseRoundTrip) {
  CsvTable t;
  t.spec_hash = "0123456789abcdef";
  t.header = {"name", "x"};
  t.rows = {{"a,b", "1"}, {"q\"uote", "2.5"}};
  auto back = parse_csv(t.render());
  EXPECT_EQ(back.spec_hash, t.spec_hash);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.numeric_column("x"), (std::vector<double>{1.0, 2.5}));
  EXPECT_EQ(t.render().rfind("# spec_hash=0123456789abcdef\n", 0), 0u);
  EXPECT_EQ(t.render().find('\r'), std::string::npos);
}

TEST(Csv, SweepTableColumns) {
  auto chain = skill_figure_chain();
  auto s = sweep(chain, ProductionFunction::fractional(), CostFunction::linear(0.5), numeric::linspace(0, 1, 5));
  auto t = sweep_table(s, "h");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "P", "E", "pi_1", "pi_2", "pi_3", "pi_4", "interval_m"}));
  ASSERT_EQ(t.rows.size(), 5u);
  auto P = t.numeric_column("P");
  for (std::size_t i = 0; i < P.size(); ++i) EXPECT_EQ(P[i], s.P[i]);
}

TEST(Csv, LiteracyTableColumns) {
  LiteracyModel m;
  m.v = VerificationCurve::saturating_affine(2.0);
  m.q = 0.7;
  auto prof = effort_skill_profile(m, 0.2, numeric::linspace(0.0, 0.75, 1501));
  auto t = literacy_table(prof, "h");
  EXPECT_EQ(t.header, (std::vector<std::string>{"s", "e_b", "p_b", "q1", "q0", "signal_prob_good"}));
  EXPECT_EQ(t.rows.size(), prof.s.size());
}

TEST(Records, SimulationRecordFields) {
  auto run = simulate({1.0}, 1.0, 10000, 3);
  json r = simulation_record(run, {0.5, 0.5});
  EXPECT_EQ(r["seed"], 3);
  EXPECT_EQ(r["horizon"], 10000);
  EXPECT_DOUBLE_EQ(r["tv_distance"].get<double>(), run.tv_distance({0.5, 0.5}));
  EXPECT_EQ(r["occupancy"].size(), 2u);
}
