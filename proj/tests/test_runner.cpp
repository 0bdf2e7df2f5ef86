#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hai/errors.hpp"
#include "hai/runner.hpp"
#include "hai/serialize.hpp"
#include "support/oracles.hpp"

#ifndef HAI_CLI_PATH
#error "HAI_CLI_PATH must point at the hai binary"
#endif

namespace fs = std::filesystem;
using hai::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

class Workdir {
 public:
  Workdir() {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("hai_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

  std::string config(const json& j, const std::string& name = "config.json") const {
    hai::write_file(path(name).string(), j.dump());
    return path(name).string();
  }

  Result run(const std::string& args, const std::string& env = "") const {
    const std::string out = path("stdout.txt").string(), err = path("stderr.txt").string();
    const std::string cmd = env + " '" + std::string(HAI_CLI_PATH) + "' " + args + " > '" + out + "' 2> '" + err + "'";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, hai::read_file(out), hai::read_file(err)};
  }

  std::vector<fs::path> files(const fs::path& sub, const std::string& ext) const {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir_ / sub)) {
      if (e.path().extension() == ext) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  fs::path dir_;
};

json basic_sweep() {
  return {{"production", {{"family", "fractional"}, {"params", {{"scale", 1.0}}}}},
          {"cost", {{"family", "linear"}, {"params", {{"gamma", 0.5}}}}},
          {"grid", {{"s", {0.0, 0.1}}, {"a", {{"lo", 0.0}, {"hi", 0.5}, {"n", 6}}}}}};
}

json chain_sweep() {
  json j = basic_sweep();
  j["chain"] = {{"states", {0.0, 0.1, 0.2, 0.3}}, {"lambda", {{"lambda0", 0.01}, {"lambda1", 1.0}}}, {"mu", 0.2}};
  j["grid"] = {{"a_max", 0.8}, {"points_per_interval", 32}};
  return j;
}

}  // namespace

TEST(Runner, GridSpecs) {
  EXPECT_EQ(hai::grid_from_json(json::parse("[0, 0.5, 1]"), "/g"), (std::vector<double>{0, 0.5, 1}));
  auto lin = hai::grid_from_json(json{{"lo", 0}, {"hi", 1}, {"n", 5}}, "/g");
  EXPECT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin[1], 0.25);
  auto lg = hai::grid_from_json(json{{"lo", 0.01}, {"hi", 100}, {"n", 5}, {"scale", "log"}}, "/g");
  EXPECT_NEAR(lg[2], 1.0, 1e-12);
  EXPECT_THROW(hai::grid_from_json(json{{"lo", 0}, {"hi", 1}}, "/g"), hai::ConfigError);
}

TEST(Runner, OverridesParseJsonOrString) {
  json c = basic_sweep();
  hai::apply_override(c, "/cost/params/gamma=0.25");
  EXPECT_EQ(c["cost"]["params"]["gamma"], 0.25);
  hai::apply_override(c, "/production/family=logarithmic");
  EXPECT_EQ(c["production"]["family"], "logarithmic");
  EXPECT_THROW(hai::apply_override(c, "no_equals_sign"), hai::ConfigError);
}

TEST(Runner, WorkerPrecedence) {
  hai::RunContext ctx;
  json c = {{"workers", 3}};
  ::unsetenv("HAI_WORKERS");
  EXPECT_EQ(hai::resolve_workers(json::object(), ctx), 1u);
  EXPECT_EQ(hai::resolve_workers(c, ctx), 3u);
  ::setenv("HAI_WORKERS", "2", 1);
  EXPECT_EQ(hai::resolve_workers(c, ctx), 2u);
  ctx.workers = 4;
  EXPECT_EQ(hai::resolve_workers(c, ctx), 4u);
  ::unsetenv("HAI_WORKERS");
}

TEST(Cli, BasicSweepWritesCsv) {
  Workdir w;
  auto r = w.run("sweep -c '" + w.config(basic_sweep()) + "' -o '" + w.path("out").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  auto csvs = w.files("out", ".csv");
  ASSERT_EQ(csvs.size(), 1u);
  EXPECT_EQ(csvs[0].filename().string().rfind("sweep_", 0), 0u);
  auto t = hai::parse_csv(hai::read_file(csvs[0].string()));
  EXPECT_EQ(t.header, (std::vector<std::string>{"s", "a", "e_star", "p_star", "regime"}));
  EXPECT_EQ(t.rows.size(), 12u);
  EXPECT_EQ(t.spec_hash.size(), 16u);
}

TEST(Cli, RerunsAreByteIdenticalAcrossWorkers) {
  Workdir w;
  auto cfg = w.config(chain_sweep());
  ASSERT_EQ(w.run("sweep -c '" + cfg + "' -o '" + w.path("a").string() + "' --workers 1").code, 0);
  ASSERT_EQ(w.run("sweep -c '" + cfg + "' -o '" + w.path("b").string() + "' --workers 3").code, 0);
  auto a = w.files("a", ".csv"), b = w.files("b", ".csv");
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(a[0].filename(), b[0].filename());
  EXPECT_EQ(hai::read_file(a[0].string()), hai::read_file(b[0].string()));
  EXPECT_EQ(hai::read_file(w.files("a", ".json")[0].string()), hai::read_file(w.files("b", ".json")[0].string()));
}

TEST(Cli, BadConfigExitsTwoWithPointer) {
  Workdir w;
  json c = basic_sweep();
  c["cost"]["params"]["gamma"] = "half";
  auto r = w.run("sweep -c '" + w.config(c) + "' -o '" + w.path("out").string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/cost/params/gamma"), std::string::npos) << r.err;
}

TEST(Cli, InvalidJsonExitsTwo) {
  Workdir w;
  hai::write_file(w.path("bad.json").string(), "{not json");
  EXPECT_EQ(w.run("sweep -c '" + w.path("bad.json").string() + "'").code, 2);
}

TEST(Cli, InvalidWorkerEnvExitsTwo) {
  Workdir w;
  auto r = w.run("sweep -c '" + w.config(chain_sweep()) + "' -o '" + w.path("out").string() + "'", "HAI_WORKERS=zero");
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST(Cli, SetOverrideChangesSpecHash) {
  Workdir w;
  auto cfg = w.config(basic_sweep());
  ASSERT_EQ(w.run("sweep -c '" + cfg + "' -o '" + w.path("a").string() + "'").code, 0);
  ASSERT_EQ(w.run("sweep -c '" + cfg + "' -o '" + w.path("b").string() + "' --set /cost/params/gamma=0.25").code, 0);
  auto a = hai::parse_csv(hai::read_file(w.files("a", ".csv")[0].string()));
  auto b = hai::parse_csv(hai::read_file(w.files("b", ".csv")[0].string()));
  EXPECT_NE(a.spec_hash, b.spec_hash);
  EXPECT_GT(b.numeric_column("e_star")[0], a.numeric_column("e_star")[0]);
}

TEST(Cli, ReproduceSkillFigure) {
  Workdir w;
  auto r = w.run("reproduce D4-skill -o '" + w.path("fig").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  auto csvs = w.files("fig", ".csv");
  ASSERT_EQ(csvs.size(), 12u);
  auto manifests = w.files("fig", ".json");
  ASSERT_EQ(manifests.size(), 1u);
  json m = json::parse(hai::read_file(manifests[0].string()));
  ASSERT_EQ(m["curves"].size(), 12u);
  // Decline drop in the fractional curve shrinks as the cost curvature grows.
  std::vector<double> drops;
  for (const auto& c : m["curves"]) {
    if (c["production"]["family"] != "fractional") continue;
    auto t = hai::parse_csv(hai::read_file(w.path("fig/" + c["file"].get<std::string>()).string()));
    auto P = t.numeric_column("P");
    double drop = 0.0, peak = P[0];
    for (double p : P) {
      peak = std::max(peak, p);
      drop = std::max(drop, peak - p);
    }
    drops.push_back(drop);
  }
  ASSERT_EQ(drops.size(), 3u);
  EXPECT_GT(drops[0], 0.0);
  EXPECT_GT(drops[0], drops[1]);
  EXPECT_GE(drops[1], drops[2]);
}

TEST(Cli, ReproduceUnreliabilityFigure) {
  Workdir w;
  auto r = w.run("reproduce D4-unreliability -o '" + w.path("fig").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(w.files("fig", ".csv").size(), 36u);
  json m = json::parse(hai::read_file(w.files("fig", ".json")[0].string()));
  ASSERT_EQ(m["curves"].size(), 36u);
  for (const auto& c : m["curves"]) {
    auto t = hai::parse_csv(hai::read_file(w.path("fig/" + c["file"].get<std::string>()).string()));
    EXPECT_EQ(t.header, (std::vector<std::string>{"a_bar", "e_star", "p_star"}));
    ASSERT_EQ(t.rows.size(), 401u);
    const std::string fam = c["production"]["family"];
    if (fam == "gaussian_integral" && c["q"] == 0.75 && c["c2"] == 0.0) {
      auto s = oracle::shape(t.numeric_column("p_star"));
      EXPECT_TRUE(s == "nonincreasing" || s == "v_shaped") << s;
    }
  }
}

TEST(Cli, UnknownFigureExitsTwo) {
  Workdir w;
  EXPECT_EQ(w.run("reproduce D9 -o '" + w.path("x").string() + "'").code, 2);
}

TEST(Cli, ReportSubsetPasses) {
  Workdir w;
  json c = {{"checks", {"unreliability_construction", "hazard_equivalence"}}};
  auto r = w.run("report -c '" + w.config(c) + "' -o '" + w.path("r").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  json rep = json::parse(hai::read_file(w.files("r", ".json")[0].string()));
  ASSERT_EQ(rep.size(), 2u);
  for (const auto& x : rep) EXPECT_EQ(x["status"], "pass");
}

TEST(Cli, ReportUnknownCheckExitsTwo) {
  Workdir w;
  json c = {{"checks", {"nope"}}};
  auto r = w.run("report -c '" + w.config(c) + "' -o '" + w.path("r").string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/checks/0"), std::string::npos);
}

TEST(Cli, McValidateIsSeedDeterministic) {
  Workdir w;
  json c = {{"horizon", 20000},
            {"replicas", 2},
            {"tolerance", 0.5},
            {"instances",
             {{{"production", {{"family", "fractional"}}},
               {"cost", {{"family", "linear"}, {"params", {{"gamma", 0.5}}}}},
               {"chain", {{"states", {0.0, 0.1}}, {"lambda", {{"lambda0", 0.3}, {"lambda1", 1.0}}}, {"mu", 0.5}}},
               {"a", 0.1}}}}};
  auto cfg = w.config(c);
  ASSERT_EQ(w.run("mc-validate -c '" + cfg + "' --seed 5 -o '" + w.path("a").string() + "'").code, 0);
  ASSERT_EQ(w.run("mc-validate -c '" + cfg + "' --seed 5 -o '" + w.path("b").string() + "'").code, 0);
  ASSERT_EQ(w.run("mc-validate -c '" + cfg + "' --seed 6 -o '" + w.path("c").string() + "'").code, 0);
  auto a = hai::read_file(w.files("a", ".json")[0].string());
  EXPECT_EQ(a, hai::read_file(w.files("b", ".json")[0].string()));
  EXPECT_NE(a, hai::read_file(w.files("c", ".json")[0].string()));
}

TEST(Cli, ConstructBadMeetsEps) {
  Workdir w;
  for (const std::string kind : {"skill", "unreliability"}) {
    json c = {{"kind", kind}, {"eps", 0.2}};
    auto r = w.run("construct-bad -c '" + w.config(c) + "' -o '" + w.path(kind).string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    json s = json::parse(r.out);
    EXPECT_LE(s["ratio"].get<double>(), 0.2 + 1e-9);
  }
}

TEST(Cli, LiteracyScanColumnsAndCondition) {
  Workdir w;
  json c = {{"literacy",
             {{"v", {{"family", "saturating_affine"}, {"params", {{"kappa", 2.0}}}}},
              {"beta", 2.0},
              {"gamma", 1.0},
              {"q", 0.7},
              {"lambda", {{"lambda0", 0.01}, {"lambda1", 1.0}}}}},
            {"a_bar", 0.2}};
  auto r = w.run("literacy-scan -c '" + w.config(c) + "' -o '" + w.path("l").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  auto t = hai::parse_csv(hai::read_file(w.files("l", ".csv")[0].string()));
  EXPECT_EQ(t.header, (std::vector<std::string>{"s", "e_b", "p_b", "q1", "q0", "signal_prob_good"}));
  json rec = json::parse(hai::read_file(w.files("l", ".json")[0].string()));
  EXPECT_EQ(rec["condition"]["clause"], "a");
  EXPECT_EQ(rec["decreasing"], false);
  ASSERT_FALSE(rec["multimodal"].is_null());
  EXPECT_GE(rec["multimodal"]["modes"].get<int>(), 2);
}

TEST(Cli, CheckParadoxExpectation) {
  Workdir w;
  json c = {{"production", {{"family", "gaussian_integral"}}},
            {"cost", {{"family", "linear"}, {"params", {{"gamma", 0.5}}}}},
            {"reliability", {{"q", 0.9}, {"a_bar", {{"lo", 0.0}, {"hi", 2.0}, {"n", 201}}}}},
            {"expect", "decline"}};
  EXPECT_EQ(w.run("check-paradox -c '" + w.config(c) + "' -o '" + w.path("p").string() + "'").code, 0);
  c["expect"] = "none";
  EXPECT_EQ(w.run("check-paradox -c '" + w.config(c) + "' -o '" + w.path("p").string() + "'").code, 1);
}

TEST(Cli, ClassifyAra) {
  Workdir w;
  json c = {{"production", {{"family", "gaussian_integral"}}}};
  auto r = w.run("classify-ara -c '" + w.config(c) + "' -o '" + w.path("c").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "IARA");
}
