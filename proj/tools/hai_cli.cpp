#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "hai/errors.hpp"
#include "hai/runner.hpp"
#include "hai/serialize.hpp"

// Exit codes: 0 ok, 1 a requested check failed, 2 bad config, 3 other error.
int main(int argc, char** argv) {
  CLI::App app{"Human-AI productivity model: sweeps, checks and figure data"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::vector<std::string> overrides;
  std::string figure;

  for (const auto& verb : hai::verbs()) {
    auto* sub = app.add_subcommand(verb);
    if (verb == "reproduce") {
      sub->add_option("figure", figure, "D4-skill or D4-unreliability");
    }
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("-o,--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "RNG seed for stochastic verbs");
    sub->add_option("--workers", workers, "worker threads (overrides HAI_WORKERS)");
    sub->add_option("--set", overrides, "override a config field: /json/pointer=value");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string verb = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();
  try {
    hai::json config = hai::json::object();
    if (!config_path.empty()) {
      config = hai::json::parse(hai::read_file(config_path), nullptr, false);
      if (config.is_discarded()) throw hai::ConfigError("", "config is not valid JSON: " + config_path);
    }
    if (!figure.empty()) config["figure"] = figure;
    for (const auto& o : overrides) hai::apply_override(config, o);

    hai::RunContext ctx;
    ctx.out_dir = out_dir;
    if (sub->count("--seed")) ctx.seed = seed;
    if (sub->count("--workers")) {
      if (workers == 0) throw hai::ConfigError("--workers", "expected a positive integer");
      ctx.workers = workers;
    }
    auto outcome = hai::run_verb(verb, config, ctx);
    std::cout << outcome.summary.dump(2) << "\n";
    return outcome.passed ? 0 : 1;
  } catch (const hai::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
