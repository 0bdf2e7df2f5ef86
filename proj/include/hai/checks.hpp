#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hai/dynamics.hpp"
#include "hai/functions.hpp"
#include "hai/serialize.hpp"

namespace hai {

struct CheckResult {
  std::string check_id;
  std::string paper_ref;  // short description of the property checked
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

json to_json(const CheckResult& r);

struct CheckOptions {
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
};

// Instances shared by the checks, the reproduce verb and the tests.
// Skill-development figure: four productions, cost e/2 + c2 e^2, states
// 0, 0.1, 0.2, 0.3, lambda(e) = 0.01 + e, mu = 0.2.
std::vector<ProductionFunction> skill_figure_productions();
std::vector<double> skill_figure_c2();
SkillChain skill_figure_chain();
// Sweep over the adjacent intervals up to x* + 0.3.
SweepSeries skill_figure_sweep(const ProductionFunction& p, double c2, unsigned workers = 1);

// Unreliability figure: s = 0, three IARA productions, same cost variants.
std::vector<ProductionFunction> unreliability_figure_productions();
std::vector<double> unreliability_figure_q();

struct EffortInstance {
  ProductionFunction p;
  double gamma = 0.5;
  double c2 = 0.0;
  double s = 0.0;
  double a = 0.0;  // a for the static problem, a_bar for the ex-ante problem
  double q = 0.5;
};

std::vector<EffortInstance> random_effort_instances(std::uint64_t seed, std::size_t n);

CheckResult check_effort_oracle(const CheckOptions& o, std::size_t instances = 200);
CheckResult check_fosd(const CheckOptions& o, std::size_t instances = 100);
CheckResult check_two_state_dichotomy(const CheckOptions& o);
CheckResult check_productivity_derivative(const CheckOptions& o);
CheckResult check_skill_construction(const CheckOptions& o);
CheckResult check_unreliability_construction(const CheckOptions& o);
CheckResult check_ara_shapes(const CheckOptions& o);
CheckResult check_skill_figure(const CheckOptions& o);
CheckResult check_multimodality(const CheckOptions& o, std::size_t instances = 100);
CheckResult check_constant_literacy(const CheckOptions& o, std::size_t instances = 50);
CheckResult check_monte_carlo(const CheckOptions& o);
CheckResult check_hazard_equivalence(const CheckOptions& o);

std::vector<std::string> check_ids();
CheckResult run_check(const std::string& id, const CheckOptions& o);
std::vector<CheckResult> run_all_checks(const CheckOptions& o);

}  // namespace hai
