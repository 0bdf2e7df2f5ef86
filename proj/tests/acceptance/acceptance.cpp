// One PASS/FAIL line per acceptance criterion. Each line combines the
// library check with an independent recomputation where one is cheap.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "hai/checks.hpp"
#include "hai/dynamics.hpp"
#include "hai/effort.hpp"
#include "hai/functions.hpp"
#include "hai/literacy.hpp"
#include "hai/mcsim.hpp"
#include "hai/numeric.hpp"
#include "hai/reference.hpp"
#include "support/oracles.hpp"

using namespace hai;

namespace {

struct Extra {
  bool passed = true;
  std::string detail;
};

using ExtraFn = std::function<Extra()>;

int failures = 0;

void report(const std::string& criterion, const std::string& id, const CheckOptions& o, const ExtraFn& extra = {}) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = run_check(id, o);
  } catch (const std::exception& e) {
    r.check_id = id;
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  Extra x;
  if (extra && r.passed) {
    try {
      x = extra();
    } catch (const std::exception& e) {
      x = {false, std::string("error: ") + e.what()};
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = r.passed && x.passed;
  failures += !ok;
  std::printf("%s %-27s %s | %s%s%s [%.1fs]\n", ok ? "PASS" : "FAIL", id.c_str(), criterion.c_str(),
              r.detail.c_str(), x.detail.empty() ? "" : "; oracle: ", x.detail.c_str(), secs);
  std::fflush(stdout);
}

// Stationary distribution from the long-double product formula.
std::vector<double> oracle_pi(const SkillChain& chain, const ProductionFunction& p, const CostFunction& c, double a) {
  std::vector<double> up;
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    up.push_back(chain.lambda(reference::effort_basic(p, c, chain.states[k], a).e));
  }
  return oracle::stationary(up, chain.mu);
}

Extra fosd_oracle() {
  std::mt19937_64 g(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    double gamma = 0.2 + 0.6 * u(g);
    auto p = i % 2 ? ProductionFunction::logarithmic(0.5 + 2 * u(g)) : ProductionFunction::fractional(0.5 + u(g));
    auto c = CostFunction::linear(gamma);
    std::vector<double> s(2 + i % 5);
    for (auto& x : s) x = u(g);
    std::sort(s.begin(), s.end());
    SkillChain chain{s, {0.01 + 0.5 * u(g), 0.1 + 2 * u(g)}, 0.1 + 2 * u(g)};
    double a1 = 2 * u(g), a2 = a1 + u(g);
    bad += !oracle::dominates(oracle_pi(chain, p, c, a1), oracle_pi(chain, p, c, a2));
  }
  return {bad == 0, "100 independent instances, violations=" + std::to_string(bad)};
}

Extra skill_construction_oracle() {
  double worst = 0.0;
  for (double eps : {0.5, 0.25, 0.1}) {
    auto inst = construct_skill_paradox_instance(eps, {0.0, 0.1});
    auto P = [&](double a) {
      auto pi = oracle_pi(inst.chain, inst.p, inst.c, a);
      double sum = 0.0;
      for (std::size_t k = 0; k < pi.size(); ++k) {
        double e = reference::effort_basic(inst.p, inst.c, inst.chain.states[k], a).e;
        sum += pi[k] * static_cast<double>(reference::production(inst.p, inst.chain.states[k] + e + a));
      }
      return sum;
    };
    double ratio = P(inst.a_hi) / P(inst.a_lo);
    if (!(ratio <= eps)) return {false, "eps=" + format_double(eps) + " ratio=" + format_double(ratio)};
    worst = std::max(worst, ratio / eps);
  }
  return {true, "max ratio/eps=" + format_double(worst)};
}

Extra unreliability_construction_oracle() {
  double worst = 0.0;
  for (double eps : {0.5, 0.1}) {
    auto inst = construct_unreliability_bad_instance(eps);
    double ratio = reference::effort_exante(inst.p, inst.c, inst.s, inst.a_hi, inst.q).p /
                   reference::effort_exante(inst.p, inst.c, inst.s, inst.a_lo, inst.q).p;
    worst = std::max(worst, std::abs(ratio - eps));
  }
  return {worst <= 1e-9, "max|ratio-eps|=" + format_double(worst)};
}

Extra derivative_oracle() {
  auto chain = skill_figure_chain();
  auto c = CostFunction::linear(0.5);
  double worst = 0.0;
  int n = 0;
  for (const auto& p : skill_figure_productions()) {
    const double xs = critical_level(p, c);
    for (double a : numeric::linspace(0.007, xs + 0.25, 41)) {
      bool near = false;
      for (double r : interval_endpoints(chain.states, xs)) near |= std::abs(a - r) < 1e-4;
      if (near) continue;
      auto f = [&](double x) { return steady_state(chain, p, c, x).P; };
      double fd = oracle::derivative(f, a, 1e-6);
      if (std::abs(fd) <= 1e-6) continue;
      double d = productivity_derivative(chain, p, c, a, interval_index(chain.states, xs, a)).value;
      worst = std::max(worst, std::abs(d - fd) / std::abs(fd));
      ++n;
    }
  }
  return {worst <= 1e-4, std::to_string(n) + " five-point stencils, max rel=" + format_double(worst)};
}

Extra hazard_oracle() {
  auto p = ProductionFunction::from_distribution(UniformDist{0.0, 1.0});
  double worst = 0.0;
  for (double x : numeric::linspace(0.05, 0.9, 300)) {
    worst = std::max(worst, std::abs(eval_ara(p, x) * (1.0 - x) - 1.0));
  }
  return {worst <= 1e-6, "300 points, max rel=" + format_double(worst)};
}

Extra mc_oracle() {
  // Birth-death chain with the product-formula stationary law.
  std::vector<double> up = {0.31, 0.12, 0.05};
  auto pi = oracle::stationary(up, 0.2);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) worst = std::max(worst, simulate(up, 0.2, 1000000, 77 + s).tv_distance(pi));
  return {worst <= 0.02, "independent chain, max TV=" + format_double(worst)};
}

Extra constant_literacy_oracle() {
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    double beta = 1.0 + 2 * u(g), gamma = beta * (0.1 + 0.8 * u(g)), q = 0.05 + 0.9 * u(g);
    double v = 0.5 + 0.5 * u(g), a_bar = u(g) / beta;
    auto post = oracle::posterior(q, v);
    double prev = 1e300;
    std::vector<double> up;
    for (double s : numeric::linspace(0.0, 1.2 / beta, 400)) {
      double e = post.prob_good * oracle::capped_effort(beta, gamma, s, a_bar, post.good) +
                 (1 - post.prob_good) * oracle::capped_effort(beta, gamma, s, a_bar, post.bad);
      if (e > prev + 1e-12) ++bad;
      prev = e;
    }
    for (double s : numeric::linspace(0.0, 1.2 / beta, 8)) {
      double e = post.prob_good * oracle::capped_effort(beta, gamma, s, a_bar, post.good) +
                 (1 - post.prob_good) * oracle::capped_effort(beta, gamma, s, a_bar, post.bad);
      up.push_back(0.01 + e);
    }
    up.pop_back();
    bad += oracle::count_modes(oracle::stationary(up, 0.05 + u(g))) != 1;
  }
  return {bad == 0, "50 kink-enumeration profiles, violations=" + std::to_string(bad)};
}

}  // namespace

int main() {
  CheckOptions o;
  report("effort solvers vs utility oracle, |de|<=1e-6, |dp|<=1e-8, 200 instances, <1 min", "effort_oracle", o);
  report("assistance increase gives FOSD-lower skill law, 100 instances, <30 s", "fosd", o, fosd_oracle);
  report("two-state decline iff gap>0 and mu>mu_bar on 10x10 grid, <2 min", "two_state_dichotomy", o);
  report("productivity derivative vs central difference, rel<=1e-4", "productivity_derivative", o,
         derivative_oracle);
  report("skill construction ratio <= eps for eps in {0.5,0.25,0.1}", "skill_construction", o,
         skill_construction_oracle);
  report("unreliability construction ratio = eps within 1e-9", "unreliability_construction", o,
         unreliability_construction_oracle);
  report("DARA nondecreasing, IARA turn at tau within one step, 512-point grid", "ara_shapes", o);
  report("skill figures: interior decline at c2=0, drop weakly smaller at c2>0, <5 min", "skill_figure", o);
  report("clause-(a) witness with >=2 modes, superset stable; 100 condition-false unimodal", "multimodality", o);
  report("constant verification: decreasing effort and unimodal law, 50 instances", "constant_literacy", o,
         constant_literacy_oracle);
  report("simulation TV<=0.02 at 1e6 events, 5 seeds, P within 1%", "monte_carlo", o, mc_oracle);
  report("uniform-induced ARA = 1/(1-x) within 1e-6 relative on [0.05,0.9]", "hazard_equivalence", o, hazard_oracle);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
