#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hai/checks.hpp"
#include "hai/dynamics.hpp"
#include "hai/errors.hpp"
#include "hai/numeric.hpp"
#include "support/oracles.hpp"

using namespace hai;

TEST(Stationary, MatchesDirectProduct) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> up(1 + i % 7);
    for (auto& r : up) r = u(g);
    double mu = u(g);
    auto a = stationary_from_rates(up, mu);
    auto b = oracle::stationary(up, mu);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-14);
  }
}

TEST(Stationary, ExtremeRatesStayFinite) {
  std::vector<double> up(60, 1e12);
  auto pi = stationary_from_rates(up, 1e-12);
  double sum = 0.0;
  for (double x : pi) {
    EXPECT_TRUE(std::isfinite(x));
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(pi.back(), 1.0, 1e-12);
}

TEST(SteadyState, Consistent) {
  auto chain = skill_figure_chain();
  auto p = ProductionFunction::fractional();
  auto c = CostFunction::linear(0.5);
  auto ss = steady_state(chain, p, c, 0.1);
  double sum = 0.0, P = 0.0;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    sum += ss.pi[k];
    P += ss.pi[k] * ss.productivity[k];
    EXPECT_NEAR(ss.productivity[k], effort_basic(p, c, chain.states[k], 0.1).p, 1e-15);
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
  EXPECT_NEAR(ss.P, P, 1e-14);
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) EXPECT_DOUBLE_EQ(ss.up_rates[k], 0.01 + ss.effort[k]);
}

TEST(Intervals, EndpointsAndIndex) {
  std::vector<double> s = {0.0, 0.1, 0.3};
  auto R = interval_endpoints(s, 0.25);
  ASSERT_EQ(R.size(), 3u);
  EXPECT_DOUBLE_EQ(R[0], 0.25);
  EXPECT_DOUBLE_EQ(R[1], 0.15);
  EXPECT_DOUBLE_EQ(R[2], 0.0);
  EXPECT_EQ(interval_index(s, 0.25, 0.0), 3);
  EXPECT_EQ(interval_index(s, 0.25, 0.1), 2);
  EXPECT_EQ(interval_index(s, 0.25, 0.15), 2);
  EXPECT_EQ(interval_index(s, 0.25, 0.2), 1);
  EXPECT_EQ(interval_index(s, 0.25, 0.3), 0);
}

TEST(Intervals, GridCoversEveryNonemptyInterval) {
  auto chain = skill_figure_chain();
  auto p = ProductionFunction::fractional();
  auto c = CostFunction::linear(0.5);
  auto grid = adjacent_interval_grid(chain, p, c, 0.8, 64);
  auto R = interval_endpoints(chain.states, critical_level(p, c));
  for (double r : R) EXPECT_TRUE(std::find(grid.begin(), grid.end(), r) != grid.end());
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  EXPECT_DOUBLE_EQ(grid.back(), 0.8);
}

TEST(Sweep, IndependentOfWorkerCount) {
  auto p = ProductionFunction::power_law(0.5, 0.5);
  auto a = skill_figure_sweep(p, 0.0, 1);
  auto b = skill_figure_sweep(p, 0.0, 3);
  EXPECT_EQ(a.P, b.P);
  EXPECT_EQ(a.pi, b.pi);
  EXPECT_EQ(a.interval, b.interval);
}

TEST(Fosd, RandomChainsDominate) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto p = ProductionFunction::logarithmic(2.0);
  auto c = CostFunction::linear(0.6);
  for (int i = 0; i < 40; ++i) {
    std::vector<double> s(2 + i % 5);
    for (auto& x : s) x = u(g);
    std::sort(s.begin(), s.end());
    SkillChain chain{s, {0.05 + u(g), 0.2 + 2 * u(g)}, 0.1 + u(g)};
    double a1 = 2 * u(g), a2 = a1 + 0.5 * u(g);
    auto lo = steady_state(chain, p, c, a1).pi, hi = steady_state(chain, p, c, a2).pi;
    EXPECT_TRUE(fosd_check(lo, hi));
    EXPECT_TRUE(oracle::dominates(lo, hi));
  }
}

TEST(Fosd, CheckDetectsViolation) {
  EXPECT_TRUE(fosd_check({0.2, 0.8}, {0.5, 0.5}));
  EXPECT_FALSE(fosd_check({0.5, 0.5}, {0.2, 0.8}));
}

TEST(Derivative, ClosedFormMatchesFiniteDifference) {
  auto chain = skill_figure_chain();
  auto c = CostFunction::linear(0.5);
  for (const auto& p : skill_figure_productions()) {
    const double xs = critical_level(p, c);
    for (double a : numeric::linspace(0.013, xs + 0.2, 23)) {
      int m = interval_index(chain.states, xs, a);
      auto f = [&](double x) { return steady_state(chain, p, c, x).P; };
      double fd = oracle::derivative(f, a, 1e-6);
      // Skip points next to an interval boundary.
      bool near = false;
      for (double r : interval_endpoints(chain.states, xs)) near |= std::abs(a - r) < 1e-4;
      if (near || std::abs(fd) < 1e-6) continue;
      auto d = productivity_derivative(chain, p, c, a, m);
      EXPECT_NEAR(d.value, fd, 1e-5 * std::abs(fd)) << p.family_name() << " a=" << a << " m=" << m;
    }
  }
}

TEST(Derivative, ZeroAboveAllThresholdsExceptProductivityTerm) {
  auto chain = skill_figure_chain();
  auto p = ProductionFunction::fractional();
  auto c = CostFunction::linear(0.5);
  double a = critical_level(p, c) + 0.1;
  auto d = productivity_derivative(chain, p, c, a, 0);
  auto ss = steady_state(chain, p, c, a);
  double expect = 0.0;
  for (std::size_t k = 0; k < chain.size(); ++k) expect += ss.pi[k] * p.d1(chain.states[k] + a);
  EXPECT_NEAR(d.value, expect, 1e-14);
}

TEST(Declines, SkillFigureFractionalHasInteriorDecline) {
  auto series = skill_figure_sweep(ProductionFunction::fractional(), 0.0);
  auto regions = detect_decline_regions(series);
  ASSERT_FALSE(regions.empty());
  for (const auto& r : regions) {
    EXPECT_GT(r.drop, 0.0);
    EXPECT_LT(r.a_start, r.a_end);
  }
}

TEST(Declines, CoarseGridIsRejected) {
  auto chain = skill_figure_chain();
  auto p = ProductionFunction::fractional();
  auto c = CostFunction::linear(0.5);
  auto series = sweep(chain, p, c, numeric::linspace(0.0, 1.0, 12));
  EXPECT_THROW(detect_decline_regions(series), ResolutionError);
}

TEST(Declines, MaxDropIgnoresLabels) {
  EXPECT_DOUBLE_EQ(max_decline_drop({1.0, 0.9, 0.7, 0.8, 0.75}), 0.3);
  EXPECT_DOUBLE_EQ(max_decline_drop({1.0, 2.0, 3.0}), 0.0);
}

TEST(SensitivityGap, DegenerateStatesThrow) {
  SkillChain chain{{0.0, 0.0}, {0.3, 1.0}, 1.0};
  EXPECT_THROW(sensitivity_gap(chain, ProductionFunction::fractional(), CostFunction::linear(0.5), 1),
               DegenerateStatesError);
}

TEST(SensitivityGap, TwoStateThresholdSeparatesRegimes) {
  auto p = ProductionFunction::fractional();
  auto c = CostFunction::linear(0.5);
  SkillChain chain{{0.0, 0.5}, {0.3, 1.0}, 1.0};
  ASSERT_GT(sensitivity_gap(chain, p, c, 1), 0.0);
  auto mb = mu_bar_two_state(chain, p, c);
  ASSERT_TRUE(mb.has_value());
  double a_max = critical_level(p, c) + 0.5;
  for (double f : {0.5, 2.0}) {
    chain.mu = *mb * f;
    bool declines = !detect_decline_regions(sweep(chain, p, c, adjacent_interval_grid(chain, p, c, a_max))).empty();
    EXPECT_EQ(declines, f > 1.0) << "mu=" << chain.mu;
  }
}

TEST(SensitivityGap, EmpiricalThresholdBracketsAnalytic) {
  auto p = ProductionFunction::fractional();
  auto c = CostFunction::linear(0.5);
  SkillChain chain{{0.0, 0.5}, {0.3, 1.0}, 1.0};
  auto mb = mu_bar_two_state(chain, p, c);
  ASSERT_TRUE(mb.has_value());
  auto grid = numeric::logspace(0.01, 100.0, 41);
  auto emp = empirical_mu_bar(chain, p, c, grid, critical_level(p, c) + 0.5);
  ASSERT_TRUE(emp.has_value());
  EXPECT_GT(*emp, *mb);
  EXPECT_LT(*emp / *mb, std::pow(10.0, 4.0 / 40.0) + 1e-12);
}

TEST(SkillConstruction, RatioBelowEps) {
  for (double eps : {0.5, 0.25, 0.1}) {
    auto inst = construct_skill_paradox_instance(eps, {0.0, 0.1, 0.2});
    EXPECT_LE(inst.ratio, eps);
    EXPECT_LT(inst.a_lo, inst.a_hi);
    double P_hi = steady_state(inst.chain, inst.p, inst.c, inst.a_hi).P;
    double P_lo = steady_state(inst.chain, inst.p, inst.c, inst.a_lo).P;
    EXPECT_NEAR(inst.ratio, P_hi / P_lo, 1e-14);
  }
}

TEST(SkillConstruction, SmallLambdaZeroApproachesLimit) {
  auto inst = construct_skill_paradox_instance(0.25, {0.0, 0.1}, 1e-9);
  EXPECT_NEAR(inst.ratio, inst.limit_ratio, 1e-6);
}

TEST(ExogenousSweep, DistributionFixed) {
  auto p = ProductionFunction::fractional();
  auto c = CostFunction::linear(0.5);
  auto s = exogenous_sweep({0.0, 0.2, 0.4}, {0.5, 0.3}, 0.4, p, c, numeric::linspace(0.0, 1.0, 11));
  for (const auto& pi : s.pi) EXPECT_EQ(pi, s.pi.front());
  for (std::size_t i = 0; i + 1 < s.P.size(); ++i) EXPECT_GE(s.P[i + 1], s.P[i] - 1e-15);
}

TEST(Chain, ValidateRejectsBadInput) {
  SkillChain bad{{0.2, 0.1}, {0.3, 1.0}, 1.0};
  EXPECT_THROW(bad.validate(), ModelError);
  SkillChain zero{{0.0, 0.1}, {0.0, 1.0}, 1.0};
  EXPECT_THROW(zero.validate(), ModelError);
}
