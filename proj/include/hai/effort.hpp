#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hai/functions.hpp"

namespace hai {

enum class Regime { InteriorFoc, CornerZero, CornerCritical };
std::string to_string(Regime r);

struct EffortSolution {
  double e = 0.0;
  double p = 0.0;
  Regime regime = Regime::CornerZero;
  double utility = 0.0;
};

// AI delivers a_bar with probability q and nothing otherwise.
struct ReliabilityModel {
  double a_bar = 0.0;
  double q = 1.0;
};

// Deterministic AI, linear cost: e* = (x* - s - a)^+, p* = max(p(x*), p(s + a)).
EffortSolution effort_basic(const ProductionFunction& p, const CostFunction& c, double s, double a);

// Deterministic AI, convex cost: p'(s + e + a) = c'(e), or zero effort beyond x_c*.
EffortSolution effort_basic_convex(const ProductionFunction& p, const CostFunction& c, double s,
                                   double a);

// effort_basic for linear cost, effort_basic_convex otherwise.
EffortSolution effort_static(const ProductionFunction& p, const CostFunction& c, double s,
                             double a);

// Effort chosen before the AI outcome is known; largest maximizer of
// q p(s + e + a_bar) + (1 - q) p(s + e) - c(e).
EffortSolution effort_exante(const ProductionFunction& p, const CostFunction& c, double s,
                             const ReliabilityModel& rel);

// Expected utility of the ex-ante problem at effort e.
double exante_utility(const ProductionFunction& p, const CostFunction& c, double s,
                      const ReliabilityModel& rel, double e);

struct FullAdaptation {
  EffortSolution with_ai;
  EffortSolution without_ai;
  double e = 0.0;
  double p = 0.0;
};

// Effort chosen after the AI outcome is observed.
FullAdaptation effort_full_adaptation(const ProductionFunction& p, const CostFunction& c, double s,
                                      const ReliabilityModel& rel);

// d p*(s, a_bar, q) / d a_bar at an interior optimum (any convex cost).
// Empty when the optimum is a corner or the curvature term vanishes.
std::optional<double> exante_derivative(const ProductionFunction& p, const CostFunction& c,
                                        double s, const ReliabilityModel& rel);

// Sign of d p*/d a_bar for linear cost gamma, from the ARA gap at the optimum
// when q p'(s + a_bar) + (1 - q) p'(s) >= gamma and +1 (AI-only branch)
// otherwise. Throws UnsupportedClassificationError for Mixed ARA.
int exante_derivative_sign(const ProductionFunction& p, double s, const ReliabilityModel& rel,
                           double gamma);

// Sign of a central difference of p*(s, ., q) with step h; 0 when the
// difference is below floor.
int exante_fd_sign(const ProductionFunction& p, const CostFunction& c, double s,
                   const ReliabilityModel& rel, double h = 1e-4, double floor = 1e-8);

// Threshold tau solving q p'(s + tau) + (1 - q) p'(s) = gamma; +inf when
// (1 - q) p'(s) >= gamma.
double vshape_threshold(const ProductionFunction& p, double s, double q, double gamma);

struct UnreliabilityBadInstance {
  ProductionFunction p;
  CostFunction c;
  double s = 0.0;
  double q = 0.0;
  double a_lo = 0.0;
  double a_hi = 0.0;
  double ratio = 0.0;  // p*(s, a_hi, q) / p*(s, a_lo, q), recomputed
};

UnreliabilityBadInstance construct_unreliability_bad_instance(double eps);

struct ConvexParadoxDiagnostic {
  double e = 0.0;
  double ara_gap = 0.0;    // A(s + e* + a_bar) - A(s + e*)
  double threshold = 0.0;  // c''(e*) / ((1 - q) p'(s + e*))
  bool holds = false;
};

// Convex-cost analogue of the IARA condition at a single (s, a_bar, q).
ConvexParadoxDiagnostic convex_paradox_condition(const ProductionFunction& p, const CostFunction& c,
                                                 double s, const ReliabilityModel& rel);

// Smallest a_bar on the grid from which p*(s, ., q) declines for at least
// two consecutive steps (drop > 1e-9 max|p*|).
std::optional<double> smallest_decline_abar(const ProductionFunction& p, const CostFunction& c,
                                            double s, double q, const std::vector<double>& abar_grid);

}  // namespace hai
