#pragma once

#include <functional>

#include "hai/functions.hpp"

// Brute-force reference solutions: long-double family formulas written from
// the parameter map, and a grid plus golden-section utility maximizer. Used
// by the report checks and the test suites as an oracle for the effort solvers.
namespace hai::reference {

// Throws ModelError for families without an independent formula.
long double production(const ProductionFunction& p, long double x);
bool supported(const ProductionFunction& p);

// Largest maximizer of u on [0, hi]: coarse grid, then golden section on the
// bracket around the last grid maximum.
long double argmax(const std::function<long double(long double)>& u, long double hi,
                   long double grid_step = 1e-3L);

struct Solution {
  double e = 0.0;
  double p = 0.0;
};

// max_e p(s + e + a) - c(e)
Solution effort_basic(const ProductionFunction& p, const CostFunction& c, double s, double a);
// max_e q p(s + e + a_bar) + (1 - q) p(s + e) - c(e)
Solution effort_exante(const ProductionFunction& p, const CostFunction& c, double s, double a_bar,
                       double q);

}  // namespace hai::reference
