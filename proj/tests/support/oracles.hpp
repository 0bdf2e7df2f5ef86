#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hai/functions.hpp"

// Test-only reference computations, written without the library's solvers.
namespace oracle {

// Product form by direct multiplication in long double.
std::vector<double> stationary(const std::vector<double>& up_rates, double mu);

// Five-point central difference.
double derivative(const std::function<double(double)>& f, double x, double h);

// -p''/p' from long-double finite differences of the reference formula.
double ara_fd(const hai::ProductionFunction& p, double x, double h = 1e-4);

// Largest maximizer of p(s + e + a) - gamma e over a fine grid of step h,
// then a parabolic refinement. Slow; for small spot checks.
double effort_grid(const hai::ProductionFunction& p, double gamma, double s, double a, double h = 1e-4);

// True iff every CDF of lo is <= the matching CDF of hi (lo dominates).
bool dominates(const std::vector<double>& lo, const std::vector<double>& hi, double tol = 1e-12);

// "nondecreasing", "nonincreasing", "v_shaped" or "other".
std::string shape(const std::vector<double>& y, double rel_tol = 1e-12);

// Number of strict local maxima after merging equal neighbours.
int count_modes(const std::vector<double>& pi, double rel_tol = 1e-12);

struct Posterior {
  double good = 0.0;
  double bad = 0.0;
  double prob_good = 0.0;
};

// Posterior reliability from the joint table of (AI works, signal).
Posterior posterior(double q, double v);

// Effort of a signal follower who maximizes q' min(1, beta(s + e + a)) +
// (1 - q') min(1, beta(s + e)) - gamma e, by enumerating the kinks.
double capped_effort(double beta, double gamma, double s, double a_bar, double q);

}  // namespace oracle
