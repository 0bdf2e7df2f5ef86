#pragma once

#include <optional>
#include <vector>

#include "hai/effort.hpp"
#include "hai/functions.hpp"

namespace hai {

// lambda(e) = lambda0 + lambda1 e
struct TransitionFunction {
  double lambda0 = 1.0;
  double lambda1 = 0.0;

  double operator()(double e) const { return lambda0 + lambda1 * e; }
  double d1(double /*e*/) const { return lambda1; }
  void validate() const;
};

struct SkillChain {
  std::vector<double> states;  // s_1 <= ... <= s_N
  TransitionFunction lambda;
  double mu = 1.0;

  std::size_t size() const { return states.size(); }
  void validate() const;
};

struct SteadyState {
  std::vector<double> pi;
  std::vector<double> effort;        // e*(s_k, a)
  std::vector<double> productivity;  // p*(s_k, a)
  std::vector<double> up_rates;      // lambda(e*(s_k, a)), k < N
  double P = 0.0;                    // sum pi_k p*_k
  double E = 0.0;                    // sum pi_k e*_k
};

// Product-form stationary distribution of a birth-death chain with upward
// rates up_rates[k] (k = 0..N-2) and common downward rate mu, computed in
// log space.
std::vector<double> stationary_from_rates(const std::vector<double>& up_rates, double mu);

SteadyState steady_state(const SkillChain& chain, const ProductionFunction& p,
                         const CostFunction& c, double a);

// Right endpoints R_m = (x* - s_m)^+. I_N = [0, R_N], I_m = (R_{m+1}, R_m],
// I_0 = (R_1, inf).
std::vector<double> interval_endpoints(const std::vector<double>& states, double x_star);
int interval_index(const std::vector<double>& states, double x_star, double a);

// Grid with points_per_interval points on each nonempty adjacent interval,
// including every endpoint, extended over [R_1, a_max].
std::vector<double> adjacent_interval_grid(const SkillChain& chain, const ProductionFunction& p,
                                           const CostFunction& c, double a_max,
                                           std::size_t points_per_interval = 512);

struct SweepSeries {
  std::vector<double> states;
  double x_star = 0.0;
  std::vector<double> a;
  std::vector<double> P;
  std::vector<double> E;
  std::vector<std::vector<double>> pi;
  std::vector<std::vector<double>> effort;
  std::vector<std::vector<double>> productivity;
  std::vector<int> interval;
};

// Runs on `workers` threads (0 = hardware concurrency); output is in grid order.
SweepSeries sweep(const SkillChain& chain, const ProductionFunction& p, const CostFunction& c,
                  const std::vector<double>& a_grid, unsigned workers = 1);

// Delta_m, 1 <= m <= N-1.
double sensitivity_gap(const SkillChain& chain, const ProductionFunction& p, const CostFunction& c,
                       int m);

std::optional<double> mu_bar_two_state(const SkillChain& chain, const ProductionFunction& p,
                                       const CostFunction& c);

struct DeclineRegion {
  int m = 0;
  double a_start = 0.0;
  double a_end = 0.0;
  double drop = 0.0;
};

// Maximal runs of >= 2 consecutive drops larger than 1e-9 max|P| inside each
// adjacent interval.
std::vector<DeclineRegion> detect_decline_regions(const SweepSeries& series);

// Largest P(start) - P(end) over decline runs of the whole curve, ignoring
// interval labels; 0 when P never declines.
double max_decline_drop(const std::vector<double>& P);

enum class DerivativeSide { TwoSided, Left, Right };

struct ProductivityDerivative {
  double value = 0.0;
  DerivativeSide side = DerivativeSide::TwoSided;
};

// Closed-form P'(a) on the adjacent interval I_m (linear cost).
ProductivityDerivative productivity_derivative(const SkillChain& chain, const ProductionFunction& p,
                                               const CostFunction& c, double a, int m);

// True iff every prefix sum of pi_lo is <= the matching prefix sum of pi_hi.
bool fosd_check(const std::vector<double>& pi_lo, const std::vector<double>& pi_hi);

struct SkillParadoxInstance {
  ProductionFunction p;
  CostFunction c;
  SkillChain chain;
  double a_lo = 0.0;
  double a_hi = 0.0;
  double ratio = 0.0;        // P(a_hi) / P(a_lo), recomputed
  double limit_ratio = 0.0;  // lambda0 -> 0 limit of the same ratio
};

SkillParadoxInstance construct_skill_paradox_instance(double eps, const std::vector<double>& states,
                                                      double lambda0 = 1e-6);

// lambda(0) -> 0 limit of P(x*) / P(x* - z) with lambda(z)/mu = r.
double skill_ratio_limit(const ProductionFunction& p, double x_star, double s2, double z, double r);

// Stationary distribution fixed by per-state rates (rates[k], k < N-1 used).
SweepSeries exogenous_sweep(const std::vector<double>& states, const std::vector<double>& rates,
                            double mu, const ProductionFunction& p, const CostFunction& c,
                            const std::vector<double>& a_grid);

// Smallest mu on the grid whose sweep shows a decline region.
std::optional<double> empirical_mu_bar(SkillChain chain, const ProductionFunction& p,
                                       const CostFunction& c, const std::vector<double>& mu_grid,
                                       double a_max);

}  // namespace hai
