#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hai/dynamics.hpp"
#include "hai/effort.hpp"
#include "hai/functions.hpp"

namespace hai {

// Probability v(s) that an agent of skill s reads the AI outcome correctly.
class VerificationCurve {
 public:
  enum class Kind { SaturatingAffine, ExponentialApproach, Constant };

  // min(1, 1/2 + kappa s); kappa = 0 is the flat curve v = 1/2.
  static VerificationCurve saturating_affine(double kappa);
  // 1 - exp(-kappa s) / 2
  static VerificationCurve exponential_approach(double kappa);
  // v(s) = level in [1/2, 1]
  static VerificationCurve constant(double level);

  double value(double s) const;
  // Right derivative; at the SaturatingAffine kink this is 0.
  double d1(double s) const;
  bool is_kink(double s) const;
  // Generalized inverse inf{s >= 0 : v(s) >= t}; +inf when never reached.
  double inverse(double t) const;

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  std::string kind_name() const;

 private:
  VerificationCurve(Kind k, double param) : kind_(k), param_(param) {}
  Kind kind_;
  double param_;
};

struct LiteracyModel {
  VerificationCurve v = VerificationCurve::saturating_affine(1.0);
  double beta = 2.0;   // production min(1, beta x)
  double gamma = 1.0;  // linear effort cost
  double q = 0.5;
  std::optional<TransitionFunction> lambda;

  void validate() const;
  ProductionFunction production() const { return ProductionFunction::piecewise_linear_capped(beta); }
  CostFunction cost() const { return CostFunction::linear(gamma); }
  double threshold() const { return (beta - gamma) / beta; }
};

struct PosteriorPair {
  double q1 = 0.0;  // after a good signal
  double q0 = 0.0;  // after a bad signal
};

PosteriorPair posteriors(double q, double v);

struct BayesEffort {
  double e_b = 0.0;
  double p_b = 0.0;
  double q1 = 0.0;
  double q0 = 0.0;
  double prob_good = 0.0;
};

BayesEffort bayes_effort(const LiteracyModel& model, double s, double a_bar);

enum class CrossingCurve { Q0, Q1 };

struct MarginalReturnGap {
  double omega = 0.0;
  CrossingCurve crossing = CrossingCurve::Q1;
};

MarginalReturnGap marginal_return_gap(const LiteracyModel& model);

struct CriticalSkill {
  double s_tilde = 0.0;  // +inf without crossing
  bool crossing = true;
  double target = 0.5;   // v-value where the designated posterior hits the threshold
};

CriticalSkill critical_skill(const LiteracyModel& model);

enum class Clause { None, A, B };
std::string to_string(Clause c);

struct ConditionDiagnostics {
  bool holds = false;
  Clause clause = Clause::None;
  double omega = 0.0;
  double s_tilde = 0.0;
  double bound = 0.0;      // right-hand side of s_tilde < bound
  double v_slope = 0.0;    // v'(s_tilde), right derivative
  bool kink_flag = false;  // s_tilde sits on a kink of v
};

ConditionDiagnostics check_condition_multimodal(const LiteracyModel& model);

struct EffortProfile {
  std::vector<double> s;
  std::vector<BayesEffort> values;
  bool decreasing = true;
  std::vector<std::size_t> witnesses;  // i with e_b[i+1] > e_b[i]
  std::optional<double> a_tilde;
};

EffortProfile effort_skill_profile(const LiteracyModel& model, double a_bar,
                                   const std::vector<double>& s_grid);

// True when e_b(., a_bar) increases somewhere, checked on a dense grid
// refined at the critical skill and at 1/beta - a_bar.
bool effort_nonmonotone(const LiteracyModel& model, double a_bar);

// Smallest a_bar with a non-monotone effort profile, by bisection.
std::optional<double> estimate_a_tilde(const LiteracyModel& model);

// Plateau rule: a mode is a maximal run of equal values whose existing
// neighbours are strictly lower.
std::vector<std::size_t> mode_indices(const std::vector<double>& pi);
int modality(const std::vector<double>& pi);

// Stationary distribution over `states` with upward rates lambda(e_b(s_k)).
std::vector<double> literacy_stationary(const LiteracyModel& model, double a_bar, double mu,
                                        const std::vector<double>& states);

struct ModalityReport {
  int mode_count = 0;
  std::vector<std::size_t> modes;
  std::optional<double> mu;
  std::vector<double> states;
  std::vector<double> pi;
  bool superset_stable = false;
};

std::optional<ModalityReport> search_multimodal_instance(const LiteracyModel& model, double a_bar);

}  // namespace hai
