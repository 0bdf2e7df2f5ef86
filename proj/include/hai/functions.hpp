#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hai {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // may be +infinity
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool unbounded() const;
};

enum class Family {
  PiecewiseLinearCapped,
  Fractional,
  PowerLaw,
  Logarithmic,
  GaussianIntegral,
  ExpoPower,
  TruncatedQuadratic,
  Translog,
  Transcendental,
  KinkedLinear,
  FromDistribution,
  Perturbed,
};

struct UniformDist {
  double lo = 0.0;
  double hi = 1.0;
};
struct ExponentialDist {
  double rate = 1.0;
};
struct TruncatedGaussianDist {
  double mean = 0.0;
  double sd = 1.0;
  double lo = 0.0;
};
using DistributionSpec = std::variant<UniformDist, ExponentialDist, TruncatedGaussianDist>;

/**
 * Concave production function p(x) with analytic first and second
 * derivatives. At kinks d1() returns the left derivative, so the critical
 * level max{x : p'(x) >= g} lands on the kink.
 */
class ProductionFunction {
 public:
  // min(1, beta x)
  static ProductionFunction piecewise_linear_capped(double beta);
  // scale * x / (1 + x)
  static ProductionFunction fractional(double scale = 1.0);
  // coef * x^exponent, exponent in (0, 1)
  static ProductionFunction power_law(double coef, double exponent);
  // log(c x + 1)
  static ProductionFunction logarithmic(double c);
  // integral of exp(-t^2) over [0, x]
  static ProductionFunction gaussian_integral();
  // 1 - exp(-b x^c), c > 1; concave only beyond ((c-1)/(b c))^(1/c)
  static ProductionFunction expo_power(double b, double c);
  // c1 x - c2 x^2, flat beyond c1 / (2 c2)
  static ProductionFunction truncated_quadratic(double c1, double c2);
  // log x + b (log x)^2 on a window; defaults to translog_window(b)
  static ProductionFunction translog(double b, std::optional<Interval> domain = std::nullopt);
  // exp(a x) x^b, a < 0 < b; defaults to transcendental_window(a, b)
  static ProductionFunction transcendental(double a, double b,
                                           std::optional<Interval> domain = std::nullopt);
  // Slope left_slope up to kink, right_slope after.
  static ProductionFunction kinked_linear(double kink, double left_slope, double right_slope);
  // p(x) = E[min(X, x)]; checks A(x) against the hazard rate on construction.
  static ProductionFunction from_distribution(const DistributionSpec& d);
  // min(1, beta x) smoothed by a quadratic on [1/beta - delta, 1/beta + delta].
  static ProductionFunction perturbed(double beta, std::optional<double> delta = std::nullopt);

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

  Family family() const { return family_; }
  std::string family_name() const;
  const Interval& domain() const { return domain_; }
  const std::map<std::string, double>& params() const { return params_; }
  const std::optional<DistributionSpec>& distribution() const { return dist_; }

  // Input level beyond which p is flat, if any.
  std::optional<double> saturation() const;
  // p is concave on [concave_from(), inf); 0 for everywhere-concave families.
  double concave_from() const;
  // lim p'(x) as x -> inf.
  double asymptotic_slope() const;

 private:
  ProductionFunction(Family f, Interval dom) : family_(f), domain_(dom) {}
  void check_domain(double x) const;

  Family family_;
  Interval domain_;
  std::map<std::string, double> params_;
  std::optional<DistributionSpec> dist_;
  double k0_ = 0, k1_ = 0, k2_ = 0, k3_ = 0;
};

std::optional<Family> family_from_name(const std::string& name);
std::string family_to_name(Family f);

Interval translog_window(double b);
Interval transcendental_window(double a, double b);

class CostFunction {
 public:
  enum class Kind { Linear, Quadratic };

  static CostFunction linear(double gamma);
  // c1 e + c2 e^2
  static CostFunction quadratic(double c1, double c2);

  double value(double e) const { return c1_ * e + c2_ * e * e; }
  double d1(double e) const { return c1_ + 2.0 * c2_ * e; }
  double d2(double /*e*/) const { return 2.0 * c2_; }
  double marginal_at_zero() const { return c1_; }
  // True when the cost has no quadratic term.
  bool is_linear() const { return c2_ == 0.0; }
  Kind kind() const { return kind_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }

 private:
  CostFunction(Kind k, double c1, double c2) : kind_(k), c1_(c1), c2_(c2) {}
  Kind kind_;
  double c1_;
  double c2_;
};

// A(x) = -p''(x) / p'(x). Flat segments give +infinity, which orders above
// every finite value.
double eval_ara(const ProductionFunction& p, double x);

enum class AraVerdict { IARA, DARA, RelaxedIARA, RelaxedDARA, Mixed };
std::string to_string(AraVerdict v);

struct AraClassification {
  AraVerdict verdict = AraVerdict::Mixed;
  std::vector<double> xs;
  std::vector<double> ara;
  std::optional<double> saturation;
};

AraClassification classify_ara(const ProductionFunction& p);

// Sampling grid used for ARA classification and admissibility checks.
std::vector<double> sampling_grid(const ProductionFunction& p, std::size_t n = 1000);

// sup{x >= 0 : p'(x) >= g}; for an S-shaped p, the root on the falling branch of p'.
double marginal_level(const ProductionFunction& p, double g);

// Largest maximizer of p(x) - g x for linear cost, max{x : p'(x) >= c'(0)}
// for convex cost.
double critical_level(const ProductionFunction& p, const CostFunction& c);

struct AdmissibilityCondition {
  std::string name;
  bool passed = true;
  std::optional<double> witness;
  std::string detail;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityCondition> conditions;
  bool passed() const;
};

AdmissibilityReport validate_admissible(const ProductionFunction& p, const CostFunction& c);

ProductionFunction production_from_distribution(const DistributionSpec& d);

struct CertaintyEquivalent {
  double a_ce = 0.0;
  double premium = 0.0;              // q a_bar - a_ce
  double arrow_pratt_premium = 0.0;  // 0.5 A(q a_bar + s + e) q (1 - q) a_bar^2
};

CertaintyEquivalent certainty_equivalent_assistance(const ProductionFunction& p, double s, double e,
                                                    double a_bar, double q);

}  // namespace hai
