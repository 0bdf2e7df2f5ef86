#include "hai/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hai/errors.hpp"
#include "hai/numeric.hpp"

namespace hai {

namespace {

using numeric::kInf;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

// Q(z) = 1 - Phi(z)
double upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Antiderivative of Q: d/dz [z Q(z) - phi(z)] = Q(z).
double upper_tail_integral(double z) { return z * upper_tail(z) - numeric::normal_pdf(z); }

}  // namespace

bool Interval::unbounded() const { return std::isinf(hi); }

ProductionFunction ProductionFunction::piecewise_linear_capped(double beta) {
  require(beta > 0, "piecewise_linear_capped: beta must be > 0");
  ProductionFunction p(Family::PiecewiseLinearCapped, {0.0, kInf});
  p.k0_ = beta;
  p.params_ = {{"beta", beta}};
  return p;
}

ProductionFunction ProductionFunction::fractional(double scale) {
  require(scale > 0, "fractional: scale must be > 0");
  ProductionFunction p(Family::Fractional, {0.0, kInf});
  p.k0_ = scale;
  p.params_ = {{"scale", scale}};
  return p;
}

ProductionFunction ProductionFunction::power_law(double coef, double exponent) {
  require(coef > 0, "power_law: coef must be > 0");
  require(exponent > 0 && exponent < 1, "power_law: exponent must lie in (0, 1)");
  ProductionFunction p(Family::PowerLaw, {0.0, kInf});
  p.k0_ = coef;
  p.k1_ = exponent;
  p.params_ = {{"coef", coef}, {"exponent", exponent}};
  return p;
}

ProductionFunction ProductionFunction::logarithmic(double c) {
  require(c > 0, "logarithmic: c must be > 0");
  ProductionFunction p(Family::Logarithmic, {0.0, kInf});
  p.k0_ = c;
  p.params_ = {{"c", c}};
  return p;
}

ProductionFunction ProductionFunction::gaussian_integral() {
  return ProductionFunction(Family::GaussianIntegral, {0.0, kInf});
}

ProductionFunction ProductionFunction::expo_power(double b, double c) {
  require(b > 0, "expo_power: b must be > 0");
  require(c > 1, "expo_power: c must be > 1");
  ProductionFunction p(Family::ExpoPower, {0.0, kInf});
  p.k0_ = b;
  p.k1_ = c;
  p.params_ = {{"b", b}, {"c", c}};
  return p;
}

ProductionFunction ProductionFunction::truncated_quadratic(double c1, double c2) {
  require(c1 > 0 && c2 > 0, "truncated_quadratic: c1 and c2 must be > 0");
  ProductionFunction p(Family::TruncatedQuadratic, {0.0, kInf});
  p.k0_ = c1;
  p.k1_ = c2;
  p.params_ = {{"c1", c1}, {"c2", c2}};
  return p;
}

Interval translog_window(double b) {
  require(b > 0, "translog: b must be > 0");
  double lo_log = (std::max(2.0 * b, 1.0) - 1.0) / (2.0 * b);
  double hi_log = ((std::sqrt(5.0) + 1.0) * b - 1.0) / (2.0 * b);
  if (!(lo_log < hi_log)) {
    throw ModelError("translog: window is empty for b=" + fmt_double(b) +
                     " (requires b > 1/(sqrt(5)+1))");
  }
  return {std::exp(lo_log), std::exp(hi_log)};
}

Interval transcendental_window(double a, double b) {
  require(a < 0 && b > 0, "transcendental: requires a < 0 < b");
  // u = a x + b must satisfy 0 < u < sqrt(b) and u^2 - 2u + b > 0.
  double u_max = b < 1.0 ? 1.0 - std::sqrt(1.0 - b) : std::sqrt(b);
  return {(u_max - b) / a, -b / a};
}

ProductionFunction ProductionFunction::translog(double b, std::optional<Interval> domain) {
  Interval dom = domain ? *domain : translog_window(b);
  require(b > 0, "translog: b must be > 0");
  require(dom.lo > 0 && dom.lo < dom.hi && !dom.unbounded(),
          "translog: domain must be a bounded interval with lo > 0");
  ProductionFunction p(Family::Translog, dom);
  p.k0_ = b;
  p.params_ = {{"b", b}};
  return p;
}

ProductionFunction ProductionFunction::transcendental(double a, double b,
                                                      std::optional<Interval> domain) {
  Interval dom = domain ? *domain : transcendental_window(a, b);
  require(a < 0 && b > 0, "transcendental: requires a < 0 < b");
  require(dom.lo > 0 && dom.lo < dom.hi && !dom.unbounded(),
          "transcendental: domain must be a bounded interval with lo > 0");
  ProductionFunction p(Family::Transcendental, dom);
  p.k0_ = a;
  p.k1_ = b;
  p.params_ = {{"a", a}, {"b", b}};
  return p;
}

ProductionFunction ProductionFunction::kinked_linear(double kink, double left_slope,
                                                     double right_slope) {
  require(kink > 0, "kinked_linear: kink must be > 0");
  require(left_slope >= right_slope && right_slope >= 0,
          "kinked_linear: requires left_slope >= right_slope >= 0");
  ProductionFunction p(Family::KinkedLinear, {0.0, kInf});
  p.k0_ = kink;
  p.k1_ = left_slope;
  p.k2_ = right_slope;
  p.params_ = {{"kink", kink}, {"left_slope", left_slope}, {"right_slope", right_slope}};
  return p;
}

ProductionFunction ProductionFunction::perturbed(double beta, std::optional<double> delta) {
  require(beta > 0, "perturbed: beta must be > 0");
  double d = delta ? *delta : 1e-3 / beta;
  require(d > 0 && d < 0.5 / beta, "perturbed: delta must lie in (0, 1/(2 beta))");
  ProductionFunction p(Family::Perturbed, {0.0, kInf});
  p.k0_ = beta;
  p.k1_ = d;
  p.k2_ = 1.0 / beta - d;
  p.k3_ = beta / (4.0 * d);
  p.params_ = {{"beta", beta}, {"delta", d}};
  return p;
}

ProductionFunction production_from_distribution(const DistributionSpec& d) {
  return ProductionFunction::from_distribution(d);
}

ProductionFunction ProductionFunction::from_distribution(const DistributionSpec& d) {
  ProductionFunction p(Family::FromDistribution, {0.0, kInf});
  p.dist_ = d;
  if (auto* u = std::get_if<UniformDist>(&d)) {
    require(u->lo >= 0 && u->hi > u->lo, "uniform: requires 0 <= lo < hi");
    p.params_ = {{"lo", u->lo}, {"hi", u->hi}};
  } else if (auto* e = std::get_if<ExponentialDist>(&d)) {
    require(e->rate > 0, "exponential: rate must be > 0");
    p.params_ = {{"rate", e->rate}};
  } else if (auto* g = std::get_if<TruncatedGaussianDist>(&d)) {
    require(g->sd > 0 && g->lo >= 0, "truncated_gaussian: requires sd > 0 and lo >= 0");
    double zlo = (g->lo - g->mean) / g->sd;
    p.k0_ = upper_tail(zlo);
    p.k1_ = upper_tail_integral(zlo);
    require(p.k0_ > 0, "truncated_gaussian: truncation point too far in the tail");
    p.params_ = {{"mean", g->mean}, {"sd", g->sd}, {"lo", g->lo}};
  } else {
    throw ModelError("from_distribution: unsupported distribution");
  }

  // Hazard rate of X from its own density and survival, against a finite
  // difference of p' (p' is the survival function of X).
  auto hazard = [&](double x) -> std::optional<double> {
    if (auto* u = std::get_if<UniformDist>(&d)) {
      if (x <= u->lo || x >= u->hi) return std::nullopt;
      return 1.0 / (u->hi - x);
    }
    if (auto* e = std::get_if<ExponentialDist>(&d)) return e->rate;
    auto* g = std::get_if<TruncatedGaussianDist>(&d);
    if (x <= g->lo) return std::nullopt;
    double z = (x - g->mean) / g->sd;
    double surv = upper_tail(z);
    if (surv < 1e-12) return std::nullopt;
    return numeric::normal_pdf(z) / (g->sd * surv);
  };
  double span = p.saturation().value_or(5.0);
  for (double x : numeric::linspace(0.05 * span, 0.95 * span, 19)) {
    auto h = hazard(x);
    if (!h) continue;
    double step = 1e-5 * std::max(1.0, x);
    if (x - step <= 0 || !hazard(x - step) || !hazard(x + step)) continue;
    double fd = -(p.d1(x + step) - p.d1(x - step)) / (2.0 * step) / p.d1(x);
    if (std::abs(fd - *h) > 1e-6 * std::max(1.0, std::abs(*h))) {
      throw ModelError("from_distribution: ARA does not match hazard rate at x=" + fmt_double(x));
    }
  }
  return p;
}

void ProductionFunction::check_domain(double x) const {
  if (!domain_.contains(x)) {
    throw DomainError(family_name() + ": x=" + fmt_double(x) + " outside domain [" +
                      fmt_double(domain_.lo) + ", " + fmt_double(domain_.hi) + "]");
  }
}

double ProductionFunction::value(double x) const {
  check_domain(x);
  switch (family_) {
    case Family::PiecewiseLinearCapped:
      return std::min(1.0, k0_ * x);
    case Family::Fractional:
      return k0_ * x / (1.0 + x);
    case Family::PowerLaw:
      return k0_ * std::pow(x, k1_);
    case Family::Logarithmic:
      return std::log1p(k0_ * x);
    case Family::GaussianIntegral:
      return 0.5 * std::sqrt(M_PI) * std::erf(x);
    case Family::ExpoPower:
      return -std::expm1(-k0_ * std::pow(x, k1_));
    case Family::TruncatedQuadratic: {
      double xm = std::min(x, k0_ / (2.0 * k1_));
      return k0_ * xm - k1_ * xm * xm;
    }
    case Family::Translog: {
      double l = std::log(x);
      return l + k0_ * l * l;
    }
    case Family::Transcendental:
      return std::exp(k0_ * x) * std::pow(x, k1_);
    case Family::KinkedLinear:
      return x <= k0_ ? k1_ * x : k1_ * k0_ + k2_ * (x - k0_);
    case Family::Perturbed: {
      if (x < k2_) return k0_ * x;
      if (x > k2_ + 2.0 * k1_) return 1.0;
      double t = x - k2_;
      return k0_ * x - k3_ * t * t;
    }
    case Family::FromDistribution: {
      if (auto* u = std::get_if<UniformDist>(&*dist_)) {
        if (x <= u->lo) return x;
        double w = u->hi - u->lo;
        if (x >= u->hi) return 0.5 * (u->lo + u->hi);
        double r = u->hi - x;
        return u->lo + (w * w - r * r) / (2.0 * w);
      }
      if (auto* e = std::get_if<ExponentialDist>(&*dist_)) return -std::expm1(-e->rate * x) / e->rate;
      auto& g = std::get<TruncatedGaussianDist>(*dist_);
      if (x <= g.lo) return x;
      double z = (x - g.mean) / g.sd;
      return g.lo + g.sd * (upper_tail_integral(z) - k1_) / k0_;
    }
  }
  return 0.0;
}

double ProductionFunction::d1(double x) const {
  check_domain(x);
  switch (family_) {
    case Family::PiecewiseLinearCapped:
      return x <= 1.0 / k0_ ? k0_ : 0.0;
    case Family::Fractional:
      return k0_ / ((1.0 + x) * (1.0 + x));
    case Family::PowerLaw:
      return x == 0.0 ? kInf : k0_ * k1_ * std::pow(x, k1_ - 1.0);
    case Family::Logarithmic:
      return k0_ / (k0_ * x + 1.0);
    case Family::GaussianIntegral:
      return std::exp(-x * x);
    case Family::ExpoPower: {
      if (x == 0.0) return 0.0;
      double xc = std::pow(x, k1_);
      return k0_ * k1_ * xc / x * std::exp(-k0_ * xc);
    }
    case Family::TruncatedQuadratic:
      return x <= k0_ / (2.0 * k1_) ? k0_ - 2.0 * k1_ * x : 0.0;
    case Family::Translog:
      return (1.0 + 2.0 * k0_ * std::log(x)) / x;
    case Family::Transcendental:
      return value(x) * (k0_ * x + k1_) / x;
    case Family::KinkedLinear:
      return x <= k0_ ? k1_ : k2_;
    case Family::Perturbed:
      if (x < k2_) return k0_;
      if (x > k2_ + 2.0 * k1_) return 0.0;
      return k0_ - 2.0 * k3_ * (x - k2_);
    case Family::FromDistribution: {
      if (auto* u = std::get_if<UniformDist>(&*dist_)) {
        if (x <= u->lo) return 1.0;
        if (x >= u->hi) return 0.0;
        return (u->hi - x) / (u->hi - u->lo);
      }
      if (auto* e = std::get_if<ExponentialDist>(&*dist_)) return std::exp(-e->rate * x);
      auto& g = std::get<TruncatedGaussianDist>(*dist_);
      if (x <= g.lo) return 1.0;
      return upper_tail((x - g.mean) / g.sd) / k0_;
    }
  }
  return 0.0;
}

double ProductionFunction::d2(double x) const {
  check_domain(x);
  switch (family_) {
    case Family::PiecewiseLinearCapped:
      return 0.0;
    case Family::Fractional:
      return -2.0 * k0_ / std::pow(1.0 + x, 3);
    case Family::PowerLaw:
      return x == 0.0 ? -kInf : k0_ * k1_ * (k1_ - 1.0) * std::pow(x, k1_ - 2.0);
    case Family::Logarithmic: {
      double den = k0_ * x + 1.0;
      return -k0_ * k0_ / (den * den);
    }
    case Family::GaussianIntegral:
      return -2.0 * x * std::exp(-x * x);
    case Family::ExpoPower: {
      if (x == 0.0) return k1_ == 2.0 ? 2.0 * k0_ : (k1_ < 2.0 ? kInf : 0.0);
      double xc = std::pow(x, k1_);
      double g = k0_ * k1_ * xc / x;  // b c x^(c-1)
      return std::exp(-k0_ * xc) * (g * (k1_ - 1.0) / x - g * g);
    }
    case Family::TruncatedQuadratic:
      return x <= k0_ / (2.0 * k1_) ? -2.0 * k1_ : 0.0;
    case Family::Translog:
      return (2.0 * k0_ - 1.0 - 2.0 * k0_ * std::log(x)) / (x * x);
    case Family::Transcendental: {
      double u = k0_ * x + k1_;
      return value(x) * (u * u - k1_) / (x * x);
    }
    case Family::KinkedLinear:
      return 0.0;
    case Family::Perturbed:
      if (x < k2_ || x > k2_ + 2.0 * k1_) return 0.0;
      return -2.0 * k3_;
    case Family::FromDistribution: {
      if (auto* u = std::get_if<UniformDist>(&*dist_)) {
        if (x <= u->lo || x >= u->hi) return 0.0;
        return -1.0 / (u->hi - u->lo);
      }
      if (auto* e = std::get_if<ExponentialDist>(&*dist_)) return -e->rate * std::exp(-e->rate * x);
      auto& g = std::get<TruncatedGaussianDist>(*dist_);
      if (x <= g.lo) return 0.0;
      return -numeric::normal_pdf((x - g.mean) / g.sd) / (g.sd * k0_);
    }
  }
  return 0.0;
}

std::optional<double> ProductionFunction::saturation() const {
  switch (family_) {
    case Family::PiecewiseLinearCapped:
      return 1.0 / k0_;
    case Family::TruncatedQuadratic:
      return k0_ / (2.0 * k1_);
    case Family::Perturbed:
      return k2_ + 2.0 * k1_;
    case Family::FromDistribution:
      if (auto* u = std::get_if<UniformDist>(&*dist_)) return u->hi;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

double ProductionFunction::concave_from() const {
  if (family_ == Family::ExpoPower) return std::pow((k1_ - 1.0) / (k0_ * k1_), 1.0 / k1_);
  return domain_.lo;
}

double ProductionFunction::asymptotic_slope() const {
  if (family_ == Family::KinkedLinear) return k2_;
  if (!domain_.unbounded()) return numeric::kInf;
  return 0.0;
}

namespace {
const std::vector<std::pair<Family, std::string>>& family_names() {
  static const std::vector<std::pair<Family, std::string>> names = {
      {Family::PiecewiseLinearCapped, "piecewise_linear_capped"},
      {Family::Fractional, "fractional"},
      {Family::PowerLaw, "power_law"},
      {Family::Logarithmic, "logarithmic"},
      {Family::GaussianIntegral, "gaussian_integral"},
      {Family::ExpoPower, "expo_power"},
      {Family::TruncatedQuadratic, "truncated_quadratic"},
      {Family::Translog, "translog"},
      {Family::Transcendental, "transcendental"},
      {Family::KinkedLinear, "kinked_linear"},
      {Family::FromDistribution, "from_distribution"},
      {Family::Perturbed, "perturbed"},
  };
  return names;
}
}  // namespace

std::string family_to_name(Family f) {
  for (auto& [fam, name] : family_names()) {
    if (fam == f) return name;
  }
  return "unknown";
}

std::optional<Family> family_from_name(const std::string& name) {
  for (auto& [fam, n] : family_names()) {
    if (n == name) return fam;
  }
  return std::nullopt;
}

std::string ProductionFunction::family_name() const { return family_to_name(family_); }

CostFunction CostFunction::linear(double gamma) {
  require(gamma > 0, "linear cost: gamma must be > 0");
  return CostFunction(Kind::Linear, gamma, 0.0);
}

CostFunction CostFunction::quadratic(double c1, double c2) {
  require(c1 > 0, "quadratic cost: c1 must be > 0");
  require(c2 >= 0, "quadratic cost: c2 must be >= 0");
  return CostFunction(Kind::Quadratic, c1, c2);
}

double eval_ara(const ProductionFunction& p, double x) {
  double d1 = p.d1(x);
  double d2 = p.d2(x);
  if (std::isinf(d1)) return kInf;
  if (d1 == 0.0) {
    if (d2 == 0.0) return kInf;
    throw UndefinedAraError(p.family_name() + ": p'(x)=0 with p''(x)!=0 at x=" + fmt_double(x));
  }
  return -d2 / d1;
}

std::string to_string(AraVerdict v) {
  switch (v) {
    case AraVerdict::IARA:
      return "IARA";
    case AraVerdict::DARA:
      return "DARA";
    case AraVerdict::RelaxedIARA:
      return "RelaxedIARA";
    case AraVerdict::RelaxedDARA:
      return "RelaxedDARA";
    case AraVerdict::Mixed:
      return "Mixed";
  }
  return "Mixed";
}

std::vector<double> sampling_grid(const ProductionFunction& p, std::size_t n) {
  const Interval& dom = p.domain();
  if (!dom.unbounded()) {
    // Open window: drop both endpoints.
    auto g = numeric::linspace(dom.lo, dom.hi, n + 2);
    return std::vector<double>(g.begin() + 1, g.end() - 1);
  }
  if (auto sat = p.saturation()) return numeric::linspace(dom.lo, 2.0 * *sat, n);
  double hi = 1.0;
  while (hi < 1e6 && p.d1(hi) >= 1e-12) hi *= 2.0;
  hi = std::min(hi, 1e6);
  double lo = dom.lo > 0 ? dom.lo : 1e-6;
  return numeric::logspace(lo, hi, n);
}

namespace {

std::optional<AraVerdict> analytic_tag(const ProductionFunction& p) {
  switch (p.family()) {
    case Family::PiecewiseLinearCapped:
    case Family::TruncatedQuadratic:
    case Family::Perturbed:
      return AraVerdict::RelaxedIARA;
    case Family::Fractional:
    case Family::PowerLaw:
    case Family::Logarithmic:
      return AraVerdict::DARA;
    case Family::GaussianIntegral:
    case Family::ExpoPower:
    case Family::Translog:
    case Family::Transcendental:
      return AraVerdict::IARA;
    case Family::FromDistribution: {
      const auto& d = *p.distribution();
      if (std::holds_alternative<ExponentialDist>(d)) return AraVerdict::RelaxedDARA;
      if (std::holds_alternative<UniformDist>(d)) return AraVerdict::RelaxedIARA;
      const auto& g = std::get<TruncatedGaussianDist>(d);
      return g.lo == 0.0 ? AraVerdict::IARA : AraVerdict::RelaxedIARA;
    }
    case Family::KinkedLinear:
      return std::nullopt;
  }
  return std::nullopt;
}

struct AraShape {
  bool inc = false, dec = false, flat = false, inf = false, positive = true;
};

AraShape sampled_shape(const std::vector<double>& a) {
  AraShape s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isinf(a[i])) s.inf = true;
    if (!(a[i] > 0)) s.positive = false;
    if (i == 0) continue;
    double prev = a[i - 1], cur = a[i];
    if (std::isinf(prev) && std::isinf(cur)) {
      s.flat = true;
    } else if (std::isinf(cur)) {
      s.inc = true;
    } else if (std::isinf(prev)) {
      s.dec = true;
    } else {
      double d = cur - prev;
      double tol = 1e-9 * std::max(1.0, std::abs(prev));
      if (d > tol) {
        s.inc = true;
      } else if (d < -tol) {
        s.dec = true;
      } else {
        s.flat = true;
      }
    }
  }
  return s;
}

AraVerdict verdict_from_shape(const AraShape& s) {
  if (!s.dec && s.inc && !s.flat && !s.inf) return AraVerdict::IARA;
  if (!s.dec) return AraVerdict::RelaxedIARA;
  if (!s.inc && s.positive && !s.flat) return AraVerdict::DARA;
  if (!s.inc && s.positive) return AraVerdict::RelaxedDARA;
  return AraVerdict::Mixed;
}

bool compatible(AraVerdict tag, const AraShape& s) {
  switch (tag) {
    case AraVerdict::IARA:
    case AraVerdict::RelaxedIARA:
      return !s.dec;
    case AraVerdict::DARA:
    case AraVerdict::RelaxedDARA:
      return !s.inc && s.positive;
    case AraVerdict::Mixed:
      return true;
  }
  return false;
}

}  // namespace

AraClassification classify_ara(const ProductionFunction& p) {
  AraClassification out;
  out.saturation = p.saturation();
  out.xs = sampling_grid(p, 1000);
  out.ara.reserve(out.xs.size());
  for (double x : out.xs) {
    double a;
    try {
      a = eval_ara(p, x);
    } catch (const UndefinedAraError&) {
      a = kInf;
    }
    out.ara.push_back(a);
  }
  AraShape shape = sampled_shape(out.ara);
  auto tag = analytic_tag(p);
  if (tag && compatible(*tag, shape)) {
    out.verdict = *tag;
  } else {
    out.verdict = verdict_from_shape(shape);
  }
  return out;
}

namespace {

// sup{x >= from : p'(x) >= g}, for p' nonincreasing on [from, inf).
double right_level(const ProductionFunction& p, double g, double from) {
  if (p.d1(from) < g) return from;
  double hi = std::max(1.0, 2.0 * from);
  while (p.d1(hi) >= g) {
    hi *= 2.0;
    if (hi > 1e15) throw AdmissibilityError(p.family_name() + ": p' does not fall below c'(0)");
  }
  return numeric::sup_where([&](double x) { return p.d1(x) >= g; }, from, hi);
}

void require_admissible(const ProductionFunction& p, const CostFunction& c) {
  if (p.domain().lo != 0.0 || !p.domain().unbounded()) {
    throw AdmissibilityError(p.family_name() + ": domain does not cover [0, inf)");
  }
  if (c.is_linear() && !(p.asymptotic_slope() < c.marginal_at_zero())) {
    throw AdmissibilityError(p.family_name() + ": growth bound limsup p(x)/x < c'(0) fails");
  }
}

}  // namespace

double marginal_level(const ProductionFunction& p, double g) {
  if (!(g > 0)) throw ModelError("marginal_level: g must be > 0");
  if (p.domain().lo != 0.0 || !p.domain().unbounded()) {
    throw AdmissibilityError(p.family_name() + ": domain does not cover [0, inf)");
  }
  if (!(p.asymptotic_slope() < g)) {
    throw AdmissibilityError(p.family_name() + ": p' does not fall below " + fmt_double(g));
  }
  switch (p.family()) {
    case Family::PiecewiseLinearCapped: {
      double beta = p.params().at("beta");
      return beta >= g ? 1.0 / beta : 0.0;
    }
    case Family::Fractional:
      return std::max(0.0, std::sqrt(p.params().at("scale") / g) - 1.0);
    case Family::PowerLaw: {
      double coef = p.params().at("coef"), al = p.params().at("exponent");
      return std::pow(coef * al / g, 1.0 / (1.0 - al));
    }
    case Family::Logarithmic:
      return std::max(0.0, 1.0 / g - 1.0 / p.params().at("c"));
    case Family::GaussianIntegral:
      return g >= 1.0 ? 0.0 : std::sqrt(-std::log(g));
    case Family::TruncatedQuadratic: {
      double c1 = p.params().at("c1"), c2 = p.params().at("c2");
      return g <= c1 ? (c1 - g) / (2.0 * c2) : 0.0;
    }
    case Family::KinkedLinear:
      return p.params().at("left_slope") >= g ? p.params().at("kink") : 0.0;
    case Family::Perturbed: {
      double beta = p.params().at("beta"), delta = p.params().at("delta");
      if (g > beta) return 0.0;
      return 1.0 / beta - delta + (beta - g) * 2.0 * delta / beta;
    }
    case Family::ExpoPower: {
      // p' rises to its peak at the inflection point, then falls.
      double infl = p.concave_from();
      if (p.d1(infl) < g) return 0.0;
      return right_level(p, g, infl);
    }
    case Family::FromDistribution: {
      const auto& d = *p.distribution();
      if (g > 1.0) return 0.0;
      if (auto* u = std::get_if<UniformDist>(&d)) return u->hi - g * (u->hi - u->lo);
      if (auto* e = std::get_if<ExponentialDist>(&d)) return -std::log(g) / e->rate;
      return right_level(p, g, 0.0);
    }
    case Family::Translog:
    case Family::Transcendental:
      break;
  }
  throw AdmissibilityError(p.family_name() + ": marginal level unavailable");
}

double critical_level(const ProductionFunction& p, const CostFunction& c) {
  require_admissible(p, c);
  const double g = c.marginal_at_zero();
  double x = marginal_level(p, g);
  // Non-concave prefix: the right root only maximizes p(x) - g x if it beats x = 0.
  if (c.is_linear() && p.concave_from() > 0.0 && x > 0.0 && p.value(x) - g * x < p.value(0.0)) {
    return 0.0;
  }
  return x;
}

bool AdmissibilityReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const AdmissibilityCondition& c) { return c.passed; });
}

AdmissibilityReport validate_admissible(const ProductionFunction& p, const CostFunction& c) {
  AdmissibilityReport rep;
  const Interval& dom = p.domain();

  AdmissibilityCondition domain{"domain", dom.lo == 0.0 && dom.unbounded(), std::nullopt, ""};
  if (!domain.passed) {
    domain.detail = "domain [" + fmt_double(dom.lo) + ", " + fmt_double(dom.hi) +
                    "] does not cover [0, inf)";
    domain.witness = dom.lo != 0.0 ? dom.lo : dom.hi;
  }
  rep.conditions.push_back(domain);

  AdmissibilityCondition growth{"growth_bound", true, std::nullopt, ""};
  double slope = p.asymptotic_slope();
  if (c.is_linear() && !(slope < c.marginal_at_zero())) {
    growth.passed = false;
    growth.detail = "asymptotic slope " + fmt_double(slope) + " >= c'(0) = " +
                    fmt_double(c.marginal_at_zero());
  }
  rep.conditions.push_back(growth);

  std::vector<double> xs = sampling_grid(p, 2000);
  if (dom.contains(0.0) && xs.front() > 0.0) xs.insert(xs.begin(), 0.0);
  std::vector<double> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v[i] = p.value(xs[i]);

  AdmissibilityCondition nonneg{"nonnegative", true, std::nullopt, ""};
  AdmissibilityCondition mono{"monotone", true, std::nullopt, ""};
  AdmissibilityCondition conc{"concave", true, std::nullopt, ""};
  double prev_slope = numeric::kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (nonneg.passed && v[i] < 0) {
      nonneg.passed = false;
      nonneg.witness = xs[i];
      nonneg.detail = "p(x) = " + fmt_double(v[i]);
    }
    if (i == 0) continue;
    double dv = v[i] - v[i - 1];
    double scale = std::max({1.0, std::abs(v[i]), std::abs(v[i - 1])});
    if (mono.passed && dv < -1e-12 * scale) {
      mono.passed = false;
      mono.witness = xs[i];
      mono.detail = "p decreases by " + fmt_double(-dv);
    }
    double sl = dv / (xs[i] - xs[i - 1]);
    if (conc.passed && std::isfinite(prev_slope) &&
        sl - prev_slope > 1e-9 * std::max(1.0, std::abs(prev_slope))) {
      conc.passed = false;
      conc.witness = xs[i - 1];
      conc.detail = "secant slope rises from " + fmt_double(prev_slope) + " to " + fmt_double(sl);
    }
    prev_slope = sl;
  }
  rep.conditions.push_back(nonneg);
  rep.conditions.push_back(mono);
  rep.conditions.push_back(conc);
  return rep;
}

CertaintyEquivalent certainty_equivalent_assistance(const ProductionFunction& p, double s, double e,
                                                    double a_bar, double q) {
  if (!(q >= 0 && q <= 1)) throw ModelError("certainty_equivalent: q must lie in [0, 1]");
  if (a_bar < 0) throw ModelError("certainty_equivalent: a_bar must be >= 0");
  CertaintyEquivalent out;
  double x0 = s + e;
  double ara = eval_ara(p, q * a_bar + x0);
  out.arrow_pratt_premium = 0.5 * ara * q * (1.0 - q) * a_bar * a_bar;
  if (q == 1.0 || q == 0.0 || a_bar == 0.0) {
    out.a_ce = q * a_bar;
    out.premium = 0.0;
    return out;
  }
  double lo_val = p.value(x0);
  double hi_val = p.value(x0 + a_bar);
  if (!(hi_val > lo_val) || p.d1(x0) == 0.0) {
    throw FlatRegionError("certainty_equivalent: p is flat near s+e=" + fmt_double(x0));
  }
  double target = q * hi_val + (1.0 - q) * lo_val;
  out.a_ce = numeric::bisect_root([&](double a) { return p.value(x0 + a) - target; }, 0.0, a_bar);
  out.premium = q * a_bar - out.a_ce;
  return out;
}

}  // namespace hai
