#include "hai/effort.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hai/errors.hpp"
#include "hai/numeric.hpp"

namespace hai {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::InteriorFoc:
      return "interior-FOC";
    case Regime::CornerZero:
      return "corner-zero";
    case Regime::CornerCritical:
      return "corner-critical";
  }
  return "corner-zero";
}

namespace {

void check_inputs(double s, double a) {
  if (!(s >= 0)) throw ModelError("skill s must be >= 0");
  if (!(a >= 0)) throw ModelError("assistance a must be >= 0");
}

// Global maximizer on [0, e_hi] when the marginal utility is not monotone:
// every + to - sign change of the marginal is refined and compared.
double scan_argmax(const std::function<double(double)>& utility,
                   const std::function<double(double)>& marginal, double e_hi) {
  if (e_hi <= 0) return 0.0;
  const std::size_t n = 4000;
  std::vector<double> cands = {0.0};
  double prev_e = 0.0;
  bool prev_up = marginal(0.0) >= 0;
  for (std::size_t i = 1; i <= n; ++i) {
    double e = e_hi * static_cast<double>(i) / static_cast<double>(n);
    bool up = marginal(e) >= 0;
    if (prev_up && !up) {
      cands.push_back(numeric::sup_where([&](double t) { return marginal(t) >= 0; }, prev_e, e));
    }
    prev_e = e;
    prev_up = up;
  }
  if (prev_up) cands.push_back(e_hi);
  double best = cands.front();
  double best_u = utility(best);
  for (double e : cands) {
    double u = utility(e);
    if (u >= best_u) {
      best = e;
      best_u = u;
    }
  }
  return best;
}

}  // namespace

EffortSolution effort_basic(const ProductionFunction& p, const CostFunction& c, double s, double a) {
  check_inputs(s, a);
  if (!c.is_linear()) throw ModelError("effort_basic: requires a linear cost");
  const double g = c.marginal_at_zero();
  critical_level(p, c);  // admissibility
  EffortSolution out;
  const double base = s + a;
  if (base < p.concave_from()) {
    double xr = marginal_level(p, g);
    auto util = [&](double e) { return p.value(base + e) - g * e; };
    auto marg = [&](double e) { return p.d1(base + e) - g; };
    out.e = scan_argmax(util, marg, std::max(0.0, xr - base));
    out.p = p.value(base + out.e);
    out.regime = out.e > 0 ? Regime::CornerCritical : Regime::CornerZero;
  } else {
    // Concave from here on: the level where p' crosses g is the critical level.
    double xr = marginal_level(p, g);
    if (base <= xr) {
      out.e = xr - base;
      out.p = p.value(xr);
      out.regime = Regime::CornerCritical;
    } else {
      out.e = 0.0;
      out.p = p.value(base);
      out.regime = Regime::CornerZero;
    }
  }
  out.utility = out.p - g * out.e;
  return out;
}

EffortSolution effort_basic_convex(const ProductionFunction& p, const CostFunction& c, double s,
                                   double a) {
  if (c.is_linear()) return effort_basic(p, c, s, a);
  check_inputs(s, a);
  const double base = s + a;
  const double xc = marginal_level(p, c.marginal_at_zero());
  const double e_hi = std::max(0.0, xc - base);
  auto marg = [&](double e) { return p.d1(base + e) - c.d1(e); };
  EffortSolution out;
  if (base < p.concave_from()) {
    out.e = scan_argmax([&](double e) { return p.value(base + e) - c.value(e); }, marg, e_hi);
  } else if (e_hi > 0) {
    out.e = numeric::sup_where([&](double e) { return marg(e) >= 0; }, 0.0, e_hi);
  }
  out.p = p.value(base + out.e);
  out.regime = out.e > 0 ? Regime::InteriorFoc : Regime::CornerZero;
  out.utility = out.p - c.value(out.e);
  return out;
}

EffortSolution effort_static(const ProductionFunction& p, const CostFunction& c, double s,
                             double a) {
  return c.is_linear() ? effort_basic(p, c, s, a) : effort_basic_convex(p, c, s, a);
}

double exante_utility(const ProductionFunction& p, const CostFunction& c, double s,
                      const ReliabilityModel& rel, double e) {
  return rel.q * p.value(s + e + rel.a_bar) + (1.0 - rel.q) * p.value(s + e) - c.value(e);
}

EffortSolution effort_exante(const ProductionFunction& p, const CostFunction& c, double s,
                             const ReliabilityModel& rel) {
  check_inputs(s, rel.a_bar);
  const double q = rel.q;
  if (!(q >= 0 && q <= 1)) throw ModelError("effort_exante: q must lie in [0, 1]");
  if (q == 1.0) return effort_static(p, c, s, rel.a_bar);
  if (q == 0.0) return effort_static(p, c, s, 0.0);
  const double ab = rel.a_bar;
  EffortSolution out;

  if (p.family() == Family::PiecewiseLinearCapped && c.is_linear() &&
      p.params().at("beta") > c.marginal_at_zero()) {
    const double beta = p.params().at("beta");
    const double gamma = c.marginal_at_zero();
    // Ties at q = (beta - gamma)/beta go to the full-effort branch.
    if (q <= (beta - gamma) / beta) {
      out.e = std::max(0.0, 1.0 / beta - s);
      out.p = 1.0;
    } else {
      out.e = std::max(0.0, 1.0 / beta - s - ab);
      out.p = q + (1.0 - q) * std::max(std::min(1.0, beta * s), 1.0 - beta * ab);
    }
    out.regime = out.e > 0 ? Regime::InteriorFoc : Regime::CornerZero;
    out.utility = out.p - gamma * out.e;
    return out;
  }

  const double xc = marginal_level(p, c.marginal_at_zero());
  const double e_hi = std::max(0.0, xc - s);
  auto marg = [&](double e) {
    return q * p.d1(s + e + ab) + (1.0 - q) * p.d1(s + e) - c.d1(e);
  };
  if (s < p.concave_from()) {
    out.e = scan_argmax([&](double e) { return exante_utility(p, c, s, rel, e); }, marg, e_hi);
  } else if (e_hi > 0) {
    out.e = numeric::sup_where([&](double e) { return marg(e) >= 0; }, 0.0, e_hi);
  }
  out.p = q * p.value(s + out.e + ab) + (1.0 - q) * p.value(s + out.e);
  out.regime = out.e > 0 ? Regime::InteriorFoc : Regime::CornerZero;
  out.utility = out.p - c.value(out.e);
  return out;
}

FullAdaptation effort_full_adaptation(const ProductionFunction& p, const CostFunction& c, double s,
                                      const ReliabilityModel& rel) {
  if (!(rel.q >= 0 && rel.q <= 1)) throw ModelError("effort_full_adaptation: q must lie in [0, 1]");
  FullAdaptation out;
  out.with_ai = effort_static(p, c, s, rel.a_bar);
  out.without_ai = effort_static(p, c, s, 0.0);
  out.e = rel.q * out.with_ai.e + (1.0 - rel.q) * out.without_ai.e;
  out.p = rel.q * out.with_ai.p + (1.0 - rel.q) * out.without_ai.p;
  return out;
}

std::optional<double> exante_derivative(const ProductionFunction& p, const CostFunction& c,
                                        double s, const ReliabilityModel& rel) {
  const double q = rel.q;
  EffortSolution sol = effort_exante(p, c, s, rel);
  if (sol.e <= 0) {
    double g0 = q * p.d1(s + rel.a_bar) + (1.0 - q) * p.d1(s) - c.d1(0.0);
    if (g0 < 0) return q * p.d1(s + rel.a_bar);
    return std::nullopt;
  }
  const double x1 = s + sol.e + rel.a_bar;
  const double x0 = s + sol.e;
  const double cpp = c.d2(sol.e);
  double num = (1.0 - q) * (p.d1(x1) * p.d2(x0) - p.d1(x0) * p.d2(x1)) - cpp * p.d1(x1);
  double den = cpp - q * p.d2(x1) - (1.0 - q) * p.d2(x0);
  if (!(den > 0)) return std::nullopt;
  return -q * num / den;
}

int exante_derivative_sign(const ProductionFunction& p, double s, const ReliabilityModel& rel,
                           double gamma) {
  if (!(rel.q > 0 && rel.q < 1)) throw ModelError("exante_derivative_sign: q must lie in (0, 1)");
  if (classify_ara(p).verdict == AraVerdict::Mixed) {
    throw UnsupportedClassificationError(p.family_name() + ": ARA is neither IARA nor DARA");
  }
  const double q = rel.q;
  const CostFunction c = CostFunction::linear(gamma);
  double cond = q * p.d1(s + rel.a_bar) + (1.0 - q) * p.d1(s);
  if (cond < gamma) return p.d1(s + rel.a_bar) > 0 ? 1 : 0;

  EffortSolution sol = effort_exante(p, c, s, rel);
  const double x1 = s + sol.e + rel.a_bar;
  const double x0 = s + sol.e;
  double den = -q * p.d2(x1) - (1.0 - q) * p.d2(x0);
  if (den == 0.0) return p.d1(x1) == 0.0 ? 0 : -1;
  // num = p'(x1) p'(x0) (A(x1) - A(x0)), written without dividing by p'.
  double num = p.d1(x1) * p.d2(x0) - p.d1(x0) * p.d2(x1);
  if (num > 0) return -1;
  if (num < 0) return 1;
  return 0;
}

int exante_fd_sign(const ProductionFunction& p, const CostFunction& c, double s,
                   const ReliabilityModel& rel, double h, double floor) {
  double lo = std::max(0.0, rel.a_bar - h);
  double hi = rel.a_bar + h;
  double plo = effort_exante(p, c, s, {lo, rel.q}).p;
  double phi = effort_exante(p, c, s, {hi, rel.q}).p;
  double diff = phi - plo;
  if (std::abs(diff) < floor) return 0;
  return diff > 0 ? 1 : -1;
}

double vshape_threshold(const ProductionFunction& p, double s, double q, double gamma) {
  if (!(q > 0 && q < 1)) throw ModelError("vshape_threshold: q must lie in (0, 1)");
  const double base = (1.0 - q) * p.d1(s);
  if (base >= gamma) return numeric::kInf;
  auto pred = [&](double z) { return q * p.d1(s + z) + base >= gamma; };
  if (!pred(0.0)) return 0.0;
  double hi = 1.0;
  while (pred(hi)) {
    hi *= 2.0;
    if (hi > 1e15) return numeric::kInf;
  }
  return numeric::sup_where(pred, 0.0, hi);
}

UnreliabilityBadInstance construct_unreliability_bad_instance(double eps) {
  if (!(eps > 0 && eps < 1)) throw ModelError("construct_unreliability_bad_instance: eps in (0, 1)");
  // beta = 1 and (beta - gamma)/beta = eps/2.
  const double beta = 1.0;
  const double gamma = beta * (1.0 - eps / 2.0);
  UnreliabilityBadInstance inst{ProductionFunction::piecewise_linear_capped(beta),
                                CostFunction::linear(gamma),
                                0.0,
                                eps,
                                0.0,
                                1.0 / beta,
                                0.0};
  double p_hi = effort_exante(inst.p, inst.c, inst.s, {inst.a_hi, inst.q}).p;
  double p_lo = effort_exante(inst.p, inst.c, inst.s, {inst.a_lo, inst.q}).p;
  inst.ratio = p_hi / p_lo;
  return inst;
}

ConvexParadoxDiagnostic convex_paradox_condition(const ProductionFunction& p, const CostFunction& c,
                                                 double s, const ReliabilityModel& rel) {
  if (!(rel.q > 0 && rel.q < 1)) throw ModelError("convex_paradox_condition: q must lie in (0, 1)");
  ConvexParadoxDiagnostic out;
  out.e = effort_exante(p, c, s, rel).e;
  const double x0 = s + out.e;
  out.ara_gap = eval_ara(p, x0 + rel.a_bar) - eval_ara(p, x0);
  out.threshold = c.d2(out.e) / ((1.0 - rel.q) * p.d1(x0));
  out.holds = out.ara_gap > out.threshold;
  return out;
}

std::optional<double> smallest_decline_abar(const ProductionFunction& p, const CostFunction& c,
                                            double s, double q, const std::vector<double>& abar_grid) {
  std::vector<double> ps;
  ps.reserve(abar_grid.size());
  double scale = 0.0;
  for (double ab : abar_grid) {
    ps.push_back(effort_exante(p, c, s, {ab, q}).p);
    scale = std::max(scale, std::abs(ps.back()));
  }
  const double tol = 1e-9 * scale;
  for (std::size_t i = 0; i + 2 < ps.size(); ++i) {
    if (ps[i + 1] < ps[i] - tol && ps[i + 2] < ps[i + 1] - tol) return abar_grid[i];
  }
  return std::nullopt;
}

}  // namespace hai
