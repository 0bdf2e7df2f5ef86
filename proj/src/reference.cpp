#include "hai/reference.hpp"

#include <cmath>
#include <variant>

#include "hai/errors.hpp"

namespace hai::reference {

namespace {

long double param(const ProductionFunction& p, const char* key) {
  auto it = p.params().find(key);
  if (it == p.params().end()) throw ModelError(std::string("reference: missing parameter ") + key);
  return it->second;
}

}  // namespace

bool supported(const ProductionFunction& p) {
  switch (p.family()) {
    case Family::Translog:
    case Family::Transcendental:
      return false;
    case Family::FromDistribution:
      return !std::holds_alternative<TruncatedGaussianDist>(*p.distribution());
    default:
      return true;
  }
}

long double production(const ProductionFunction& p, long double x) {
  switch (p.family()) {
    case Family::PiecewiseLinearCapped:
      return std::min(1.0L, param(p, "beta") * x);
    case Family::Fractional:
      return param(p, "scale") * x / (1.0L + x);
    case Family::PowerLaw:
      return param(p, "coef") * std::pow(x, param(p, "exponent"));
    case Family::Logarithmic:
      return std::log1p(param(p, "c") * x);
    case Family::GaussianIntegral:
      return 0.5L * std::sqrt(3.141592653589793238462643383279502884L) * std::erf(x);
    case Family::ExpoPower:
      return 1.0L - std::exp(-param(p, "b") * std::pow(x, param(p, "c")));
    case Family::TruncatedQuadratic: {
      long double c1 = param(p, "c1"), c2 = param(p, "c2");
      long double top = c1 / (2.0L * c2);
      long double y = std::min(x, top);
      return c1 * y - c2 * y * y;
    }
    case Family::KinkedLinear: {
      long double k = param(p, "kink");
      if (x <= k) return param(p, "left_slope") * x;
      return param(p, "left_slope") * k + param(p, "right_slope") * (x - k);
    }
    case Family::Perturbed: {
      long double beta = param(p, "beta"), d = param(p, "delta");
      long double x0 = 1.0L / beta - d;
      if (x <= x0) return beta * x;
      if (x >= 1.0L / beta + d) return 1.0L;
      return beta * x - beta / (4.0L * d) * (x - x0) * (x - x0);
    }
    case Family::FromDistribution: {
      const auto& d = *p.distribution();
      if (auto* u = std::get_if<UniformDist>(&d)) {
        long double lo = u->lo, hi = u->hi;
        if (x <= lo) return x;
        if (x >= hi) return 0.5L * (lo + hi);
        return lo + ((hi - lo) * (hi - lo) - (hi - x) * (hi - x)) / (2.0L * (hi - lo));
      }
      if (auto* e = std::get_if<ExponentialDist>(&d)) {
        long double r = e->rate;
        return -std::expm1(-r * x) / r;
      }
      break;
    }
    default:
      break;
  }
  throw ModelError("reference: no independent formula for " + p.family_name());
}

long double argmax(const std::function<long double(long double)>& u, long double hi,
                   long double grid_step) {
  if (!(hi > 0)) return 0.0L;
  const long n = std::max(2L, static_cast<long>(std::ceil(hi / grid_step)));
  const long double h = hi / n;
  long best = 0;
  long double best_u = u(0.0L);
  for (long i = 1; i <= n; ++i) {
    long double v = u(h * i);
    if (v >= best_u) {
      best_u = v;
      best = i;
    }
  }
  long double lo = std::max(0.0L, h * (best - 1)), up = std::min(hi, h * (best + 1));
  const long double phi = 0.5L * (std::sqrt(5.0L) - 1.0L);
  long double x1 = up - phi * (up - lo), x2 = lo + phi * (up - lo);
  long double f1 = u(x1), f2 = u(x2);
  for (int it = 0; it < 200 && up - lo > 1e-15L; ++it) {
    if (f1 > f2) {
      up = x2;
      x2 = x1;
      f2 = f1;
      x1 = up - phi * (up - lo);
      f1 = u(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (up - lo);
      f2 = u(x2);
    }
  }
  long double x = 0.5L * (lo + up);
  // Boundary maxima: golden section cannot land exactly on an endpoint.
  if (best == 0 && best_u >= u(x)) x = 0.0L;
  if (best == n && u(hi) >= u(x)) x = hi;
  return x;
}

namespace {

long double cost(const CostFunction& c, long double e) {
  return static_cast<long double>(c.c1()) * e + static_cast<long double>(c.c2()) * e * e;
}

long double search_bound(const ProductionFunction& p, const CostFunction& c, double s, double a) {
  return static_cast<long double>(critical_level(p, c)) + s + a + 1.0L;
}

}  // namespace

Solution effort_basic(const ProductionFunction& p, const CostFunction& c, double s, double a) {
  const long double base = static_cast<long double>(s) + a;
  auto u = [&](long double e) { return production(p, base + e) - cost(c, e); };
  long double e = argmax(u, search_bound(p, c, s, a));
  return {static_cast<double>(e), static_cast<double>(production(p, base + e))};
}

Solution effort_exante(const ProductionFunction& p, const CostFunction& c, double s, double a_bar,
                       double q) {
  const long double qq = q;
  auto prod = [&](long double e) {
    return qq * production(p, s + e + static_cast<long double>(a_bar)) +
           (1.0L - qq) * production(p, s + e);
  };
  auto u = [&](long double e) { return prod(e) - cost(c, e); };
  long double e = argmax(u, search_bound(p, c, s, a_bar));
  return {static_cast<double>(e), static_cast<double>(prod(e))};
}

}  // namespace hai::reference
