#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "hai/reference.hpp"

namespace oracle {

std::vector<double> stationary(const std::vector<double>& up_rates, double mu) {
  std::vector<long double> w(up_rates.size() + 1);
  w[0] = 1.0L;
  for (std::size_t k = 0; k < up_rates.size(); ++k) w[k + 1] = w[k] * up_rates[k] / mu;
  long double z = 0.0L;
  for (auto x : w) z += x;
  std::vector<double> out;
  for (auto x : w) out.push_back(static_cast<double>(x / z));
  return out;
}

double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double ara_fd(const hai::ProductionFunction& p, double x, double h) {
  const long double hh = h;
  auto f = [&](long double t) { return hai::reference::production(p, t); };
  long double d1 = (f(x + hh) - f(x - hh)) / (2 * hh);
  long double d2 = (f(x + hh) - 2 * f(x) + f(x - hh)) / (hh * hh);
  return static_cast<double>(-d2 / d1);
}

double effort_grid(const hai::ProductionFunction& p, double gamma, double s, double a, double h) {
  auto u = [&](double e) { return static_cast<double>(hai::reference::production(p, s + e + a)) - gamma * e; };
  const int n = static_cast<int>(20.0 / h);
  int best = 0;
  double bu = u(0.0);
  for (int i = 1; i <= n; ++i) {
    double v = u(i * h);
    if (v >= bu) {
      bu = v;
      best = i;
    }
  }
  if (best == 0 || best == n) return best * h;
  double y0 = u((best - 1) * h), y1 = bu, y2 = u((best + 1) * h);
  double den = y0 - 2 * y1 + y2;
  if (den >= 0) return best * h;
  return best * h + 0.5 * h * (y0 - y2) / den;
}

bool dominates(const std::vector<double>& lo, const std::vector<double>& hi, double tol) {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    a += lo[k];
    b += hi[k];
    if (a > b + tol) return false;
  }
  return true;
}

std::string shape(const std::vector<double>& y, double rel_tol) {
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double tol = rel_tol * std::max(1.0, scale);
  // Signs of the non-negligible steps, with runs merged.
  std::vector<int> runs;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    double d = y[i + 1] - y[i];
    int sgn = d > tol ? 1 : (d < -tol ? -1 : 0);
    if (sgn != 0 && (runs.empty() || runs.back() != sgn)) runs.push_back(sgn);
  }
  if (runs.empty() || runs == std::vector<int>{1}) return "nondecreasing";
  if (runs == std::vector<int>{-1}) return "nonincreasing";
  if (runs == std::vector<int>{-1, 1}) return "v_shaped";
  return "other";
}

int count_modes(const std::vector<double>& pi, double rel_tol) {
  double scale = *std::max_element(pi.begin(), pi.end());
  std::vector<double> v;
  for (double x : pi) {
    if (v.empty() || std::abs(x - v.back()) > rel_tol * scale) v.push_back(x);
  }
  int modes = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool l = i == 0 || v[i - 1] < v[i];
    bool r = i + 1 == v.size() || v[i + 1] < v[i];
    modes += l && r;
  }
  return modes;
}

Posterior posterior(double q, double v) {
  // Joint probabilities of (works, signal).
  double works_good = q * v, works_bad = q * (1 - v);
  double fails_good = (1 - q) * (1 - v), fails_bad = (1 - q) * v;
  Posterior out;
  out.prob_good = works_good + fails_good;
  out.good = out.prob_good > 0 ? works_good / out.prob_good : q;
  double pb = works_bad + fails_bad;
  out.bad = pb > 0 ? works_bad / pb : q;
  return out;
}

double capped_effort(double beta, double gamma, double s, double a_bar, double q) {
  auto p = [&](double x) { return std::min(1.0, beta * x); };
  auto u = [&](double e) { return q * p(s + e + a_bar) + (1 - q) * p(s + e) - gamma * e; };
  std::vector<double> cand = {0.0, 1.0 / beta - s - a_bar, 1.0 / beta - s};
  double best = 0.0, bu = u(0.0);
  for (double e : cand) {
    if (e < 0) continue;
    double v = u(e);
    if (v > bu + 1e-15 || (std::abs(v - bu) <= 1e-15 && e > best)) {
      bu = v;
      best = e;
    }
  }
  return best;
}

}  // namespace oracle
