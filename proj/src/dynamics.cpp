#include "hai/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "hai/errors.hpp"
#include "hai/numeric.hpp"

namespace hai {

void TransitionFunction::validate() const {
  if (!(lambda0 > 0)) throw ModelError("transition: lambda0 must be > 0");
  if (!(lambda1 >= 0)) throw ModelError("transition: lambda1 must be >= 0");
}

void SkillChain::validate() const {
  if (states.size() < 2) throw ModelError("skill chain: needs at least two states");
  if (!std::is_sorted(states.begin(), states.end())) {
    throw ModelError("skill chain: states must be sorted");
  }
  if (states.front() < 0) throw ModelError("skill chain: states must be >= 0");
  if (!(mu > 0)) throw ModelError("skill chain: mu must be > 0");
  lambda.validate();
}

std::vector<double> stationary_from_rates(const std::vector<double>& up_rates, double mu) {
  std::vector<double> logw(up_rates.size() + 1, 0.0);
  const double log_mu = std::log(mu);
  for (std::size_t k = 0; k < up_rates.size(); ++k) {
    if (!(up_rates[k] > 0)) throw ModelError("stationary distribution: rates must be > 0");
    logw[k + 1] = logw[k] + std::log(up_rates[k]) - log_mu;
  }
  double mx = *std::max_element(logw.begin(), logw.end());
  std::vector<double> pi(logw.size());
  double total = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k) {
    pi[k] = std::exp(logw[k] - mx);
    total += pi[k];
  }
  for (auto& v : pi) v /= total;
  return pi;
}

SteadyState steady_state(const SkillChain& chain, const ProductionFunction& p,
                         const CostFunction& c, double a) {
  chain.validate();
  const std::size_t n = chain.size();
  SteadyState out;
  out.effort.resize(n);
  out.productivity.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    EffortSolution sol = effort_static(p, c, chain.states[k], a);
    out.effort[k] = sol.e;
    out.productivity[k] = sol.p;
  }
  out.up_rates.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) out.up_rates[k] = chain.lambda(out.effort[k]);
  out.pi = stationary_from_rates(out.up_rates, chain.mu);
  for (std::size_t k = 0; k < n; ++k) {
    out.P += out.pi[k] * out.productivity[k];
    out.E += out.pi[k] * out.effort[k];
  }
  return out;
}

std::vector<double> interval_endpoints(const std::vector<double>& states, double x_star) {
  std::vector<double> r(states.size());
  for (std::size_t m = 0; m < states.size(); ++m) r[m] = std::max(0.0, x_star - states[m]);
  return r;
}

int interval_index(const std::vector<double>& states, double x_star, double a) {
  const int n = static_cast<int>(states.size());
  auto r = interval_endpoints(states, x_star);
  if (a <= r[n - 1]) return n;
  for (int m = n - 1; m >= 1; --m) {
    if (a <= r[m - 1]) return m;
  }
  return 0;
}

std::vector<double> adjacent_interval_grid(const SkillChain& chain, const ProductionFunction& p,
                                           const CostFunction& c, double a_max,
                                           std::size_t points_per_interval) {
  chain.validate();
  if (points_per_interval < 2) throw ModelError("adjacent_interval_grid: need >= 2 points");
  const double xs = critical_level(p, c);
  auto r = interval_endpoints(chain.states, xs);
  std::vector<double> bounds = {0.0};
  for (auto it = r.rbegin(); it != r.rend(); ++it) {
    if (*it > bounds.back()) bounds.push_back(*it);
  }
  if (a_max > bounds.back()) bounds.push_back(a_max);
  std::vector<double> grid = {0.0};
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    auto seg = numeric::linspace(bounds[i], bounds[i + 1], points_per_interval + 1);
    grid.insert(grid.end(), seg.begin() + 1, seg.end());
  }
  return grid;
}

SweepSeries sweep(const SkillChain& chain, const ProductionFunction& p, const CostFunction& c,
                  const std::vector<double>& a_grid, unsigned workers) {
  chain.validate();
  if (a_grid.empty()) throw ModelError("sweep: empty grid");
  for (std::size_t i = 1; i < a_grid.size(); ++i) {
    if (!(a_grid[i] > a_grid[i - 1])) throw ModelError("sweep: grid must be strictly increasing");
  }
  SweepSeries out;
  out.states = chain.states;
  out.x_star = critical_level(p, c);
  const std::size_t n = a_grid.size();
  out.a = a_grid;
  out.P.resize(n);
  out.E.resize(n);
  out.pi.resize(n);
  out.effort.resize(n);
  out.productivity.resize(n);
  out.interval.resize(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SteadyState ss = steady_state(chain, p, c, a_grid[i]);
      out.P[i] = ss.P;
      out.E[i] = ss.E;
      out.pi[i] = std::move(ss.pi);
      out.effort[i] = std::move(ss.effort);
      out.productivity[i] = std::move(ss.productivity);
      out.interval[i] = interval_index(chain.states, out.x_star, a_grid[i]);
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t b = w * chunk, e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& t : pool) t.join();
  }
  return out;
}

double sensitivity_gap(const SkillChain& chain, const ProductionFunction& p, const CostFunction& c,
                       int m) {
  chain.validate();
  const int n = static_cast<int>(chain.size());
  if (m < 1 || m > n - 1) throw ModelError("sensitivity_gap: m must lie in [1, N-1]");
  const double xs = critical_level(p, c);
  const auto& s = chain.states;
  double transition = 0.0;
  for (int j = 1; j <= m; ++j) {
    double e = s[m - 1] - s[j - 1];
    transition += chain.lambda.d1(e) / chain.lambda(e);
  }
  double x_next = xs + s[m] - s[m - 1];
  double gap = p.value(x_next) - p.value(xs);
  if (!(gap > 0)) {
    throw DegenerateStatesError("sensitivity_gap: p(x* + s_{m+1} - s_m) equals p(x*)");
  }
  return transition - p.d1(x_next) / gap;
}

std::optional<double> mu_bar_two_state(const SkillChain& chain, const ProductionFunction& p,
                                       const CostFunction& c) {
  chain.validate();
  if (chain.size() != 2) throw ModelError("mu_bar_two_state: requires exactly two states");
  const double xs = critical_level(p, c);
  const double x2 = xs + chain.states[1] - chain.states[0];
  const double l0 = chain.lambda(0.0);
  const double dp = p.d1(x2);
  const double den = chain.lambda.d1(0.0) * (p.value(x2) - p.value(xs)) - l0 * dp;
  if (!(den > 0)) return std::nullopt;
  return l0 * l0 * dp / den;
}

namespace {

struct Run {
  std::size_t begin;
  std::size_t end;  // inclusive
};

// Maximal runs of >= 2 consecutive drops over [lo, hi].
std::vector<Run> decline_runs(const std::vector<double>& P, std::size_t lo, std::size_t hi,
                              double tol) {
  std::vector<Run> runs;
  std::size_t i = lo;
  while (i < hi) {
    if (P[i + 1] < P[i] - tol) {
      std::size_t j = i;
      while (j < hi && P[j + 1] < P[j] - tol) ++j;
      if (j - i >= 2) runs.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }
  return runs;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<DeclineRegion> detect_decline_regions(const SweepSeries& series) {
  const std::size_t n = series.a.size();
  std::vector<DeclineRegion> out;
  if (n < 2) return out;
  const double tol = 1e-9 * max_abs(series.P);
  auto r = interval_endpoints(series.states, series.x_star);
  const int big_n = static_cast<int>(series.states.size());
  auto length = [&](int m) {
    if (m == big_n) return r[big_n - 1];
    if (m == 0) return series.a.back() - r[0];
    return r[m - 1] - r[m];
  };
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && series.interval[j + 1] == series.interval[i]) ++j;
    int m = series.interval[i];
    if (length(m) > 0 && j - i + 1 < 16) {
      throw ResolutionError("detect_decline_regions: interval " + std::to_string(m) + " has only " +
                            std::to_string(j - i + 1) + " grid points");
    }
    for (const Run& run : decline_runs(series.P, i, j, tol)) {
      out.push_back({m, series.a[run.begin], series.a[run.end],
                     series.P[run.begin] - series.P[run.end]});
    }
    i = j + 1;
  }
  return out;
}

double max_decline_drop(const std::vector<double>& P) {
  if (P.size() < 3) return 0.0;
  const double tol = 1e-9 * max_abs(P);
  double best = 0.0;
  for (const Run& run : decline_runs(P, 0, P.size() - 1, tol)) {
    best = std::max(best, P[run.begin] - P[run.end]);
  }
  return best;
}

ProductivityDerivative productivity_derivative(const SkillChain& chain, const ProductionFunction& p,
                                               const CostFunction& c, double a, int m) {
  chain.validate();
  if (!c.is_linear()) throw ModelError("productivity_derivative: requires a linear cost");
  const int n = static_cast<int>(chain.size());
  if (m < 0 || m > n) throw ModelError("productivity_derivative: m must lie in [0, N]");
  const double xs = critical_level(p, c);
  const auto& s = chain.states;
  auto r = interval_endpoints(s, xs);
  ProductivityDerivative out;

  if (m == n) {
    if (a < 0 || a > r[n - 1]) throw DomainError("productivity_derivative: a outside I_N");
    out.side = a == r[n - 1] ? DerivativeSide::Left : DerivativeSide::TwoSided;
    out.value = 0.0;
    return out;
  }
  if (m == 0) {
    if (a < r[0]) throw DomainError("productivity_derivative: a outside I_0");
    // No effort anywhere: pi is fixed by lambda(0).
    std::vector<double> rates(n - 1, chain.lambda(0.0));
    auto pi = stationary_from_rates(rates, chain.mu);
    for (int k = 0; k < n; ++k) out.value += pi[k] * p.d1(s[k] + a);
    out.side = a == r[0] ? DerivativeSide::Right : DerivativeSide::TwoSided;
    return out;
  }

  const double lo = r[m], hi = r[m - 1];
  if (a < lo || a > hi) throw DomainError("productivity_derivative: a outside I_m");
  if (a == hi) {
    out.side = DerivativeSide::Left;
  } else if (a == lo) {
    out.side = DerivativeSide::Right;
  } else {
    out.side = DerivativeSide::TwoSided;
  }

  // Terms are assembled as logs and rescaled by their maximum; P' is
  // invariant to a common scale factor.
  const double log_mu = std::log(chain.mu);
  const double log_l0 = std::log(chain.lambda(0.0));
  std::vector<double> logt(n);
  std::vector<double> sens(n, 0.0);  // sum of lambda'/lambda for k <= m
  for (int k = 1; k <= n; ++k) {
    double lt = -(k - 1) * log_mu;
    if (k <= m) {
      for (int i = k; i <= m; ++i) {
        double e = xs - s[i - 1] - a;
        lt -= std::log(chain.lambda(e));
        sens[k - 1] += chain.lambda.d1(e) / chain.lambda(e);
      }
    } else {
      lt += (k - m - 1) * log_l0;
    }
    logt[k - 1] = lt;
  }
  double mx = *std::max_element(logt.begin(), logt.end());
  const double px = p.value(xs);
  double num = 0.0, den = 0.0, num_d = 0.0, den_d = 0.0;
  for (int k = 1; k <= n; ++k) {
    double t = std::exp(logt[k - 1] - mx);
    den += t;
    if (k <= m) {
      den_d += t * sens[k - 1];
    } else {
      num += t * (p.value(s[k - 1] + a) - px);
      num_d += t * p.d1(s[k - 1] + a);
    }
  }
  out.value = (num_d * den - num * den_d) / (den * den);
  return out;
}

bool fosd_check(const std::vector<double>& pi_lo, const std::vector<double>& pi_hi) {
  if (pi_lo.size() != pi_hi.size()) throw ModelError("fosd_check: length mismatch");
  double cl = 0.0, ch = 0.0;
  for (std::size_t k = 0; k < pi_lo.size(); ++k) {
    cl += pi_lo[k];
    ch += pi_hi[k];
    if (cl > ch + 1e-12) return false;
  }
  return true;
}

double skill_ratio_limit(const ProductionFunction& p, double x_star, double s2, double z,
                         double r) {
  double denom = (p.value(x_star) + r * p.value(x_star + s2 - z)) / (1.0 + r);
  return p.value(x_star) / denom;
}

SkillParadoxInstance construct_skill_paradox_instance(double eps, const std::vector<double>& states,
                                                      double lambda0) {
  if (!(eps > 0 && eps < 1)) throw ModelError("construct_skill_paradox_instance: eps in (0, 1)");
  if (states.size() < 2 || states[0] != 0.0) {
    throw ModelError("construct_skill_paradox_instance: states must start at 0");
  }
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (!(states[i] > states[i - 1])) {
      throw ModelError("construct_skill_paradox_instance: states must be strictly increasing");
    }
  }
  const double gamma = 1.0;
  const double z = eps * states[1] / 4.0;
  const double slope_gap = 1e-3 * gamma;
  const double mu = 1.0;
  // lambda(z)/(mu + lambda(z)) >= 1 - eps/4 needs lambda(z)/mu >= 4/eps - 1.
  const double r = 2.0 * (4.0 / eps - 1.0);
  const double lambda1 = (r * mu - lambda0) / z;

  SkillParadoxInstance inst{
      ProductionFunction::kinked_linear(z, gamma + slope_gap, gamma - slope_gap),
      CostFunction::linear(gamma),
      SkillChain{states, TransitionFunction{lambda0, lambda1}, mu},
      0.0,
      z,
      0.0,
      0.0};
  const double xs = critical_level(inst.p, inst.c);
  inst.a_lo = xs - z;
  inst.a_hi = xs;
  inst.ratio = steady_state(inst.chain, inst.p, inst.c, inst.a_hi).P /
               steady_state(inst.chain, inst.p, inst.c, inst.a_lo).P;
  inst.limit_ratio = skill_ratio_limit(inst.p, xs, states[1], z, inst.chain.lambda(z) / mu);
  return inst;
}

SweepSeries exogenous_sweep(const std::vector<double>& states, const std::vector<double>& rates,
                            double mu, const ProductionFunction& p, const CostFunction& c,
                            const std::vector<double>& a_grid) {
  if (states.size() < 2) throw ModelError("exogenous_sweep: needs at least two states");
  if (rates.size() + 1 < states.size()) throw ModelError("exogenous_sweep: too few rates");
  if (!(mu > 0)) throw ModelError("exogenous_sweep: mu must be > 0");
  std::vector<double> up(rates.begin(), rates.begin() + (states.size() - 1));
  auto pi = stationary_from_rates(up, mu);
  SweepSeries out;
  out.states = states;
  out.x_star = critical_level(p, c);
  for (double a : a_grid) {
    std::vector<double> e(states.size()), pk(states.size());
    double P = 0.0, E = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
      EffortSolution sol = effort_static(p, c, states[k], a);
      e[k] = sol.e;
      pk[k] = sol.p;
      P += pi[k] * sol.p;
      E += pi[k] * sol.e;
    }
    out.a.push_back(a);
    out.P.push_back(P);
    out.E.push_back(E);
    out.pi.push_back(pi);
    out.effort.push_back(std::move(e));
    out.productivity.push_back(std::move(pk));
    out.interval.push_back(interval_index(states, out.x_star, a));
  }
  return out;
}

std::optional<double> empirical_mu_bar(SkillChain chain, const ProductionFunction& p,
                                       const CostFunction& c, const std::vector<double>& mu_grid,
                                       double a_max) {
  std::vector<double> grid = mu_grid;
  std::sort(grid.begin(), grid.end());
  for (double mu : grid) {
    chain.mu = mu;
    auto a_grid = adjacent_interval_grid(chain, p, c, a_max);
    if (!detect_decline_regions(sweep(chain, p, c, a_grid)).empty()) return mu;
  }
  return std::nullopt;
}

}  // namespace hai
