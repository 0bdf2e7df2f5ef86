#include "hai/literacy.hpp"

#include <algorithm>
#include <cmath>

#include "hai/errors.hpp"
#include "hai/numeric.hpp"

namespace hai {

VerificationCurve VerificationCurve::saturating_affine(double kappa) {
  if (!(kappa >= 0)) throw ModelError("saturating_affine: kappa must be >= 0");
  return VerificationCurve(Kind::SaturatingAffine, kappa);
}

VerificationCurve VerificationCurve::exponential_approach(double kappa) {
  if (!(kappa > 0)) throw ModelError("exponential_approach: kappa must be > 0");
  return VerificationCurve(Kind::ExponentialApproach, kappa);
}

VerificationCurve VerificationCurve::constant(double level) {
  if (!(level >= 0.5 && level <= 1.0)) throw ModelError("constant verification: level in [1/2, 1]");
  return VerificationCurve(Kind::Constant, level);
}

double VerificationCurve::value(double s) const {
  switch (kind_) {
    case Kind::SaturatingAffine:
      return std::min(1.0, 0.5 + param_ * s);
    case Kind::ExponentialApproach:
      return 1.0 - 0.5 * std::exp(-param_ * s);
    case Kind::Constant:
      return param_;
  }
  return 0.5;
}

double VerificationCurve::d1(double s) const {
  switch (kind_) {
    case Kind::SaturatingAffine:
      return 0.5 + param_ * s < 1.0 ? param_ : 0.0;
    case Kind::ExponentialApproach:
      return 0.5 * param_ * std::exp(-param_ * s);
    case Kind::Constant:
      return 0.0;
  }
  return 0.0;
}

bool VerificationCurve::is_kink(double s) const {
  if (kind_ != Kind::SaturatingAffine || param_ == 0.0) return false;
  double k = 0.5 / param_;
  return std::abs(s - k) <= 1e-12 * std::max(1.0, k);
}

double VerificationCurve::inverse(double t) const {
  if (value(0.0) >= t) return 0.0;
  switch (kind_) {
    case Kind::Constant:
      return numeric::kInf;
    case Kind::SaturatingAffine: {
      if (param_ == 0.0 || t > 1.0) return numeric::kInf;
      double hi = 0.5 / param_;
      return numeric::sup_where([&](double s) { return value(s) < t; }, 0.0, hi);
    }
    case Kind::ExponentialApproach: {
      if (t >= 1.0) return numeric::kInf;
      double hi = 1.0;
      while (value(hi) < t) hi *= 2.0;
      return numeric::sup_where([&](double s) { return value(s) < t; }, 0.0, hi);
    }
  }
  return numeric::kInf;
}

std::string VerificationCurve::kind_name() const {
  switch (kind_) {
    case Kind::SaturatingAffine:
      return "saturating_affine";
    case Kind::ExponentialApproach:
      return "exponential_approach";
    case Kind::Constant:
      return "constant";
  }
  return "constant";
}

void LiteracyModel::validate() const {
  if (!(beta > gamma && gamma > 0)) throw ModelError("literacy: requires beta > gamma > 0");
  if (!(q > 0 && q <= 1)) throw ModelError("literacy: q must lie in (0, 1]");
  if (lambda) lambda->validate();
}

PosteriorPair posteriors(double q, double v) {
  if (q >= 1.0) return {1.0, 1.0};
  if (q <= 0.0) return {0.0, 0.0};
  PosteriorPair out;
  out.q1 = q * v / (q * v + (1.0 - q) * (1.0 - v));
  out.q0 = q * (1.0 - v) / (q * (1.0 - v) + (1.0 - q) * v);
  return out;
}

BayesEffort bayes_effort(const LiteracyModel& model, double s, double a_bar) {
  model.validate();
  const double v = model.v.value(s);
  BayesEffort out;
  auto post = posteriors(model.q, v);
  out.q1 = post.q1;
  out.q0 = post.q0;
  out.prob_good = model.q * v + (1.0 - model.q) * (1.0 - v);
  const auto p = model.production();
  const auto c = model.cost();
  auto good = effort_exante(p, c, s, {a_bar, out.q1});
  auto bad = effort_exante(p, c, s, {a_bar, out.q0});
  const double pg = out.prob_good, pb = 1.0 - out.prob_good;
  out.e_b = pg * good.e + pb * bad.e;
  out.p_b = pg * good.p + pb * bad.p;
  return out;
}

MarginalReturnGap marginal_return_gap(const LiteracyModel& model) {
  MarginalReturnGap out;
  out.omega = (model.beta - model.gamma) - model.q * model.beta;
  out.crossing = out.omega < 0 ? CrossingCurve::Q0 : CrossingCurve::Q1;
  return out;
}

CriticalSkill critical_skill(const LiteracyModel& model) {
  model.validate();
  if (model.q >= 1.0) throw ModelError("critical_skill: q must be < 1");
  const double omega = marginal_return_gap(model).omega;
  const double r = model.q / (1.0 - model.q) * model.gamma / (model.beta - model.gamma);
  CriticalSkill out;
  out.target = omega < 0 ? r / (r + 1.0) : 1.0 / (r + 1.0);
  out.s_tilde = model.v.inverse(out.target);
  out.crossing = std::isfinite(out.s_tilde);
  return out;
}

std::string to_string(Clause c) {
  switch (c) {
    case Clause::None:
      return "none";
    case Clause::A:
      return "a";
    case Clause::B:
      return "b";
  }
  return "none";
}

ConditionDiagnostics check_condition_multimodal(const LiteracyModel& model) {
  ConditionDiagnostics out;
  out.omega = marginal_return_gap(model).omega;
  auto cs = critical_skill(model);
  out.s_tilde = cs.s_tilde;
  if (out.omega < 0) {
    out.clause = Clause::A;
  } else if (model.q < 0.5) {
    out.clause = Clause::B;
  }
  if (!cs.crossing) {
    out.bound = 1.0 / model.beta;
    return out;
  }
  out.v_slope = model.v.d1(out.s_tilde);
  out.kink_flag = model.v.is_kink(out.s_tilde);
  out.bound = 1.0 / model.beta;
  if (out.omega >= 0) {
    double den = (1.0 - 2.0 * model.q) * out.v_slope;
    double num = (1.0 - 2.0 * model.q) * model.v.value(out.s_tilde) + model.q;
    out.bound = den > 0 ? 1.0 / model.beta - num / den : -numeric::kInf;
  }
  out.holds = out.clause != Clause::None && out.s_tilde < out.bound;
  return out;
}

namespace {

bool has_increase(const std::vector<double>& e) {
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    if (e[i + 1] > e[i] + 1e-12) return true;
  }
  return false;
}

std::vector<double> refined_skill_grid(const LiteracyModel& model, double a_bar) {
  const double top = 1.0 / model.beta;
  std::vector<double> g = numeric::linspace(0.0, 1.5 * top, 3001);
  std::vector<double> anchors = {top - a_bar};
  if (model.q < 1.0) {
    auto cs = critical_skill(model);
    if (cs.crossing) anchors.push_back(cs.s_tilde);
  }
  for (double x : anchors) {
    if (!(x >= 0)) continue;
    for (int k = -2; k <= 64; ++k) {
      double t = x + k * 1e-6 * std::max(1.0, top);
      if (t >= 0) g.push_back(t);
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

bool effort_nonmonotone(const LiteracyModel& model, double a_bar) {
  std::vector<double> e;
  for (double s : refined_skill_grid(model, a_bar)) e.push_back(bayes_effort(model, s, a_bar).e_b);
  return has_increase(e);
}

std::optional<double> estimate_a_tilde(const LiteracyModel& model) {
  auto cond = check_condition_multimodal(model);
  if (!cond.holds) return std::nullopt;
  if (cond.omega < 0) return 0.0;
  double hi = std::max(1e-6, 1.0 / model.beta - cond.s_tilde) + 0.1;
  if (!effort_nonmonotone(model, hi)) return std::nullopt;
  double lo = 0.0;
  for (int i = 0; i < 50; ++i) {
    double mid = 0.5 * (lo + hi);
    if (effort_nonmonotone(model, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

EffortProfile effort_skill_profile(const LiteracyModel& model, double a_bar,
                                   const std::vector<double>& s_grid) {
  model.validate();
  if (s_grid.empty()) throw ModelError("effort_skill_profile: empty grid");
  EffortProfile out;
  if (model.q < 1.0) {
    auto cs = critical_skill(model);
    if (cs.crossing) {
      auto near = std::count_if(s_grid.begin(), s_grid.end(), [&](double s) {
        return std::abs(s - cs.s_tilde) <= 0.1;
      });
      if (near < 64) {
        throw ResolutionError("effort_skill_profile: only " + std::to_string(near) +
                              " grid points within 0.1 of the critical skill");
      }
    }
  }
  out.s = s_grid;
  for (double s : s_grid) out.values.push_back(bayes_effort(model, s, a_bar));
  for (std::size_t i = 0; i + 1 < s_grid.size(); ++i) {
    if (out.values[i + 1].e_b > out.values[i].e_b + 1e-12) out.witnesses.push_back(i);
  }
  out.decreasing = out.witnesses.empty();
  if (model.q < 1.0) out.a_tilde = estimate_a_tilde(model);
  return out;
}

std::vector<std::size_t> mode_indices(const std::vector<double>& pi) {
  std::vector<std::size_t> modes;
  if (pi.empty()) return modes;
  double scale = 0.0;
  for (double x : pi) scale = std::max(scale, std::abs(x));
  const double tol = 1e-12 * scale;
  // Collapse into plateaus [begin, end).
  std::vector<std::pair<std::size_t, std::size_t>> plateaus;
  std::size_t i = 0;
  while (i < pi.size()) {
    std::size_t j = i + 1;
    while (j < pi.size() && std::abs(pi[j] - pi[i]) <= tol) ++j;
    plateaus.emplace_back(i, j);
    i = j;
  }
  for (std::size_t k = 0; k < plateaus.size(); ++k) {
    double v = pi[plateaus[k].first];
    bool left_lower = k == 0 || pi[plateaus[k - 1].first] < v;
    bool right_lower = k + 1 == plateaus.size() || pi[plateaus[k + 1].first] < v;
    if (left_lower && right_lower) modes.push_back(plateaus[k].first);
  }
  return modes;
}

int modality(const std::vector<double>& pi) { return static_cast<int>(mode_indices(pi).size()); }

std::vector<double> literacy_stationary(const LiteracyModel& model, double a_bar, double mu,
                                        const std::vector<double>& states) {
  if (!model.lambda) throw ModelError("literacy_stationary: transition function required");
  if (states.size() < 2) throw ModelError("literacy_stationary: needs at least two states");
  std::vector<double> rates;
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    rates.push_back((*model.lambda)(bayes_effort(model, states[k], a_bar).e_b));
  }
  return stationary_from_rates(rates, mu);
}

std::optional<ModalityReport> search_multimodal_instance(const LiteracyModel& model, double a_bar) {
  model.validate();
  if (!model.lambda) throw ModelError("search_multimodal_instance: transition function required");
  const auto grid = refined_skill_grid(model, a_bar);
  const std::size_t n = grid.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = (*model.lambda)(bayes_effort(model, grid[i], a_bar).e_b);
  const double tol = 1e-12 * std::max(1.0, *std::max_element(f.begin(), f.end()));

  // Unimodal segment: the first rise, its peak, and the descent after it.
  std::size_t left = n;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (f[i + 1] > f[i] + tol) {
      left = i;
      break;
    }
  }
  if (left == n) return std::nullopt;
  std::size_t peak = left + 1;
  while (peak + 1 < n && f[peak + 1] >= f[peak] - tol && f[peak + 1] >= f[peak]) ++peak;
  std::size_t right = peak;
  while (right + 1 < n && f[right + 1] <= f[right] + tol) ++right;
  if (right == peak) return std::nullopt;

  const double mu = std::sqrt(std::max(f[left], f[right]) * f[peak]);

  // Sub-segments: ratio < 1 ending at `left`, > 1 around the peak, < 1 after.
  std::size_t s1_begin = left;
  while (s1_begin > 0 && f[s1_begin - 1] < mu) --s1_begin;
  std::size_t s3_begin = peak;
  while (s3_begin < right && f[s3_begin] >= mu) ++s3_begin;
  if (!(f[left] < mu && f[peak] > mu && f[s3_begin] < mu)) return std::nullopt;

  // Keep S3 states clearly below mu so the witness is not marginal.
  const double deep = std::sqrt(mu * f[right]);
  std::size_t s3_deep = s3_begin;
  while (s3_deep < right && f[s3_deep] > deep) ++s3_deep;
  std::vector<std::size_t> idx = {(s1_begin + left) / 2, left, peak, s3_deep, right};
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  ModalityReport rep;
  rep.mu = mu;
  for (std::size_t i : idx) rep.states.push_back(grid[i]);
  rep.pi = literacy_stationary(model, a_bar, mu, rep.states);
  rep.modes = mode_indices(rep.pi);
  rep.mode_count = static_cast<int>(rep.modes.size());
  if (rep.mode_count < 2) return std::nullopt;

  std::vector<double> bigger = rep.states;
  for (std::size_t k = 0; k + 1 < rep.states.size(); ++k) {
    bigger.push_back(0.5 * (rep.states[k] + rep.states[k + 1]));
  }
  std::sort(bigger.begin(), bigger.end());
  rep.superset_stable = modality(literacy_stationary(model, a_bar, mu, bigger)) >= 2;
  return rep;
}

}  // namespace hai
