#include "hai/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace hai::numeric {

double sup_where(const std::function<bool(double)>& pred, double lo, double hi) {
  if (!pred(lo)) return lo;
  if (pred(hi)) return hi;
  for (int i = 0; i < 2000; ++i) {
    double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect_root: root not bracketed");
  for (int i = 0; i < 2000; ++i) {
    double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = lo + t * (hi - lo);
  }
  out[n - 1] = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (lo <= 0 || hi <= 0) throw std::invalid_argument("logspace: bounds must be positive");
  auto exps = linspace(std::log(lo), std::log(hi), n);
  for (auto& v : exps) v = std::exp(v);
  if (n > 0) {
    exps.front() = lo;
    exps.back() = hi;
  }
  return exps;
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
  static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

}  // namespace hai::numeric
