#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace hai::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest x in [lo, hi] with pred(x) true, assuming pred is true on a prefix
// of the interval. Returns lo when pred(lo) is false and hi when pred(hi) is
// true. Iterates until the bracket stops shrinking in double precision.
double sup_where(const std::function<bool(double)>& pred, double lo, double hi);

// Root of a monotone function f on [lo, hi] with f(lo), f(hi) of opposite
// signs (or zero). Bisects to full double precision.
double bisect_root(const std::function<double(double)>& f, double lo, double hi);

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

double central_difference(const std::function<double(double)>& f, double x, double h);

double normal_cdf(double z);
double normal_pdf(double z);

// Total variation distance between two probability vectors.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace hai::numeric
