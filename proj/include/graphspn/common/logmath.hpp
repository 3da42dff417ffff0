#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace graphspn {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double log_add_exp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double log_sum_exp(std::span<const double> xs) {
  double hi = kLogZero;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kLogZero) return kLogZero;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

inline double safe_log(double x) { return x > 0.0 ? std::log(x) : kLogZero; }

}  // namespace graphspn
