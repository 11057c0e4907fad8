#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <span>

namespace spnmap {

/// Natural log of -infinity, used as the exact-zero sentinel.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow; exact zero stays exact.
inline double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

/// log(sum_i exp(terms[i])). Empty input is log(0).
inline double log_sum_exp(std::span<const double> terms) {
  double hi = kLogZero;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == kLogZero) return kLogZero;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

/// A probability stored as its natural logarithm.
///
/// Products of many small factors (amplified reductions) underflow a linear
/// double long before their logarithm loses precision, so every value that
/// flows through the engine is kept in this form. `linear()` is a lossy view.
class LogProb {
 public:
  constexpr LogProb() = default;

  static constexpr LogProb zero() { return LogProb(kLogZero); }
  static constexpr LogProb one() { return LogProb(0.0); }
  static constexpr LogProb from_log(double log_value) { return LogProb(log_value); }
  static LogProb from_linear(double p) {
    return LogProb(p <= 0.0 ? kLogZero : std::log(p));
  }

  constexpr double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  constexpr bool is_zero() const { return log_ == kLogZero; }

  LogProb pow(double exponent) const {
    if (is_zero()) return exponent == 0.0 ? one() : zero();
    return LogProb(log_ * exponent);
  }

  friend LogProb operator*(LogProb a, LogProb b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogProb(a.log_ + b.log_);
  }
  friend LogProb operator/(LogProb a, LogProb b) {
    if (a.is_zero()) return zero();
    return LogProb(a.log_ - b.log_);
  }
  friend LogProb operator+(LogProb a, LogProb b) { return LogProb(log_add(a.log_, b.log_)); }

  friend constexpr auto operator<=>(LogProb a, LogProb b) { return a.log_ <=> b.log_; }
  friend constexpr bool operator==(LogProb a, LogProb b) { return a.log_ == b.log_; }

 private:
  constexpr explicit LogProb(double log_value) : log_(log_value) {}

  double log_ = kLogZero;
};

}  // namespace spnmap
