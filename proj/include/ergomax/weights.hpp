#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "ergomax/core.hpp"
#include "ergomax/report.hpp"

namespace ergomax {

/// Strictly positive sequence on a window; the A_p machinery needs the dual
/// power w^{-1/(p-1)} finite, so zero entries are rejected at construction.
template <typename T>
class WeightSequence {
 public:
  explicit WeightSequence(WindowedSequence<T> base) : base_(std::move(base)) {
    for (std::int64_t m = base_.window().lo; m <= base_.window().hi; ++m)
      if (!(base_[m] > T(0)))
        throw std::invalid_argument("WeightSequence: non-positive entry at index " + std::to_string(m));
  }

  const WindowedSequence<T>& base() const { return base_; }
  IntegerInterval window() const { return base_.window(); }

  const T at(std::int64_t m) const {
    if (!window().contains(m))
      throw std::out_of_range("WeightSequence: index " + std::to_string(m) + " outside window");
    return base_[m];
  }

 private:
  WindowedSequence<T> base_;
};

inline WeightSequence<Rational> to_rational(const WeightSequence<double>& w) {
  return WeightSequence<Rational>(to_rational(w.base()));
}

template <typename T>
struct ApReport {
  double p = 1.0;
  T constant{1};
  IntegerInterval witness{0, 0};
  double conjugate = std::numeric_limits<double>::infinity();  // p' with 1/p + 1/p' = 1
  int atom = -1;            // ergodic variant: attaining atom (-1 on the Z side)
  std::int64_t radius = 0;  // ergodic variant: attaining orbit radius N
};

namespace detail {

template <typename T>
std::vector<T> dual_power_values(const WeightSequence<T>& w, double p) {
  std::vector<T> dual;
  dual.reserve(static_cast<std::size_t>(w.window().cardinality()));
  for (std::int64_t m = w.window().lo; m <= w.window().hi; ++m) {
    if constexpr (is_exact_scalar_v<T>) {
      if (p != 2.0)
        throw std::domain_error("A_p in exact mode requires p = 2 (dual exponent must be an integer)");
      dual.push_back(T(1) / w.at(m));
    } else {
      dual.push_back(std::pow(w.at(m), -1.0 / (p - 1.0)));
    }
  }
  return dual;
}

}  // namespace detail

/// Windowed A_p constant: the maximum over subintervals I of the window of
/// (avg_I w) * (avg_I w^{-1/(p-1)})^{p-1} for p > 1, and of
/// (avg_I w) / min_I w for p = 1. Exact mode supports p in {1, 2}.
template <typename T>
ApReport<T> ap_constant(const WeightSequence<T>& w, double p) {
  if (p < 1.0) throw std::invalid_argument("ap_constant: p must be >= 1");
  const IntegerInterval window = w.window();
  ApReport<T> report;
  report.p = p;
  report.conjugate = p > 1.0 ? p / (p - 1.0) : std::numeric_limits<double>::infinity();
  report.constant = T(0);
  bool taken = false;
  auto consider = [&](const T& value, std::int64_t lo, std::int64_t hi) {
    const std::int64_t len = hi - lo + 1;
    if (!taken || value > report.constant ||
        (value == report.constant && (len < report.witness.cardinality() ||
                                      (len == report.witness.cardinality() && lo < report.witness.lo)))) {
      report.constant = value;
      report.witness = {lo, hi};
      taken = true;
    }
  };
  if (p == 1.0) {
    for (std::int64_t lo = window.lo; lo <= window.hi; ++lo) {
      T sum(0);
      T min_w = w.at(lo);
      for (std::int64_t hi = lo; hi <= window.hi; ++hi) {
        sum += w.at(hi);
        min_w = std::min(min_w, w.at(hi));
        consider(sum / (num::from_int<T>(hi - lo + 1) * min_w), lo, hi);
      }
    }
  } else {
    const std::vector<T> dual = detail::dual_power_values(w, p);
    for (std::int64_t lo = window.lo; lo <= window.hi; ++lo) {
      T sum_w(0), sum_dual(0);
      for (std::int64_t hi = lo; hi <= window.hi; ++hi) {
        sum_w += w.at(hi);
        sum_dual += dual[static_cast<std::size_t>(hi - window.lo)];
        const T len = num::from_int<T>(hi - lo + 1);
        consider((sum_w / len) * num::pow_real<T>(sum_dual / len, p - 1.0), lo, hi);
      }
    }
  }
  return report;
}

/// Early-exit answer to "does the windowed A_p constant exceed the threshold".
template <typename T>
bool ap_constant_exceeds(const WeightSequence<T>& w, double p, const T& threshold) {
  if (p < 1.0) throw std::invalid_argument("ap_constant_exceeds: p must be >= 1");
  const IntegerInterval window = w.window();
  if (p == 1.0) {
    for (std::int64_t lo = window.lo; lo <= window.hi; ++lo) {
      T sum(0);
      T min_w = w.at(lo);
      for (std::int64_t hi = lo; hi <= window.hi; ++hi) {
        sum += w.at(hi);
        min_w = std::min(min_w, w.at(hi));
        if (sum > threshold * num::from_int<T>(hi - lo + 1) * min_w) return true;
      }
    }
    return false;
  }
  const std::vector<T> dual = detail::dual_power_values(w, p);
  for (std::int64_t lo = window.lo; lo <= window.hi; ++lo) {
    T sum_w(0), sum_dual(0);
    for (std::int64_t hi = lo; hi <= window.hi; ++hi) {
      sum_w += w.at(hi);
      sum_dual += dual[static_cast<std::size_t>(hi - window.lo)];
      const T len = num::from_int<T>(hi - lo + 1);
      if ((sum_w / len) * num::pow_real<T>(sum_dual / len, p - 1.0) > threshold) return true;
    }
  }
  return false;
}

/// sum_k |a(k)|^p w(k); the support of a must sit inside the weight window.
template <typename T>
T weighted_power_sum(const WindowedSequence<T>& a, const WeightSequence<T>& w, double p) {
  if (p < 1.0) throw std::invalid_argument("weighted_power_sum: p must be >= 1");
  const auto support = a.support();
  if (!support) return T(0);
  if (!w.window().contains(*support))
    throw std::invalid_argument("weighted_power_sum: support escapes the weight window");
  T total(0);
  for (std::int64_t m = support->lo; m <= support->hi; ++m) {
    const T v = num::abs_value(a[m]);
    if (v == T(0)) continue;
    total += num::pow_real(v, p) * w.at(m);
  }
  return total;
}

inline double weighted_norm(const WindowedSequence<double>& a, const WeightSequence<double>& w,
                            double p) {
  return std::pow(weighted_power_sum(a, w, p), 1.0 / p);
}

/// w(S) = sum over S of w(k); S must sit inside the window.
template <typename T>
T weight_measure(const WeightSequence<T>& w, const std::vector<std::int64_t>& set) {
  T total(0);
  for (const std::int64_t m : set) total += w.at(m);
  return total;
}

template <typename T>
T weight_measure(const WeightSequence<T>& w, const IntegerInterval& interval) {
  T total(0);
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m) total += w.at(m);
  return total;
}

/// Interval inequality w(I) (a(I)/|I|)^p <= C sum_{m in I} |a(m)|^p w(m),
/// with C the windowed A_p constant unless one is supplied. Values of a are
/// taken in absolute value.
template <typename T>
InequalityReport check_interval_inequality_A(const WeightSequence<T>& w, double p,
                                             const WindowedSequence<T>& a, const IntegerInterval& interval,
                                             std::optional<std::type_identity_t<T>> constant = std::nullopt) {
  if (!w.window().contains(interval))
    throw std::invalid_argument("check_interval_inequality_A: interval escapes the weight window");
  T abs_sum(0);
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m) abs_sum += num::abs_value(a[m]);
  if (abs_sum == T(0))
    throw std::invalid_argument("check_interval_inequality_A: a vanishes on the interval");
  const T c = constant ? *constant : ap_constant(w, p).constant;
  const T avg = abs_sum / num::from_int<T>(interval.cardinality());
  const T lhs = weight_measure(w, interval) * num::pow_real(avg, p);
  T rhs(0);
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m) {
    const T v = num::abs_value(a[m]);
    if (v == T(0)) continue;
    rhs += num::pow_real(v, p) * w.at(m);
  }
  InequalityReport report = make_report("thm2_interval_a", "", lhs, rhs, c);
  report.constant = num::as_double(c);
  report.aux["p"] = p;
  if (!report.pass) report.witness = "interval " + interval.to_string();
  return report;
}

/// Set form w(I) (|S|/|I|)^p <= C w(S), checked by specializing the interval
/// inequality to the indicator of S.
template <typename T>
InequalityReport check_interval_inequality_B(const WeightSequence<T>& w, double p,
                                             const std::vector<std::int64_t>& set,
                                             const IntegerInterval& interval,
                                             std::optional<std::type_identity_t<T>> constant = std::nullopt) {
  if (set.empty()) throw std::invalid_argument("check_interval_inequality_B: empty set");
  for (const std::int64_t m : set)
    if (!interval.contains(m))
      throw std::invalid_argument("check_interval_inequality_B: set escapes the interval");
  WindowedSequence<T> indicator = WindowedSequence<T>::zeros(interval);
  std::vector<T> values(static_cast<std::size_t>(interval.cardinality()), T(0));
  for (const std::int64_t m : set) values[static_cast<std::size_t>(m - interval.lo)] = T(1);
  indicator = WindowedSequence<T>(interval.lo, std::move(values));
  InequalityReport report = check_interval_inequality_A(w, p, indicator, interval, constant);
  report.checker = "thm2_interval_b";
  report.aux["set_size"] = static_cast<double>(set.size());
  return report;
}

}  // namespace ergomax
