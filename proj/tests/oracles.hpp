#pragma once

// Test-only brute-force oracles. These stay independent of the library's
// prefix-table code paths: every interval sum is a direct loop over entries.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <ergomax/core.hpp>
#include <ergomax/weights.hpp>

namespace oracle {

template <typename T>
T direct_abs_sum(const ergomax::WindowedSequence<T>& a, std::int64_t lo, std::int64_t hi) {
  if constexpr (std::is_same_v<T, double>) {
    double s = 0.0, c = 0.0;  // Neumaier, so the oracle itself is accurate
    for (std::int64_t m = lo; m <= hi; ++m) {
      const double v = std::abs(a[m]);
      const double t = s + v;
      if (std::abs(s) >= v)
        c += (s - t) + v;
      else
        c += (v - t) + s;
      s = t;
    }
    return s + c;
  } else {
    T s(0);
    for (std::int64_t m = lo; m <= hi; ++m) s += ergomax::num::abs_value(a[m]);
    return s;
  }
}

template <typename T>
T direct_signed_sum(const ergomax::WindowedSequence<T>& a, std::int64_t lo, std::int64_t hi) {
  if constexpr (std::is_same_v<T, double>) {
    double s = 0.0, c = 0.0;
    for (std::int64_t m = lo; m <= hi; ++m) {
      const double v = a[m];
      const double t = s + v;
      if (std::abs(s) >= std::abs(v))
        c += (s - t) + v;
      else
        c += (v - t) + s;
      s = t;
    }
    return s + c;
  } else {
    T s(0);
    for (std::int64_t m = lo; m <= hi; ++m) s += a[m];
    return s;
  }
}

template <typename T>
T centered(const ergomax::WindowedSequence<T>& a, std::int64_t m,
           std::optional<std::int64_t> truncation = std::nullopt) {
  const auto w = a.window();
  std::int64_t r_max = std::llabs(m - w.lo) + std::llabs(w.hi - m) + 2;
  if (truncation) r_max = std::min(r_max, *truncation - 1);
  T best(0);
  for (std::int64_t r = 1; r <= r_max; ++r)
    best = std::max(best, T(direct_abs_sum(a, m - r, m + r) / ergomax::num::from_int<T>(2 * r + 1)));
  return best;
}

template <typename T>
T uncentered(const ergomax::WindowedSequence<T>& a, std::int64_t m,
             std::optional<std::int64_t> truncation = std::nullopt) {
  const auto w = a.window();
  const std::int64_t range_lo = std::min(m, w.lo - 1);
  const std::int64_t range_hi = std::max(m, w.hi + 1);
  T best(0);
  for (std::int64_t lo = range_lo; lo <= m; ++lo) {
    for (std::int64_t hi = m; hi <= range_hi; ++hi) {
      if (truncation && hi - lo + 1 > *truncation) continue;
      best = std::max(best,
                      T(direct_abs_sum(a, lo, hi) / ergomax::num::from_int<T>(hi - lo + 1)));
    }
  }
  return best;
}

template <typename T>
T dyadic(const ergomax::WindowedSequence<T>& a, std::int64_t m) {
  const auto w = a.window();
  T best(0);
  for (int level = 1; level <= ergomax::kMaxDyadicLevel; ++level) {
    const ergomax::DyadicInterval d = ergomax::dyadic_containing(m, level);
    const std::int64_t lo = std::max(d.lo(), w.lo);
    const std::int64_t hi = std::min(d.hi(), w.hi);
    const T sum = lo <= hi ? direct_abs_sum(a, lo, hi) : T(0);
    best = std::max(best, T(sum / ergomax::num::from_int<T>(d.cardinality())));
    // the chain through m >= 1 saturates at [1, 2^N], through m <= 0 at
    // [-2^N+1, 0]; past saturation averages only halve
    const bool saturated = (m >= 1 && d.lo() <= std::max<std::int64_t>(w.lo, 1) && d.hi() >= w.hi) ||
                           (m <= 0 && d.lo() <= w.lo && d.hi() >= std::min<std::int64_t>(w.hi, 0));
    if (saturated) break;
  }
  return best;
}

template <typename T>
T sharp(const ergomax::WindowedSequence<T>& a, std::int64_t m, const ergomax::IntegerInterval& range) {
  T best(0);
  for (std::int64_t lo = range.lo; lo <= m; ++lo) {
    for (std::int64_t hi = m; hi <= range.hi; ++hi) {
      const T len = ergomax::num::from_int<T>(hi - lo + 1);
      const T mean = direct_signed_sum(a, lo, hi) / len;
      T dev(0);
      for (std::int64_t k = lo; k <= hi; ++k) dev += ergomax::num::abs_value(T(a[k] - mean));
      best = std::max(best, T(dev / len));
    }
  }
  return best;
}

/// sup_I inf_b mean |a - b| by grid refinement of the inner 1-d convex
/// minimization (double precision only).
inline double best_constant_grid(const ergomax::WindowedSequence<double>& a,
                                 const ergomax::IntegerInterval& range) {
  double best = 0.0;
  for (std::int64_t lo = range.lo; lo <= range.hi; ++lo) {
    for (std::int64_t hi = lo; hi <= range.hi; ++hi) {
      double b_lo = a[lo], b_hi = a[lo];
      for (std::int64_t k = lo; k <= hi; ++k) {
        b_lo = std::min(b_lo, a[k]);
        b_hi = std::max(b_hi, a[k]);
      }
      auto deviation = [&](double b) {
        double s = 0.0;
        for (std::int64_t k = lo; k <= hi; ++k) s += std::abs(a[k] - b);
        return s / static_cast<double>(hi - lo + 1);
      };
      for (int round = 0; round < 8; ++round) {
        const int grid_points = 32;
        double best_b = b_lo, best_dev = deviation(b_lo);
        for (int g = 1; g <= grid_points; ++g) {
          const double b = b_lo + (b_hi - b_lo) * g / grid_points;
          const double dev = deviation(b);
          if (dev < best_dev) {
            best_dev = dev;
            best_b = b;
          }
        }
        const double span = (b_hi - b_lo) / grid_points;
        b_lo = best_b - span;
        b_hi = best_b + span;
      }
      best = std::max(best, deviation(0.5 * (b_lo + b_hi)));
    }
  }
  return best;
}

inline double ap_constant(const ergomax::WeightSequence<double>& w, double p) {
  const auto window = w.window();
  double best = 0.0;
  for (std::int64_t lo = window.lo; lo <= window.hi; ++lo) {
    for (std::int64_t hi = lo; hi <= window.hi; ++hi) {
      const auto len = static_cast<double>(hi - lo + 1);
      if (p == 1.0) {
        double sum = 0.0, min_w = w.at(lo);
        for (std::int64_t k = lo; k <= hi; ++k) {
          sum += w.at(k);
          min_w = std::min(min_w, w.at(k));
        }
        best = std::max(best, sum / len / min_w);
      } else {
        double sum = 0.0, dual = 0.0;
        for (std::int64_t k = lo; k <= hi; ++k) {
          sum += w.at(k);
          dual += std::pow(w.at(k), -1.0 / (p - 1.0));
        }
        best = std::max(best, (sum / len) * std::pow(dual / len, p - 1.0));
      }
    }
  }
  return best;
}

}  // namespace oracle
