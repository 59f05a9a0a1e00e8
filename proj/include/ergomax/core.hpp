#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ergomax/rational.hpp"

namespace ergomax {

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace detail

/// Finite interval of integers with inclusive endpoints.
struct IntegerInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  IntegerInterval() = default;
  IntegerInterval(std::int64_t lo_, std::int64_t hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) throw std::invalid_argument("IntegerInterval: lo > hi");
  }

  std::int64_t cardinality() const { return hi - lo + 1; }
  bool contains(std::int64_t m) const { return lo <= m && m <= hi; }
  bool contains(const IntegerInterval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool operator==(const IntegerInterval& other) const = default;

  std::string to_string() const {
    return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  }
};

inline std::optional<IntegerInterval> intersect(const IntegerInterval& a, const IntegerInterval& b) {
  const std::int64_t lo = std::max(a.lo, b.lo);
  const std::int64_t hi = std::min(a.hi, b.hi);
  if (lo > hi) return std::nullopt;
  return IntegerInterval(lo, hi);
}

// Levels are capped so that interval endpoints stay well inside int64 range.
inline constexpr int kMaxDyadicLevel = 56;

/// Dyadic interval I_{N,j} = [(j-1)*2^N + 1, j*2^N]; level N >= 1 per the grid
/// convention (singletons are not dyadic).
struct DyadicInterval {
  int level = 1;          // N
  std::int64_t index = 1;  // j

  DyadicInterval() = default;
  DyadicInterval(int level_, std::int64_t index_) : level(level_), index(index_) {
    if (level < 1 || level > kMaxDyadicLevel)
      throw std::invalid_argument("DyadicInterval: level out of range");
  }

  std::int64_t block() const { return std::int64_t{1} << level; }
  std::int64_t lo() const { return (index - 1) * block() + 1; }
  std::int64_t hi() const { return index * block(); }
  std::int64_t cardinality() const { return block(); }
  IntegerInterval interval() const { return {lo(), hi()}; }
  bool contains(std::int64_t m) const { return lo() <= m && m <= hi(); }

  DyadicInterval parent() const { return {level + 1, detail::ceil_div(index, 2)}; }
  DyadicInterval left_child() const {
    if (level < 2) throw std::logic_error("DyadicInterval: level-1 intervals have no children");
    return {level - 1, 2 * index - 1};
  }
  DyadicInterval right_child() const {
    if (level < 2) throw std::logic_error("DyadicInterval: level-1 intervals have no children");
    return {level - 1, 2 * index};
  }

  bool operator==(const DyadicInterval& other) const = default;
};

/// The unique level-N dyadic interval containing m (j = ceil(m / 2^N)).
inline DyadicInterval dyadic_containing(std::int64_t m, int level) {
  DyadicInterval probe(level, 1);
  return {level, detail::ceil_div(m, probe.block())};
}

/// The chain of dyadic intervals containing m for levels 1..n_max.
inline std::vector<DyadicInterval> dyadic_intervals_containing(std::int64_t m, int n_max) {
  if (n_max < 1) throw std::invalid_argument("dyadic_intervals_containing: n_max < 1");
  std::vector<DyadicInterval> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int level = 1; level <= n_max; ++level) out.push_back(dyadic_containing(m, level));
  return out;
}

enum class ExpandMode { left, right, symmetric };

/// Expansion 2mLI / 2mRI / (2m+1)I of a dyadic interval: the one-sided
/// expansions have cardinality 2m*2^N (m-1 extra blocks plus the interval
/// itself on one side), the symmetric one (4m-1)*2^N, so (2m+1)I with m = 1 is
/// the 3I of the covering arguments.
inline IntegerInterval expand(const DyadicInterval& interval, std::int64_t m, ExpandMode mode) {
  if (m < 1) throw std::invalid_argument("expand: m must be >= 1");
  const std::int64_t stretch = (2 * m - 1) * interval.block();
  switch (mode) {
    case ExpandMode::left:
      return {interval.lo() - stretch, interval.hi()};
    case ExpandMode::right:
      return {interval.lo(), interval.hi() + stretch};
    case ExpandMode::symmetric:
      return {interval.lo() - stretch, interval.hi() + stretch};
  }
  throw std::logic_error("expand: unknown mode");
}

/// Finitely supported sequence on Z: stored values on [offset, offset+len-1],
/// implicit zero outside.
template <typename T>
class WindowedSequence {
 public:
  WindowedSequence(std::int64_t offset, std::vector<T> values)
      : offset_(offset), values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("WindowedSequence: empty value list");
  }

  static WindowedSequence zeros(const IntegerInterval& window) {
    return WindowedSequence(window.lo, std::vector<T>(static_cast<std::size_t>(window.cardinality()), T(0)));
  }

  static WindowedSequence delta(std::int64_t position) {
    return WindowedSequence(position, std::vector<T>{T(1)});
  }

  T operator[](std::int64_t m) const {
    if (m < offset_ || m >= offset_ + static_cast<std::int64_t>(values_.size())) return T(0);
    return values_[static_cast<std::size_t>(m - offset_)];
  }

  std::int64_t offset() const { return offset_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  IntegerInterval window() const { return {offset_, offset_ + size() - 1}; }
  const std::vector<T>& values() const { return values_; }

  /// Hull of the nonzero entries; nullopt for the zero sequence.
  std::optional<IntegerInterval> support() const {
    std::int64_t first = -1, last = -1;
    for (std::int64_t i = 0; i < size(); ++i) {
      if (values_[static_cast<std::size_t>(i)] != T(0)) {
        if (first < 0) first = i;
        last = i;
      }
    }
    if (first < 0) return std::nullopt;
    return IntegerInterval(offset_ + first, offset_ + last);
  }

  bool is_zero() const { return !support().has_value(); }

  WindowedSequence abs() const {
    std::vector<T> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = num::abs_value(values_[i]);
    return WindowedSequence(offset_, std::move(out));
  }

  T l1_norm() const {
    T total(0);
    for (const T& v : values_) total += num::abs_value(v);
    return total;
  }

  T max_abs() const {
    T best(0);
    for (const T& v : values_) best = std::max(best, num::abs_value(v));
    return best;
  }

 private:
  std::int64_t offset_;
  std::vector<T> values_;
};

inline WindowedSequence<Rational> to_rational(const WindowedSequence<double>& a) {
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(a.size()));
  for (const double v : a.values()) values.push_back(rational_from_double(v));
  return {a.offset(), std::move(values)};
}

inline WindowedSequence<double> to_double(const WindowedSequence<Rational>& a) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(a.size()));
  for (const Rational& v : a.values()) values.push_back(num::as_double(v));
  return {a.offset(), std::move(values)};
}

namespace detail {

// Neumaier-compensated running sums; interval sums come out as differences of
// (sum, compensation) pairs, so they stay accurate even when the prefix
// magnitude dwarfs the interval sum.
struct CompensatedPrefix {
  std::vector<double> sum;
  std::vector<double> comp;

  void build(const std::vector<double>& values) {
    sum.resize(values.size() + 1);
    comp.resize(values.size() + 1);
    double s = 0.0, c = 0.0;
    sum[0] = 0.0;
    comp[0] = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double v = values[i];
      const double t = s + v;
      if (std::abs(s) >= std::abs(v))
        c += (s - t) + v;
      else
        c += (v - t) + s;
      s = t;
      sum[i + 1] = s;
      comp[i + 1] = c;
    }
  }

  double range_sum(std::size_t i, std::size_t j) const {  // values[i..j-1]
    return (sum[j] - sum[i]) + (comp[j] - comp[i]);
  }
};

}  // namespace detail

/// O(1) interval sums over a windowed sequence (zero extension handled by
/// clipping). The double specialization uses compensated prefix sums.
template <typename T>
class PrefixTable {
 public:
  PrefixTable(const WindowedSequence<T>& a, bool absolute)
      : window_(a.window()) {
    if constexpr (std::is_same_v<T, double>) {
      std::vector<double> vals = a.values();
      if (absolute)
        for (double& v : vals) v = std::abs(v);
      prefix_.build(vals);
    } else {
      exact_.resize(static_cast<std::size_t>(a.size()) + 1, T(0));
      for (std::int64_t i = 0; i < a.size(); ++i) {
        T v = a.values()[static_cast<std::size_t>(i)];
        if (absolute) v = num::abs_value(v);
        exact_[static_cast<std::size_t>(i + 1)] = exact_[static_cast<std::size_t>(i)] + v;
      }
    }
  }

  /// Sum over I (parts outside the stored window contribute zero).
  T sum(const IntegerInterval& interval) const {
    const auto clipped = intersect(interval, window_);
    if (!clipped) return T(0);
    const auto i = static_cast<std::size_t>(clipped->lo - window_.lo);
    const auto j = static_cast<std::size_t>(clipped->hi - window_.lo + 1);
    if constexpr (std::is_same_v<T, double>) {
      return prefix_.range_sum(i, j);
    } else {
      return exact_[j] - exact_[i];
    }
  }

  /// Average over I, dividing by the full cardinality |I|.
  T average(const IntegerInterval& interval) const {
    return sum(interval) / num::from_int<T>(interval.cardinality());
  }

 private:
  IntegerInterval window_;
  detail::CompensatedPrefix prefix_;
  std::vector<T> exact_;
};

/// a_I: the mean of a over I (signed; zeros outside the window count).
template <typename T>
T interval_average(const WindowedSequence<T>& a, const IntegerInterval& interval) {
  T total(0);
  const auto clipped = intersect(interval, a.window());
  if (clipped) {
    if constexpr (std::is_same_v<T, double>) {
      double c = 0.0;  // Neumaier
      for (std::int64_t m = clipped->lo; m <= clipped->hi; ++m) {
        const double v = a[m];
        const double t = total + v;
        if (std::abs(total) >= std::abs(v))
          c += (total - t) + v;
        else
          c += (v - t) + total;
        total = t;
      }
      total += c;
    } else {
      for (std::int64_t m = clipped->lo; m <= clipped->hi; ++m) total += a[m];
    }
  }
  return total / num::from_int<T>(interval.cardinality());
}

}  // namespace ergomax
