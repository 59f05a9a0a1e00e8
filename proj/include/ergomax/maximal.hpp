#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ergomax/core.hpp"

namespace ergomax {

enum class MaximalOperator { centered, uncentered, dyadic, sharp };

inline const char* maximal_operator_name(MaximalOperator op) {
  switch (op) {
    case MaximalOperator::centered: return "centered";
    case MaximalOperator::uncentered: return "uncentered";
    case MaximalOperator::dyadic: return "dyadic";
    case MaximalOperator::sharp: return "sharp";
  }
  return "?";
}

/// Operator output on an evaluation window, with the attaining interval per
/// point (ties broken toward smallest cardinality, then smallest lo).
template <typename T>
struct MaximalResult {
  WindowedSequence<T> values;
  std::vector<IntegerInterval> witnesses;
  MaximalOperator op = MaximalOperator::centered;
  std::optional<std::int64_t> truncation;

  T at(std::int64_t m) const { return values[m]; }
  const IntegerInterval& witness(std::int64_t m) const {
    const auto w = values.window();
    if (!w.contains(m)) throw std::out_of_range("MaximalResult: m outside evaluation window");
    return witnesses[static_cast<std::size_t>(m - w.lo)];
  }
};

namespace detail {

// Running maximum over candidate averages sum/len, compared by cross
// multiplication so no division happens in the scan. Tie rule: smallest
// cardinality, then smallest lo.
template <typename T>
struct BestAverage {
  T sum{0};
  std::int64_t len = 1;
  std::int64_t lo = 0;
  bool taken = false;

  void offer(const T& s, std::int64_t l, std::int64_t candidate_lo) {
    if (!taken) {
      sum = s;
      len = l;
      lo = candidate_lo;
      taken = true;
      return;
    }
    const T lhs = s * num::from_int<T>(len);
    const T rhs = sum * num::from_int<T>(l);
    if (lhs > rhs || (lhs == rhs && (l < len || (l == len && candidate_lo < lo)))) {
      sum = s;
      len = l;
      lo = candidate_lo;
    }
  }

  T value() const { return taken ? T(sum / num::from_int<T>(len)) : T(0); }
  IntegerInterval interval() const { return {lo, lo + len - 1}; }
};

// Radii beyond this cover the whole support, after which averages only shrink.
inline std::int64_t centered_radius_limit(const std::optional<IntegerInterval>& support,
                                          std::int64_t m) {
  if (!support) return 1;
  return std::max<std::int64_t>(1, std::max(std::llabs(m - support->lo), std::llabs(support->hi - m)));
}

}  // namespace detail

/// Truncated/untruncated centered Hardy-Littlewood maximal operator: averages
/// of |a| over symmetric windows [m-r, m+r], r >= 1 (r < J when truncated, so
/// J >= 2 is required there). Note r = 0 is excluded, so the value can fall
/// below |a(m)|.
template <typename T>
MaximalResult<T> centered_maximal(const WindowedSequence<T>& a, const IntegerInterval& eval,
                                  std::optional<std::int64_t> truncation = std::nullopt) {
  if (truncation && *truncation < 2)
    throw std::invalid_argument("centered_maximal: truncation J must be >= 2 (needs J > r >= 1)");
  const PrefixTable<T> prefix(a, /*absolute=*/true);
  const auto support = a.support();
  std::vector<T> values;
  std::vector<IntegerInterval> witnesses;
  values.reserve(static_cast<std::size_t>(eval.cardinality()));
  for (std::int64_t m = eval.lo; m <= eval.hi; ++m) {
    std::int64_t r_limit = detail::centered_radius_limit(support, m);
    if (truncation) r_limit = std::min(r_limit, *truncation - 1);
    detail::BestAverage<T> best;
    for (std::int64_t r = 1; r <= r_limit; ++r)
      best.offer(prefix.sum({m - r, m + r}), 2 * r + 1, m - r);
    if (!best.taken) best.offer(prefix.sum({m - 1, m + 1}), 3, m - 1);
    values.push_back(best.value());
    witnesses.push_back(best.interval());
  }
  return {WindowedSequence<T>(eval.lo, std::move(values)), std::move(witnesses),
          MaximalOperator::centered, truncation};
}

/// Uncentered maximal operator: averages of |a| over all intervals containing
/// m, singletons included (truncated form restricts to |I| <= J). The scan
/// runs over I inside [min(m, support lo), max(m, support hi)]; intervals
/// poking past the support never improve the average.
template <typename T>
MaximalResult<T> uncentered_maximal(const WindowedSequence<T>& a, const IntegerInterval& eval,
                                    std::optional<std::int64_t> truncation = std::nullopt) {
  if (truncation && *truncation < 1)
    throw std::invalid_argument("uncentered_maximal: truncation J must be >= 1");
  const PrefixTable<T> prefix(a, /*absolute=*/true);
  const auto support = a.support();
  std::vector<T> values;
  std::vector<IntegerInterval> witnesses;
  values.reserve(static_cast<std::size_t>(eval.cardinality()));
  for (std::int64_t m = eval.lo; m <= eval.hi; ++m) {
    detail::BestAverage<T> best;
    if (!support) {
      best.offer(T(0), 1, m);
    } else {
      const std::int64_t range_lo = std::min(m, support->lo);
      const std::int64_t range_hi = std::max(m, support->hi);
      for (std::int64_t lo = range_lo; lo <= m; ++lo) {
        std::int64_t hi_cap = range_hi;
        if (truncation) hi_cap = std::min(hi_cap, lo + *truncation - 1);
        for (std::int64_t hi = m; hi <= hi_cap; ++hi)
          best.offer(prefix.sum({lo, hi}), hi - lo + 1, lo);
      }
      if (!best.taken) best.offer(T(0), 1, m);  // truncation can exclude every candidate pair
    }
    values.push_back(best.value());
    witnesses.push_back(best.interval());
  }
  return {WindowedSequence<T>(eval.lo, std::move(values)), std::move(witnesses),
          MaximalOperator::uncentered, truncation};
}

namespace detail {

// Smallest level whose dyadic interval through m covers all the support it
// can ever reach; beyond it the interval sum is frozen and averages halve.
// The dyadic grid never straddles the 0|1 boundary (the chains through m >= 1
// grow toward [1, 2^N], those through m <= 0 toward [-2^N+1, 0]), so only the
// support on m's side counts.
inline int dyadic_cover_level(const std::optional<IntegerInterval>& support, std::int64_t m) {
  if (!support) return 1;
  std::int64_t lo_target, hi_target;
  if (m >= 1) {
    lo_target = std::max<std::int64_t>(support->lo, 1);
    hi_target = support->hi;
    if (lo_target > hi_target) return 1;  // support entirely on the other side
    lo_target = std::min(lo_target, m);
    hi_target = std::max(hi_target, m);
  } else {
    lo_target = support->lo;
    hi_target = std::min<std::int64_t>(support->hi, 0);
    if (lo_target > hi_target) return 1;
    lo_target = std::min(lo_target, m);
    hi_target = std::max(hi_target, m);
  }
  for (int level = 1; level <= kMaxDyadicLevel; ++level) {
    const DyadicInterval d = dyadic_containing(m, level);
    if (d.lo() <= lo_target && d.hi() >= hi_target) return level;
  }
  throw std::overflow_error("dyadic_cover_level: level limit exceeded");
}

}  // namespace detail

/// Dyadic maximal operator: averages of |a| over the unique dyadic interval
/// through m at each level.
template <typename T>
MaximalResult<T> dyadic_maximal(const WindowedSequence<T>& a, const IntegerInterval& eval) {
  const PrefixTable<T> prefix(a, /*absolute=*/true);
  const auto support = a.support();
  std::vector<T> values;
  std::vector<IntegerInterval> witnesses;
  values.reserve(static_cast<std::size_t>(eval.cardinality()));
  for (std::int64_t m = eval.lo; m <= eval.hi; ++m) {
    const int top = detail::dyadic_cover_level(support, m);
    detail::BestAverage<T> best;
    for (int level = 1; level <= top; ++level) {
      const DyadicInterval d = dyadic_containing(m, level);
      best.offer(prefix.sum(d.interval()), d.cardinality(), d.lo());
    }
    values.push_back(best.value());
    witnesses.push_back(best.interval());
  }
  return {WindowedSequence<T>(eval.lo, std::move(values)), std::move(witnesses),
          MaximalOperator::dyadic, std::nullopt};
}

// --- threshold membership tests (used by superlevel sets; early exit, no division) ---

template <typename T>
bool centered_exceeds(const PrefixTable<T>& abs_prefix, const std::optional<IntegerInterval>& support,
                      std::int64_t m, const T& lambda,
                      std::optional<std::int64_t> truncation = std::nullopt) {
  std::int64_t r_limit = detail::centered_radius_limit(support, m);
  if (truncation) r_limit = std::min(r_limit, *truncation - 1);
  for (std::int64_t r = 1; r <= r_limit; ++r)
    if (abs_prefix.sum({m - r, m + r}) > lambda * num::from_int<T>(2 * r + 1)) return true;
  return false;
}

template <typename T>
bool uncentered_exceeds(const PrefixTable<T>& abs_prefix,
                        const std::optional<IntegerInterval>& support, std::int64_t m,
                        const T& lambda) {
  if (!support) return T(0) > lambda;
  const std::int64_t range_lo = std::min(m, support->lo);
  const std::int64_t range_hi = std::max(m, support->hi);
  for (std::int64_t lo = range_lo; lo <= m; ++lo)
    for (std::int64_t hi = m; hi <= range_hi; ++hi)
      if (abs_prefix.sum({lo, hi}) > lambda * num::from_int<T>(hi - lo + 1)) return true;
  return false;
}

template <typename T>
bool dyadic_exceeds(const PrefixTable<T>& abs_prefix, const std::optional<IntegerInterval>& support,
                    std::int64_t m, const T& lambda) {
  const int top = detail::dyadic_cover_level(support, m);
  for (int level = 1; level <= top; ++level) {
    const DyadicInterval d = dyadic_containing(m, level);
    if (abs_prefix.sum(d.interval()) > lambda * num::from_int<T>(d.cardinality())) return true;
  }
  return false;
}

// --- sharp maximal operator, BMO norm, oscillation about a best constant ---

/// Mean oscillation of every subinterval of a bounded range, precomputed in
/// one sweep: for each left endpoint the values are inserted into a sorted
/// buffer, so |v - b| sums come from prefix sums of the sorted order.
template <typename T>
class OscillationScan {
 public:
  OscillationScan(const WindowedSequence<T>& a, const IntegerInterval& range) : range_(range) {
    const std::int64_t n = range.cardinality();
    if (n > 4096) throw std::invalid_argument("OscillationScan: range too large");
    const auto size = static_cast<std::size_t>(n * (n + 1) / 2);
    mean_osc_.resize(size);
    median_mad_.resize(size);
    std::vector<T> sorted;
    std::vector<T> sorted_prefix;  // sorted_prefix[i] = sum of sorted[0..i-1]
    for (std::int64_t li = 0; li < n; ++li) {
      sorted.clear();
      sorted_prefix.assign(1, T(0));
      T total(0);
      for (std::int64_t hi = li; hi < n; ++hi) {
        const T v = a[range.lo + hi];
        const auto pos = std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
        sorted.insert(sorted.begin() + pos, v);
        total += v;
        sorted_prefix.resize(sorted.size() + 1);
        for (std::size_t i = static_cast<std::size_t>(pos); i < sorted.size(); ++i)
          sorted_prefix[i + 1] = sorted_prefix[i] + sorted[i];
        const std::int64_t len = hi - li + 1;
        const T len_t = num::from_int<T>(len);
        const T mean = total / len_t;
        const T med = sorted[static_cast<std::size_t>((len - 1) / 2)];
        const std::size_t idx = flat_index(li, hi);
        mean_osc_[idx] = deviation_sum(sorted, sorted_prefix, total, mean) / len_t;
        median_mad_[idx] = deviation_sum(sorted, sorted_prefix, total, med) / len_t;
      }
    }
  }

  const IntegerInterval& range() const { return range_; }

  /// (1/|I|) sum over I of |a(n) - a_I|.
  T mean_oscillation(const IntegerInterval& interval) const {
    return mean_osc_[checked_index(interval)];
  }

  /// inf over b of (1/|I|) sum over I of |a(n) - b|, attained at a median.
  T median_deviation(const IntegerInterval& interval) const {
    return median_mad_[checked_index(interval)];
  }

 private:
  static T deviation_sum(const std::vector<T>& sorted, const std::vector<T>& prefix,
                         const T& total, const T& b) {
    const auto cnt = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), b) - sorted.begin());
    const T below = prefix[cnt];
    const T above = total - below;
    const T cnt_t = num::from_int<T>(static_cast<std::int64_t>(cnt));
    const T rest_t = num::from_int<T>(static_cast<std::int64_t>(sorted.size() - cnt));
    return (cnt_t * b - below) + (above - rest_t * b);
  }

  std::size_t flat_index(std::int64_t li, std::int64_t hi) const {
    const std::int64_t n = range_.cardinality();
    return static_cast<std::size_t>(li * n - li * (li - 1) / 2 + (hi - li));
  }

  std::size_t checked_index(const IntegerInterval& interval) const {
    if (!range_.contains(interval)) throw std::out_of_range("OscillationScan: interval outside range");
    return flat_index(interval.lo - range_.lo, interval.hi - range_.lo);
  }

  IntegerInterval range_;
  std::vector<T> mean_osc_;
  std::vector<T> median_mad_;
};

/// Default computation range for the sharp operator: the sequence window
/// padded by its own length on both sides.
template <typename T>
IntegerInterval default_sharp_range(const WindowedSequence<T>& a) {
  const auto w = a.window();
  const std::int64_t len = w.cardinality();
  return {w.lo - len, w.hi + len};
}

/// Sharp maximal operator over intervals inside the given bounded range.
template <typename T>
MaximalResult<T> sharp_maximal(const WindowedSequence<T>& a, const IntegerInterval& eval,
                               std::optional<IntegerInterval> range = std::nullopt) {
  const IntegerInterval scan_range = range.value_or(default_sharp_range(a));
  if (!scan_range.contains(eval))
    throw std::invalid_argument("sharp_maximal: evaluation window escapes the computation range");
  const OscillationScan<T> scan(a, scan_range);
  std::vector<T> values;
  std::vector<IntegerInterval> witnesses;
  values.reserve(static_cast<std::size_t>(eval.cardinality()));
  for (std::int64_t m = eval.lo; m <= eval.hi; ++m) {
    T best(0);
    IntegerInterval best_interval{m, m};
    for (std::int64_t lo = scan_range.lo; lo <= m; ++lo) {
      for (std::int64_t hi = m; hi <= scan_range.hi; ++hi) {
        const T osc = scan.mean_oscillation({lo, hi});
        const std::int64_t len = hi - lo + 1;
        if (osc > best ||
            (osc == best && (len < best_interval.cardinality() ||
                             (len == best_interval.cardinality() && lo < best_interval.lo)))) {
          best = osc;
          best_interval = {lo, hi};
        }
      }
    }
    values.push_back(best);
    witnesses.push_back(best_interval);
  }
  return {WindowedSequence<T>(eval.lo, std::move(values)), std::move(witnesses),
          MaximalOperator::sharp, std::nullopt};
}

template <typename T>
struct BmoReport {
  T norm{0};
  IntegerInterval witness{0, 0};
};

/// BMO norm: supremum of mean oscillation over all intervals in the range.
template <typename T>
BmoReport<T> bmo_norm(const WindowedSequence<T>& a, std::optional<IntegerInterval> range = std::nullopt) {
  const IntegerInterval scan_range = range.value_or(default_sharp_range(a));
  const OscillationScan<T> scan(a, scan_range);
  BmoReport<T> report;
  report.witness = {scan_range.lo, scan_range.lo};
  for (std::int64_t lo = scan_range.lo; lo <= scan_range.hi; ++lo) {
    for (std::int64_t hi = lo; hi <= scan_range.hi; ++hi) {
      const T osc = scan.mean_oscillation({lo, hi});
      const std::int64_t len = hi - lo + 1;
      if (osc > report.norm ||
          (osc == report.norm && (len < report.witness.cardinality() ||
                                  (len == report.witness.cardinality() && lo < report.witness.lo)))) {
        report.norm = osc;
        report.witness = {lo, hi};
      }
    }
  }
  return report;
}

/// sup over I of inf over b of (1/|I|) sum |a(n) - b|; the inner infimum is
/// attained at any median of the interval values.
template <typename T>
T best_constant_oscillation(const WindowedSequence<T>& a,
                            std::optional<IntegerInterval> range = std::nullopt) {
  const IntegerInterval scan_range = range.value_or(default_sharp_range(a));
  const OscillationScan<T> scan(a, scan_range);
  T best(0);
  for (std::int64_t lo = scan_range.lo; lo <= scan_range.hi; ++lo)
    for (std::int64_t hi = lo; hi <= scan_range.hi; ++hi)
      best = std::max(best, scan.median_deviation({lo, hi}));
  return best;
}

}  // namespace ergomax
