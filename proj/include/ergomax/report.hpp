#pragma once

#include <limits>
#include <map>
#include <string>

#include "ergomax/rational.hpp"

namespace ergomax {

/// Relative tolerance used for inequality verdicts in floating mode; exact
/// mode compares rationals with no slack.
inline constexpr double kFloatRelTol = 1e-9;

template <typename T>
inline constexpr double scalar_tolerance_v = kFloatRelTol;
template <>
inline constexpr double scalar_tolerance_v<Rational> = 0.0;

/// Outcome of one verification: pass iff lhs <= scale * rhs (within the mode's
/// tolerance). `constant` records the frozen proof constant for display;
/// `scale` passed to make_report already folds in lambda powers etc.
struct InequalityReport {
  std::string checker;
  std::string digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 1.0;
  double ratio = 0.0;  // lhs / (scale * rhs); 0 when lhs == 0
  bool pass = true;
  std::string witness;  // failure description; empty on pass
  std::map<std::string, double> aux;
};

template <typename T>
InequalityReport make_report(std::string checker, std::string digest, const T& lhs, const T& rhs,
                             const T& scale) {
  InequalityReport r;
  r.checker = std::move(checker);
  r.digest = std::move(digest);
  r.lhs = num::as_double(lhs);
  r.rhs = num::as_double(rhs);
  const T bound = scale * rhs;
  if constexpr (is_exact_scalar_v<T>) {
    r.pass = lhs <= bound;
  } else {
    r.pass = lhs <= bound * (1.0 + kFloatRelTol);
  }
  if (lhs == T(0)) {
    r.ratio = 0.0;
  } else if (bound == T(0)) {
    r.ratio = std::numeric_limits<double>::max();
  } else {
    r.ratio = num::as_double(lhs) / num::as_double(bound);
  }
  return r;
}

}  // namespace ergomax
