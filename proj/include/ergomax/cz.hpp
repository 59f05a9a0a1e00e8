#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ergomax/core.hpp"
#include "ergomax/maximal.hpp"
#include "ergomax/report.hpp"
#include "ergomax/weights.hpp"

namespace ergomax {

/// Calderon-Zygmund selection at height lambda: the maximal dyadic intervals
/// (levels >= 1) on which the average of |a| exceeds lambda.
template <typename T>
struct CzDecomposition {
  T lambda{0};
  std::vector<DyadicInterval> intervals;  // pairwise disjoint, sorted by lo
  T residual_bound{0};                    // largest scanned average that stayed <= lambda
};

/// Top-down selection: start at a level where every dyadic average is already
/// <= lambda (2^N > ||a||_1 / lambda), split into children, keep a child when
/// its average exceeds lambda, recurse otherwise. Selected averages land in
/// (lambda, 2*lambda] because the parent average was quiet.
template <typename T>
CzDecomposition<T> cz_decompose(const WindowedSequence<T>& a, const T& lambda,
                                std::optional<int> start_level = std::nullopt) {
  if (!(lambda > T(0))) throw std::invalid_argument("cz_decompose: lambda must be positive");
  CzDecomposition<T> out;
  out.lambda = lambda;
  const auto support = a.support();
  if (!support) return out;
  const PrefixTable<T> prefix(a, /*absolute=*/true);
  const T l1 = a.l1_norm();

  int top = 1;
  while (top <= kMaxDyadicLevel &&
         !(num::from_int<T>(std::int64_t{1} << top) * lambda > l1))
    ++top;
  if (top > kMaxDyadicLevel)
    throw std::overflow_error("cz_decompose: lambda too small for the dyadic level cap");
  if (start_level) {
    if (*start_level < top)
      throw std::invalid_argument("cz_decompose: start level is not quiet for this lambda");
    top = std::min(*start_level, static_cast<int>(kMaxDyadicLevel));
  }

  auto note_residual = [&](const T& sum, std::int64_t cardinality) {
    const T avg = sum / num::from_int<T>(cardinality);
    out.residual_bound = std::max(out.residual_bound, avg);
  };

  // Depth-first over children of the quiet top level; left-to-right order
  // keeps the output sorted by lo.
  auto descend = [&](auto&& self, const DyadicInterval& node) -> void {
    if (node.level < 2) return;
    for (const DyadicInterval child : {node.left_child(), node.right_child()}) {
      if (!intersect(child.interval(), *support)) continue;
      const T sum = prefix.sum(child.interval());
      if (sum > lambda * num::from_int<T>(child.cardinality())) {
        out.intervals.push_back(child);
      } else {
        note_residual(sum, child.cardinality());
        self(self, child);
      }
    }
  };

  const std::int64_t j_lo = dyadic_containing(support->lo, top).index;
  const std::int64_t j_hi = dyadic_containing(support->hi, top).index;
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const DyadicInterval node(top, j);
    note_residual(prefix.sum(node.interval()), node.cardinality());
    descend(descend, node);
  }
  return out;
}

/// Exact superlevel set {m : Op a(m) > lambda}. The scan window is derived
/// from the decay bound Ma(m) <= ||a||_1 / (dist(m, supp) + 1), so membership
/// outside it is impossible; lambda <= 0 with a nonzero has no finite window.
template <typename T>
std::vector<std::int64_t> superlevel_set(const WindowedSequence<T>& a, MaximalOperator op,
                                         const T& lambda) {
  const auto support = a.support();
  if (!support) {
    if (lambda < T(0))
      throw std::domain_error("superlevel_set: negative threshold has unbounded superlevel set");
    return {};
  }
  if (!(lambda > T(0)))
    throw std::domain_error("superlevel_set: threshold must be positive (decay bound cannot close)");
  const T l1 = a.l1_norm();
  const std::int64_t reach = num::ceil_to_int(T(l1 / lambda));
  const PrefixTable<T> prefix(a, /*absolute=*/true);
  std::vector<std::int64_t> out;
  for (std::int64_t m = support->lo - reach; m <= support->hi + reach; ++m) {
    bool in = false;
    switch (op) {
      case MaximalOperator::centered:
        in = centered_exceeds(prefix, support, m, lambda);
        break;
      case MaximalOperator::uncentered:
        in = uncentered_exceeds(prefix, support, m, lambda);
        break;
      case MaximalOperator::dyadic:
        in = dyadic_exceeds(prefix, support, m, lambda);
        break;
      default:
        throw std::invalid_argument("superlevel_set: unsupported operator");
    }
    if (in) out.push_back(m);
  }
  return out;
}

/// Covering lemma check: |{M'a > 4 lambda}| <= 3 |{M_d a > lambda}|, plus the
/// geometric form {M'a > 4 lambda} inside the union of the 3I_j over the CZ
/// intervals at height lambda.
template <typename T>
InequalityReport verify_covering_lemma(const WindowedSequence<T>& a, const T& lambda) {
  const auto sharp_set = superlevel_set(a, MaximalOperator::centered, T(4) * lambda);
  const auto dyadic_set = superlevel_set(a, MaximalOperator::dyadic, lambda);
  const auto cz = cz_decompose(a, lambda);

  std::vector<IntegerInterval> tripled;
  tripled.reserve(cz.intervals.size());
  for (const DyadicInterval& d : cz.intervals) tripled.push_back(expand(d, 1, ExpandMode::symmetric));

  bool covered = true;
  std::int64_t uncovered_point = 0;
  for (const std::int64_t m : sharp_set) {
    bool inside = false;
    for (const IntegerInterval& t : tripled)
      if (t.contains(m)) {
        inside = true;
        break;
      }
    if (!inside) {
      covered = false;
      uncovered_point = m;
      break;
    }
  }

  InequalityReport report = make_report(
      "lemma2_covering", "", num::from_int<T>(static_cast<std::int64_t>(sharp_set.size())),
      num::from_int<T>(static_cast<std::int64_t>(dyadic_set.size())), T(3));
  report.constant = 3.0;
  if (!covered) {
    report.pass = false;
    report.witness = "point " + std::to_string(uncovered_point) + " outside union of 3I_j";
  } else if (!report.pass) {
    report.witness = "cardinality bound violated";
  }
  return report;
}

/// Theorem-1 weak (1,1) with Mw on the right: sum of w over {Ma > lambda}
/// bounded by (C / lambda) * sum |a| Mw, with C = 36 frozen from the proof
/// chain (CZ at lambda/12, 3I_j covering, avg_{3I_j} w <= Mw pointwise).
template <typename T>
InequalityReport weak11_with_Mw(const WindowedSequence<T>& a, const WeightSequence<T>& w,
                                const T& lambda, const T& constant = T(36)) {
  if (!(lambda > T(0))) throw std::invalid_argument("weak11_with_Mw: lambda must be positive");
  const auto level_set = superlevel_set(a, MaximalOperator::uncentered, lambda);
  for (const std::int64_t m : level_set)
    if (!w.window().contains(m))
      throw std::invalid_argument("weak11_with_Mw: superlevel set escapes the weight window");
  const T lhs = weight_measure(w, level_set);
  T rhs(0);
  if (const auto support = a.support()) {
    const auto max_w = uncentered_maximal(w.base(), *support);
    for (std::int64_t m = support->lo; m <= support->hi; ++m)
      rhs += num::abs_value(a[m]) * max_w.at(m);
  }
  InequalityReport report = make_report("thm1_weak11", "", lhs, rhs, T(constant / lambda));
  report.constant = num::as_double(constant);
  report.aux["lambda"] = num::as_double(lambda);
  if (!report.pass) report.witness = "lambda " + std::to_string(num::as_double(lambda));
  return report;
}

/// Theorem-3 weighted weak (p,p): w({Ma > lambda}) <= (A^2 36^p / lambda^p)
/// * sum |a|^p w, where A is the windowed A_p constant. The constant comes
/// from w(3I_j) <= A 3^p w(I_j) [Thm 2 B] and the interval inequality on I_j
/// [Thm 2 A] with a(I_j)/|I_j| > lambda/12.
template <typename T>
InequalityReport weighted_weak_pp(const WindowedSequence<T>& a, const WeightSequence<T>& w, double p,
                                  const T& lambda,
                                  std::optional<ApReport<std::type_identity_t<T>>> ap = std::nullopt) {
  if (!(lambda > T(0))) throw std::invalid_argument("weighted_weak_pp: lambda must be positive");
  const ApReport<T> ap_report = ap ? *ap : ap_constant(w, p);
  const T a_const = ap_report.constant;
  const T frozen = a_const * a_const * num::pow_real(T(36), p);
  const auto level_set = superlevel_set(a, MaximalOperator::uncentered, lambda);
  for (const std::int64_t m : level_set)
    if (!w.window().contains(m))
      throw std::invalid_argument("weighted_weak_pp: superlevel set escapes the weight window");
  const T lhs = weight_measure(w, level_set);
  const T rhs = weighted_power_sum(a, w, p);
  InequalityReport report =
      make_report("thm3_weakpp", "", lhs, rhs, T(frozen / num::pow_real(lambda, p)));
  report.constant = num::as_double(frozen);
  report.aux["p"] = p;
  report.aux["lambda"] = num::as_double(lambda);
  report.aux["ap_constant"] = num::as_double(a_const);
  if (!report.pass)
    report.witness = "p " + std::to_string(p) + " lambda " + std::to_string(num::as_double(lambda));
  return report;
}

/// Theorem-4 probe: records the strong-type ratios R1 = ||Ma|| / ||a|| in
/// l^p_w and R2 = sum (Ma)^p w / sum |a|^p Mw. Boundedness is judged at the
/// corpus level, so the single-instance report always passes.
template <typename T>
InequalityReport strong_pp_check(const WindowedSequence<T>& a, const WeightSequence<T>& w, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("strong_pp_check: requires p > 1");
  const T denom = weighted_power_sum(a, w, p);
  if (denom == T(0)) throw std::invalid_argument("strong_pp_check: ||a|| is zero");
  const auto max_a = uncentered_maximal(a, w.window());
  const T numer = weighted_power_sum(max_a.values, w, p);
  const auto support = a.support();
  const auto max_w = uncentered_maximal(w.base(), *support);
  T denom2(0);
  for (std::int64_t m = support->lo; m <= support->hi; ++m) {
    const T v = num::abs_value(a[m]);
    if (v == T(0)) continue;
    denom2 += num::pow_real(v, p) * max_w.at(m);
  }
  InequalityReport report;
  report.checker = "thm4_strongpp";
  report.pass = true;
  report.lhs = num::as_double(numer);
  report.rhs = num::as_double(denom);
  report.ratio = std::pow(num::as_double(numer) / num::as_double(denom), 1.0 / p);
  report.aux["r1"] = report.ratio;
  report.aux["r2"] = num::as_double(numer) / num::as_double(denom2);
  report.aux["p"] = p;
  return report;
}

}  // namespace ergomax
