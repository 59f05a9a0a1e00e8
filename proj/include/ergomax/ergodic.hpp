#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "ergomax/core.hpp"
#include "ergomax/maximal.hpp"
#include "ergomax/report.hpp"
#include "ergomax/weights.hpp"

namespace ergomax {

template <typename T>
using AtomFunction = std::vector<T>;

struct SystemDiagnostics {
  bool valid = true;
  std::vector<std::string> errors;
  std::vector<std::string> notes;
  std::vector<std::vector<int>> cycles;   // atom ids, forward orbit order
  std::vector<double> cycle_masses;       // per-atom mass along each cycle
};

/// Finite probability space of atoms with an invertible measure-preserving
/// map U given as a permutation. Masses are nonnegative and sum to 1; mass is
/// constant along each cycle (that is exactly measure preservation here).
/// Orientation: `perm` is U itself, so U^{-k}x walks the inverse permutation.
template <typename T>
class FinitePermutationSystem {
 public:
  FinitePermutationSystem(std::vector<T> masses, std::vector<int> perm)
      : masses_(std::move(masses)), perm_(std::move(perm)) {
    const SystemDiagnostics diag = validate(masses_, perm_);
    if (!diag.valid) {
      std::string what = "FinitePermutationSystem:";
      for (const auto& e : diag.errors) what += " " + e + ";";
      throw std::invalid_argument(what);
    }
    build_cycles();
  }

  static SystemDiagnostics validate(const std::vector<T>& masses, const std::vector<int>& perm) {
    SystemDiagnostics diag;
    const int n = static_cast<int>(masses.size());
    if (n == 0) {
      diag.valid = false;
      diag.errors.push_back("no atoms");
      return diag;
    }
    if (static_cast<int>(perm.size()) != n) {
      diag.valid = false;
      diag.errors.push_back("perm size differs from mass count");
      return diag;
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      if (perm[static_cast<std::size_t>(i)] < 0 || perm[static_cast<std::size_t>(i)] >= n) {
        diag.valid = false;
        diag.errors.push_back("perm value out of range at atom " + std::to_string(i));
        return diag;
      }
      if (seen[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]) {
        diag.valid = false;
        diag.errors.push_back("perm not a bijection: duplicate image at atom " + std::to_string(i));
        return diag;
      }
      seen[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = 1;
    }
    T total(0);
    for (int i = 0; i < n; ++i) {
      const T& m = masses[static_cast<std::size_t>(i)];
      if (m < T(0)) {
        diag.valid = false;
        diag.errors.push_back("negative mass at atom " + std::to_string(i));
      }
      total += m;
    }
    if (!mass_equal(total, T(1))) {
      diag.valid = false;
      diag.errors.push_back("masses do not sum to 1");
    }
    for (int i = 0; i < n; ++i) {
      if (!mass_equal(masses[static_cast<std::size_t>(i)],
                      masses[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])])) {
        diag.valid = false;
        diag.errors.push_back("mass not preserved at atom " + std::to_string(i));
      }
    }
    if (!diag.valid) return diag;

    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    int positive_cycles = 0;
    for (int i = 0; i < n; ++i) {
      if (visited[static_cast<std::size_t>(i)]) continue;
      std::vector<int> cycle;
      int x = i;
      do {
        visited[static_cast<std::size_t>(x)] = 1;
        cycle.push_back(x);
        x = perm[static_cast<std::size_t>(x)];
      } while (x != i);
      diag.cycle_masses.push_back(num::as_double(masses[static_cast<std::size_t>(cycle.front())]));
      if (masses[static_cast<std::size_t>(cycle.front())] > T(0)) ++positive_cycles;
      diag.cycles.push_back(std::move(cycle));
    }
    if (positive_cycles != 1)
      diag.notes.push_back("not ergodic: " + std::to_string(positive_cycles) +
                           " cycles of positive mass");
    return diag;
  }

  int atom_count() const { return static_cast<int>(masses_.size()); }
  const T& mass(int x) const { return masses_[static_cast<std::size_t>(x)]; }
  const std::vector<T>& masses() const { return masses_; }
  const std::vector<int>& perm() const { return perm_; }

  /// U^k x for any integer k.
  int forward(int x, std::int64_t k) const {
    const auto& cycle = cycles_[static_cast<std::size_t>(cycle_id_[static_cast<std::size_t>(x)])];
    const auto len = static_cast<std::int64_t>(cycle.size());
    std::int64_t pos = (cycle_pos_[static_cast<std::size_t>(x)] + k) % len;
    if (pos < 0) pos += len;
    return cycle[static_cast<std::size_t>(pos)];
  }

  /// U^{-k} x.
  int backward(int x, std::int64_t k) const { return forward(x, -k); }

  const std::vector<std::vector<int>>& cycles() const { return cycles_; }
  const std::vector<int>& cycle_of(int x) const {
    return cycles_[static_cast<std::size_t>(cycle_id_[static_cast<std::size_t>(x)])];
  }
  int cycle_position(int x) const { return cycle_pos_[static_cast<std::size_t>(x)]; }

  int max_cycle_length() const {
    std::size_t best = 1;
    for (const auto& c : cycles_) best = std::max(best, c.size());
    return static_cast<int>(best);
  }

  /// The unique positive-mass cycle of an ergodic system.
  const std::vector<int>& positive_cycle() const {
    for (const auto& c : cycles_)
      if (mass(c.front()) > T(0)) return c;
    throw std::logic_error("FinitePermutationSystem: no positive-mass cycle");
  }

 private:
  static bool mass_equal(const T& a, const T& b) {
    if constexpr (is_exact_scalar_v<T>) {
      return a == b;
    } else {
      return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    }
  }

  void build_cycles() {
    const int n = atom_count();
    cycle_id_.assign(static_cast<std::size_t>(n), -1);
    cycle_pos_.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
      if (cycle_id_[static_cast<std::size_t>(i)] >= 0) continue;
      std::vector<int> cycle;
      int x = i;
      do {
        cycle_id_[static_cast<std::size_t>(x)] = static_cast<int>(cycles_.size());
        cycle_pos_[static_cast<std::size_t>(x)] = static_cast<int>(cycle.size());
        cycle.push_back(x);
        x = perm_[static_cast<std::size_t>(x)];
      } while (x != i);
      cycles_.push_back(std::move(cycle));
    }
  }

  std::vector<T> masses_;
  std::vector<int> perm_;
  std::vector<std::vector<int>> cycles_;
  std::vector<int> cycle_id_;
  std::vector<int> cycle_pos_;
};

template <typename T>
SystemDiagnostics validate_system(const FinitePermutationSystem<T>& sys) {
  return FinitePermutationSystem<T>::validate(sys.masses(), sys.perm());
}

/// True iff every U-invariant union of atoms has measure 0 or 1; for a finite
/// atomic system that means the positive-mass atoms form a single cycle.
template <typename T>
bool is_ergodic(const FinitePermutationSystem<T>& sys) {
  int positive_cycles = 0;
  for (const auto& cycle : sys.cycles())
    if (sys.mass(cycle.front()) > T(0)) ++positive_cycles;
  return positive_cycles == 1;
}

/// Maximal ergodic operator: sup over n of symmetric orbit averages
/// (1/(2n+1)) sum_{k=-n}^{n} |f(U^{-k}x)|. Orbit sums repeat with period the
/// cycle length, so the untruncated supremum is max(max_{n <= c} A(n), cycle
/// mean); the cycle mean is the n -> infinity limit and can strictly dominate
/// every finite average. The truncated form scans 1 <= n <= J directly.
template <typename T>
AtomFunction<T> ergodic_maximal(const FinitePermutationSystem<T>& sys, const AtomFunction<T>& f,
                                std::optional<std::int64_t> truncation = std::nullopt) {
  const int n_atoms = sys.atom_count();
  if (static_cast<int>(f.size()) != n_atoms)
    throw std::invalid_argument("ergodic_maximal: f size differs from atom count");
  if (truncation && *truncation < 1)
    throw std::invalid_argument("ergodic_maximal: truncation must be >= 1");
  std::vector<T> abs_f(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) abs_f[i] = num::abs_value(f[i]);

  AtomFunction<T> out(static_cast<std::size_t>(n_atoms), T(0));
  for (const auto& cycle : sys.cycles()) {
    const auto len = static_cast<std::int64_t>(cycle.size());
    T cycle_sum(0);
    for (const int atom : cycle) cycle_sum += abs_f[static_cast<std::size_t>(atom)];
    for (std::int64_t p = 0; p < len; ++p) {
      const int x = cycle[static_cast<std::size_t>(p)];
      const std::int64_t limit = truncation ? *truncation : len;
      T sum = abs_f[static_cast<std::size_t>(x)];
      T best_sum(0);
      std::int64_t best_den = 1;
      bool taken = false;
      for (std::int64_t n = 1; n <= limit; ++n) {
        const std::int64_t left = ((p - n) % len + len) % len;
        const std::int64_t right = (p + n) % len;
        sum += abs_f[static_cast<std::size_t>(cycle[static_cast<std::size_t>(left)])] +
               abs_f[static_cast<std::size_t>(cycle[static_cast<std::size_t>(right)])];
        const std::int64_t den = 2 * n + 1;
        if (!taken || sum * num::from_int<T>(best_den) > best_sum * num::from_int<T>(den)) {
          best_sum = sum;
          best_den = den;
          taken = true;
        }
      }
      T value = taken ? T(best_sum / num::from_int<T>(best_den)) : T(0);
      if (!truncation) value = std::max(value, T(cycle_sum / num::from_int<T>(len)));
      out[static_cast<std::size_t>(x)] = value;
    }
  }
  return out;
}

/// sum over atoms of |f|^p w dmu.
template <typename T>
T weighted_Lp_power_sum(const FinitePermutationSystem<T>& sys, const AtomFunction<T>& f,
                        const AtomFunction<T>& w, double p) {
  if (f.size() != w.size() || static_cast<int>(f.size()) != sys.atom_count())
    throw std::invalid_argument("weighted_Lp_power_sum: size mismatch");
  T total(0);
  for (int x = 0; x < sys.atom_count(); ++x) {
    const T v = num::abs_value(f[static_cast<std::size_t>(x)]);
    if (v == T(0) || sys.mass(x) == T(0)) continue;
    total += num::pow_real(v, p) * w[static_cast<std::size_t>(x)] * sys.mass(x);
  }
  return total;
}

template <typename T>
double weighted_Lp_norm(const FinitePermutationSystem<T>& sys, const AtomFunction<T>& f,
                        const AtomFunction<T>& w, double p) {
  return std::pow(num::as_double(weighted_Lp_power_sum(sys, f, w, p)), 1.0 / p);
}

namespace detail {

template <typename T>
void require_positive_weight(const FinitePermutationSystem<T>& sys, const AtomFunction<T>& w) {
  if (static_cast<int>(w.size()) != sys.atom_count())
    throw std::invalid_argument("weight size differs from atom count");
  for (int x = 0; x < sys.atom_count(); ++x)
    if (sys.mass(x) > T(0) && !(w[static_cast<std::size_t>(x)] > T(0)))
      throw std::invalid_argument("weight must be positive on positive-mass atom " + std::to_string(x));
}

}  // namespace detail

/// Ergodic A_p constant: max over positive-mass atoms x and orbit radii
/// 1 <= N <= N_max of the symmetric-window averages product (p = 1: window
/// average over window minimum). N_max defaults to the cycle length; the
/// cycle-mean limit is also offered as a candidate (reported with radius 0)
/// since it is the N -> infinity value of the windows.
template <typename T>
ApReport<T> ergodic_ap_constant(const FinitePermutationSystem<T>& sys, const AtomFunction<T>& w,
                                double p, std::int64_t n_max = 0) {
  if (p < 1.0) throw std::invalid_argument("ergodic_ap_constant: p must be >= 1");
  detail::require_positive_weight(sys, w);
  ApReport<T> report;
  report.p = p;
  report.conjugate = p > 1.0 ? p / (p - 1.0) : std::numeric_limits<double>::infinity();
  report.constant = T(0);
  bool taken = false;
  auto consider = [&](const T& value, int atom, std::int64_t radius) {
    if (!taken || value > report.constant) {
      report.constant = value;
      report.atom = atom;
      report.radius = radius;
      report.witness = {-radius, radius};
      taken = true;
    }
  };

  std::vector<T> dual;
  if (p > 1.0) {
    dual.resize(w.size(), T(0));
    for (int x = 0; x < sys.atom_count(); ++x) {
      if (!(sys.mass(x) > T(0))) continue;
      if constexpr (is_exact_scalar_v<T>) {
        if (p != 2.0)
          throw std::domain_error("ergodic A_p in exact mode requires p = 2");
        dual[static_cast<std::size_t>(x)] = T(1) / w[static_cast<std::size_t>(x)];
      } else {
        dual[static_cast<std::size_t>(x)] = std::pow(w[static_cast<std::size_t>(x)], -1.0 / (p - 1.0));
      }
    }
  }

  for (const auto& cycle : sys.cycles()) {
    if (!(sys.mass(cycle.front()) > T(0))) continue;
    const auto len = static_cast<std::int64_t>(cycle.size());
    const std::int64_t limit = n_max > 0 ? n_max : len;
    T cyc_w(0), cyc_dual(0);
    T cyc_min = w[static_cast<std::size_t>(cycle.front())];
    for (const int atom : cycle) {
      cyc_w += w[static_cast<std::size_t>(atom)];
      if (p > 1.0) cyc_dual += dual[static_cast<std::size_t>(atom)];
      cyc_min = std::min(cyc_min, w[static_cast<std::size_t>(atom)]);
    }
    for (std::int64_t pos = 0; pos < len; ++pos) {
      const int x = cycle[static_cast<std::size_t>(pos)];
      T sum_w = w[static_cast<std::size_t>(x)];
      T sum_dual = p > 1.0 ? dual[static_cast<std::size_t>(x)] : T(0);
      T min_w = w[static_cast<std::size_t>(x)];
      for (std::int64_t n = 1; n <= limit; ++n) {
        const auto left = static_cast<std::size_t>(
            cycle[static_cast<std::size_t>(((pos - n) % len + len) % len)]);
        const auto right =
            static_cast<std::size_t>(cycle[static_cast<std::size_t>((pos + n) % len)]);
        sum_w += w[left] + w[right];
        const T window = num::from_int<T>(2 * n + 1);
        if (p == 1.0) {
          min_w = std::min({min_w, w[left], w[right]});
          consider(sum_w / (window * min_w), x, n);
        } else {
          sum_dual += dual[left] + dual[right];
          consider((sum_w / window) * num::pow_real<T>(sum_dual / window, p - 1.0), x, n);
        }
      }
    }
    // window limit as N -> infinity
    const T len_t = num::from_int<T>(len);
    if (p == 1.0) {
      consider(cyc_w / (len_t * cyc_min), cycle.front(), 0);
    } else {
      consider((cyc_w / len_t) * num::pow_real<T>(cyc_dual / len_t, p - 1.0), cycle.front(), 0);
    }
  }
  return report;
}

/// All-intervals variant of the ergodic A_p constant: scans every contiguous
/// orbit block of length <= max_len (default twice the cycle length) instead
/// of only symmetric windows. Reported alongside the symmetric constant; the
/// two need not agree.
template <typename T>
ApReport<T> ergodic_ap_constant_unrolled(const FinitePermutationSystem<T>& sys,
                                         const AtomFunction<T>& w, double p,
                                         std::int64_t max_len = 0) {
  if (p < 1.0) throw std::invalid_argument("ergodic_ap_constant_unrolled: p must be >= 1");
  detail::require_positive_weight(sys, w);
  ApReport<T> report;
  report.p = p;
  report.conjugate = p > 1.0 ? p / (p - 1.0) : std::numeric_limits<double>::infinity();
  report.constant = T(0);
  bool taken = false;
  auto consider = [&](const T& value, int atom, std::int64_t length) {
    if (!taken || value > report.constant) {
      report.constant = value;
      report.atom = atom;
      report.radius = length;
      report.witness = {0, length - 1};
      taken = true;
    }
  };
  for (const auto& cycle : sys.cycles()) {
    if (!(sys.mass(cycle.front()) > T(0))) continue;
    const auto len = static_cast<std::int64_t>(cycle.size());
    const std::int64_t cap = max_len > 0 ? max_len : 2 * len;
    for (std::int64_t start = 0; start < len; ++start) {
      T sum_w(0), sum_dual(0);
      T min_w = w[static_cast<std::size_t>(cycle[static_cast<std::size_t>(start)])];
      for (std::int64_t l = 1; l <= cap; ++l) {
        const auto atom = static_cast<std::size_t>(
            cycle[static_cast<std::size_t>((start + l - 1) % len)]);
        sum_w += w[atom];
        min_w = std::min(min_w, w[atom]);
        const T lt = num::from_int<T>(l);
        if (p == 1.0) {
          consider(sum_w / (lt * min_w), cycle[static_cast<std::size_t>(start)], l);
        } else {
          if constexpr (is_exact_scalar_v<T>) {
            if (p != 2.0) throw std::domain_error("ergodic A_p in exact mode requires p = 2");
            sum_dual += T(1) / w[atom];
          } else {
            sum_dual += std::pow(w[atom], -1.0 / (p - 1.0));
          }
          consider((sum_w / lt) * num::pow_real<T>(sum_dual / lt, p - 1.0),
                   cycle[static_cast<std::size_t>(start)], l);
        }
      }
    }
  }
  return report;
}

/// The proof's orbit sequences a_x(k) = f(U^{-k}x) and w_x(k) = w(U^{-k}x),
/// truncated to |k| <= L + J.
template <typename T>
struct TransferTrace {
  int x = 0;
  std::int64_t L = 1;
  std::int64_t J = 1;
  WindowedSequence<T> a_x;
  WindowedSequence<T> w_x;
};

template <typename T>
TransferTrace<T> orbit_trace(const FinitePermutationSystem<T>& sys, const AtomFunction<T>& f,
                             const AtomFunction<T>& w, int x, std::int64_t L, std::int64_t J) {
  if (L < 1 || J < 1) throw std::invalid_argument("orbit_trace: L and J must be >= 1");
  if (static_cast<int>(f.size()) != sys.atom_count() ||
      static_cast<int>(w.size()) != sys.atom_count())
    throw std::invalid_argument("orbit_trace: size mismatch");
  const std::int64_t reach = L + J;
  std::vector<T> a_vals, w_vals;
  a_vals.reserve(static_cast<std::size_t>(2 * reach + 1));
  w_vals.reserve(static_cast<std::size_t>(2 * reach + 1));
  for (std::int64_t k = -reach; k <= reach; ++k) {
    const int atom = sys.backward(x, k);
    a_vals.push_back(f[static_cast<std::size_t>(atom)]);
    w_vals.push_back(w[static_cast<std::size_t>(atom)]);
  }
  return {x, L, J,
          WindowedSequence<T>(-reach, std::move(a_vals)),
          WindowedSequence<T>(-reach, std::move(w_vals))};
}

template <typename T>
struct TransferenceCheck {
  bool ok = true;
  std::int64_t mismatch_m = 0;
  T ergodic_value{0};
  T sequence_value{0};
};

/// Verifies the transference identity of the weighted maximal ergodic theorem
/// proof: for |m| <= L the truncated ergodic maximal value at U^{-m}x equals
/// the truncated centered maximal value of the orbit sequence a_x at m. Both
/// truncations range over radii 1..J (so the centered operator is called with
/// cutoff J + 1, whose admissible radii are r < J + 1).
template <typename T>
TransferenceCheck<T> verify_transference_identity(const FinitePermutationSystem<T>& sys,
                                                  const AtomFunction<T>& f, int x, std::int64_t L,
                                                  std::int64_t J) {
  if (L < 1 || J < 1) throw std::invalid_argument("verify_transference_identity: L, J must be >= 1");
  const AtomFunction<T> ergodic_side = ergodic_maximal(sys, f, J);
  const AtomFunction<T> ones(f.size(), T(1));
  const TransferTrace<T> trace = orbit_trace(sys, f, ones, x, L, J);
  const MaximalResult<T> sequence_side = centered_maximal(trace.a_x, {-L, L}, J + 1);
  TransferenceCheck<T> check;
  for (std::int64_t m = -L; m <= L; ++m) {
    const T lhs = ergodic_side[static_cast<std::size_t>(sys.backward(x, m))];
    const T rhs = sequence_side.at(m);
    bool equal;
    if constexpr (is_exact_scalar_v<T>) {
      equal = lhs == rhs;
    } else {
      equal = std::abs(lhs - rhs) <= 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    }
    if (!equal) {
      check.ok = false;
      check.mismatch_m = m;
      check.ergodic_value = lhs;
      check.sequence_value = rhs;
      return check;
    }
  }
  return check;
}

/// Weighted inequality for the maximal ergodic operator. For p = 1: weak type
/// with frozen constant 36 * A, A the ergodic A_1 constant (the Z-side proof
/// constant 36 carried through the transference averaging). For p > 1 the
/// report records the strong-type ratio; boundedness is a corpus verdict.
template <typename T>
InequalityReport ergodic_weak_pp(const FinitePermutationSystem<T>& sys, const AtomFunction<T>& f,
                                 const AtomFunction<T>& w, double p, const T& lambda,
                                 std::optional<std::type_identity_t<T>> constant_override = std::nullopt) {
  if (!(lambda > T(0))) throw std::invalid_argument("ergodic_weak_pp: lambda must be positive");
  detail::require_positive_weight(sys, w);
  const AtomFunction<T> max_f = ergodic_maximal(sys, f);
  if (p == 1.0) {
    const T a_const = ergodic_ap_constant(sys, w, 1.0).constant;
    const T constant = constant_override ? *constant_override : T(36) * a_const;
    T lhs(0);
    for (int x = 0; x < sys.atom_count(); ++x)
      if (max_f[static_cast<std::size_t>(x)] > lambda)
        lhs += w[static_cast<std::size_t>(x)] * sys.mass(x);
    const T rhs = weighted_Lp_power_sum(sys, f, w, 1.0);
    InequalityReport report = make_report("ergodic_weak11", "", lhs, rhs, T(constant / lambda));
    report.constant = num::as_double(constant);
    report.aux["ap_constant"] = num::as_double(a_const);
    report.aux["lambda"] = num::as_double(lambda);
    if (!report.pass) report.witness = "lambda " + std::to_string(num::as_double(lambda));
    return report;
  }
  const T denom = weighted_Lp_power_sum(sys, f, w, p);
  if (denom == T(0)) throw std::invalid_argument("ergodic_weak_pp: ||f|| is zero");
  const T numer = weighted_Lp_power_sum(sys, max_f, w, p);
  InequalityReport report;
  report.checker = "ergodic_strongpp";
  report.pass = true;
  report.lhs = num::as_double(numer);
  report.rhs = num::as_double(denom);
  report.ratio = std::pow(num::as_double(numer) / num::as_double(denom), 1.0 / p);
  report.aux["p"] = p;
  report.aux["r1"] = report.ratio;
  return report;
}

/// Ergodic rectangle: base E with U^i E pairwise disjoint for |i| <= K.
struct ErgodicRectangle {
  std::vector<int> base;
  int half_length = 0;  // K; rectangle length is 2K+1

  int length() const { return 2 * half_length + 1; }
};

template <typename T>
std::vector<std::vector<int>> rectangle_levels(const FinitePermutationSystem<T>& sys,
                                               const ErgodicRectangle& rect) {
  std::vector<std::vector<int>> levels;
  levels.reserve(static_cast<std::size_t>(rect.length()));
  for (int i = -rect.half_length; i <= rect.half_length; ++i) {
    std::vector<int> level;
    level.reserve(rect.base.size());
    for (const int x : rect.base) level.push_back(sys.forward(x, i));
    levels.push_back(std::move(level));
  }
  return levels;
}

/// Disjointness of the levels, i.e. no atom appears twice across U^i E.
template <typename T>
bool validate_rectangle(const FinitePermutationSystem<T>& sys, const ErgodicRectangle& rect) {
  std::vector<int> all;
  for (const auto& level : rectangle_levels(sys, rect))
    all.insert(all.end(), level.begin(), level.end());
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

template <typename T>
T rectangle_measure(const FinitePermutationSystem<T>& sys, const ErgodicRectangle& rect) {
  T total(0);
  for (const auto& level : rectangle_levels(sys, rect))
    for (const int x : level) total += sys.mass(x);
  return total;
}

namespace detail {

inline std::int64_t circular_distance(std::int64_t a, std::int64_t b, std::int64_t len) {
  const std::int64_t d = std::llabs(a - b) % len;
  return std::min(d, len - d);
}

}  // namespace detail

/// Base of an ergodic rectangle of length 2K+1 inside F: atoms of the
/// positive-mass cycle picked greedily at pairwise cycle distance >= 2K+1.
/// A single atom always works when 2K+1 fits in the cycle; longer rectangles
/// do not exist in a finite cycle.
template <typename T>
ErgodicRectangle find_rectangle_base(const FinitePermutationSystem<T>& sys, int k,
                                     const std::vector<int>& candidate_set) {
  if (k < 1) throw std::invalid_argument("find_rectangle_base: K must be >= 1");
  if (!is_ergodic(sys)) throw std::invalid_argument("find_rectangle_base: system is not ergodic");
  const auto& cycle = sys.positive_cycle();
  const auto len = static_cast<std::int64_t>(cycle.size());
  if (2 * std::int64_t{k} + 1 > len)
    throw std::domain_error("find_rectangle_base: no rectangle of length " +
                            std::to_string(2 * k + 1) + " exists in a cycle of length " +
                            std::to_string(len));
  std::vector<std::int64_t> positions;
  for (const int x : candidate_set) {
    if (sys.mass(x) > T(0) && &sys.cycle_of(x) == &cycle)
      positions.push_back(sys.cycle_position(x));
  }
  if (positions.empty())
    throw std::invalid_argument("find_rectangle_base: F has measure zero");
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());

  const std::int64_t gap = 2 * std::int64_t{k} + 1;
  ErgodicRectangle rect;
  rect.half_length = k;
  const std::int64_t first = positions.front();
  std::int64_t last = first;
  rect.base.push_back(cycle[static_cast<std::size_t>(first)]);
  for (std::size_t i = 1; i < positions.size(); ++i) {
    const std::int64_t p = positions[i];
    if (p - last >= gap && (first + len - p) >= gap) {
      rect.base.push_back(cycle[static_cast<std::size_t>(p)]);
      last = p;
    }
  }
  return rect;
}

/// A finite family of rectangle bases of length 2K+1 covering every
/// positive-mass atom; nearby atoms go to separate bases.
template <typename T>
std::vector<std::vector<int>> cover_by_rectangle_bases(const FinitePermutationSystem<T>& sys, int k) {
  if (k < 1) throw std::invalid_argument("cover_by_rectangle_bases: K must be >= 1");
  if (!is_ergodic(sys)) throw std::invalid_argument("cover_by_rectangle_bases: system is not ergodic");
  const auto& cycle = sys.positive_cycle();
  const auto len = static_cast<std::int64_t>(cycle.size());
  const std::int64_t gap = 2 * std::int64_t{k} + 1;
  if (gap > len)
    throw std::domain_error("cover_by_rectangle_bases: no rectangle of length " +
                            std::to_string(gap) + " exists in a cycle of length " +
                            std::to_string(len));
  std::vector<std::vector<std::int64_t>> base_positions;
  for (std::int64_t p = 0; p < len; ++p) {
    bool placed = false;
    for (auto& base : base_positions) {
      bool fits = true;
      for (const std::int64_t q : base)
        if (detail::circular_distance(p, q, len) < gap) {
          fits = false;
          break;
        }
      if (fits) {
        base.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) base_positions.push_back({p});
  }
  std::vector<std::vector<int>> out;
  out.reserve(base_positions.size());
  for (const auto& base : base_positions) {
    std::vector<int> atoms;
    atoms.reserve(base.size());
    for (const std::int64_t p : base) atoms.push_back(cycle[static_cast<std::size_t>(p)]);
    out.push_back(std::move(atoms));
  }
  return out;
}

/// Test function of the converse proof: f(U^{-k}x) = a(k) for x in F and
/// |k| <= J, zero elsewhere; well defined because the rectangle levels are
/// disjoint. Requires rectangle length 2K+1 = 4J+1 (K = 2J) and a given on
/// the symmetric window [-J, J].
template <typename T>
AtomFunction<T> rectangle_test_function(const FinitePermutationSystem<T>& sys,
                                        const ErgodicRectangle& rect, const WindowedSequence<T>& a,
                                        const std::vector<int>& subset) {
  if (rect.half_length % 2 != 0)
    throw std::invalid_argument("rectangle_test_function: rectangle length must be 4J+1 (even K)");
  const std::int64_t j = rect.half_length / 2;
  if (a.window().lo != -j || a.window().hi != j)
    throw std::invalid_argument("rectangle_test_function: a must live on [-J, J] with J = K/2");
  if (!validate_rectangle(sys, rect))
    throw std::invalid_argument("rectangle_test_function: base levels are not disjoint");
  for (const int x : subset)
    if (std::find(rect.base.begin(), rect.base.end(), x) == rect.base.end())
      throw std::invalid_argument("rectangle_test_function: subset escapes the base");
  AtomFunction<T> f(static_cast<std::size_t>(sys.atom_count()), T(0));
  for (const int x : subset)
    for (std::int64_t k = -j; k <= j; ++k)
      f[static_cast<std::size_t>(sys.backward(x, k))] = a[k];
  return f;
}

/// Two-sided boundedness probe for the converse theorem: the ergodic A_p
/// constant A next to an operator-norm estimate B over rectangle-built test
/// functions (one deterministic delta at the weight minimum plus random
/// draws). Trends of (A, B) across system sizes exhibit the equivalence.
struct ConverseProbeReport {
  double ap_constant = 0;
  double ap_constant_unrolled = 0;
  double best_ratio = 0;
  std::vector<double> trial_ratios;
};

template <typename T>
ConverseProbeReport converse_probe(const FinitePermutationSystem<T>& sys, const AtomFunction<T>& w,
                                   double p, std::int64_t j, int trials, std::uint64_t seed) {
  if (!(p > 1.0)) throw std::invalid_argument("converse_probe: requires p > 1");
  if (j < 1) throw std::invalid_argument("converse_probe: J must be >= 1");
  detail::require_positive_weight(sys, w);
  const int k = static_cast<int>(2 * j);
  ConverseProbeReport probe;
  probe.ap_constant = num::as_double(ergodic_ap_constant(sys, w, p).constant);
  probe.ap_constant_unrolled = num::as_double(ergodic_ap_constant_unrolled(sys, w, p).constant);

  auto ratio_of = [&](const AtomFunction<T>& f) -> std::optional<double> {
    const T denom = weighted_Lp_power_sum(sys, f, w, p);
    if (denom == T(0)) return std::nullopt;
    const T numer = weighted_Lp_power_sum(sys, ergodic_maximal(sys, f), w, p);
    return std::pow(num::as_double(numer) / num::as_double(denom), 1.0 / p);
  };

  const auto& cycle = sys.positive_cycle();
  // deterministic trial: delta sitting at the weight minimum
  int min_atom = cycle.front();
  for (const int x : cycle)
    if (w[static_cast<std::size_t>(x)] < w[static_cast<std::size_t>(min_atom)]) min_atom = x;
  {
    const ErgodicRectangle rect = find_rectangle_base(sys, k, {min_atom});
    std::vector<T> values(static_cast<std::size_t>(2 * j + 1), T(0));
    values[static_cast<std::size_t>(j)] = T(1);
    const WindowedSequence<T> a(-j, std::move(values));
    if (const auto r = ratio_of(rectangle_test_function(sys, rect, a, rect.base)))
      probe.trial_ratios.push_back(*r);
  }

  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int t = 0; t < trials; ++t) {
    std::vector<int> candidates;
    for (const int x : cycle)
      if (rng() & 1) candidates.push_back(x);
    if (candidates.empty())
      candidates.push_back(cycle[static_cast<std::size_t>(rng() % cycle.size())]);
    const ErgodicRectangle rect = find_rectangle_base(sys, k, candidates);
    std::vector<int> subset;
    for (const int x : rect.base)
      if (rng() & 1) subset.push_back(x);
    if (subset.empty()) subset.push_back(rect.base.front());
    std::vector<T> values(static_cast<std::size_t>(2 * j + 1), T(0));
    for (auto& v : values)
      v = num::from_int<T>(static_cast<std::int64_t>(std::ceil(unit() * 256.0))) / num::from_int<T>(256);
    values[static_cast<std::size_t>(j)] = std::max(values[static_cast<std::size_t>(j)], T(1) / T(2));
    const WindowedSequence<T> a(-j, std::move(values));
    if (const auto r = ratio_of(rectangle_test_function(sys, rect, a, subset)))
      probe.trial_ratios.push_back(*r);
  }
  for (const double r : probe.trial_ratios) probe.best_ratio = std::max(probe.best_ratio, r);
  return probe;
}

}  // namespace ergomax

