#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "ergomax/core.hpp"
#include "ergomax/ergodic.hpp"
#include "ergomax/weights.hpp"

namespace ergomax {

enum class SequenceKind { delta, constant, step, random_sparse, random_dense, adversarial_dyadic };
enum class WeightKind { constant, alternating, power, random_bounded_ratio };
enum class SystemKind { cycle, two_cycles, cycle_with_null_atoms };

namespace detail {

// Uniform in [0, 1) from the raw engine stream; avoids distribution classes so
// corpora are bit-identical wherever the engine is.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Random values land on the grid k / quantum, so every corpus value converts
// to an exact rational with a small denominator.
inline double quantized_positive(std::mt19937_64& rng, int quantum) {
  return std::ceil(unit_uniform(rng) * quantum) / static_cast<double>(quantum);
}

inline double quantized_signed(std::mt19937_64& rng, int quantum) {
  const double v = quantized_positive(rng, quantum);
  return (rng() & 1) ? v : -v;
}

}  // namespace detail

struct SequenceSpec {
  SequenceKind kind = SequenceKind::random_dense;
  IntegerInterval window{0, 15};
  double amplitude = 1.0;
  double density = 0.2;           // random_sparse fill probability
  std::int64_t position = 0;      // delta location / step edge
  bool signed_values = false;
  int quantum = 256;
};

inline WindowedSequence<double> generate_sequence(const SequenceSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(spec.window.cardinality());
  std::vector<double> values(n, 0.0);
  auto draw = [&]() {
    const double v = spec.signed_values ? detail::quantized_signed(rng, spec.quantum)
                                        : detail::quantized_positive(rng, spec.quantum);
    return v * spec.amplitude;
  };
  switch (spec.kind) {
    case SequenceKind::delta:
      return {spec.position, std::vector<double>{spec.amplitude}};
    case SequenceKind::constant:
      for (auto& v : values) v = spec.amplitude;
      break;
    case SequenceKind::step:
      for (std::int64_t m = spec.window.lo; m <= spec.window.hi; ++m)
        if (m >= spec.position) values[static_cast<std::size_t>(m - spec.window.lo)] = spec.amplitude;
      break;
    case SequenceKind::random_sparse:
      for (auto& v : values)
        if (detail::unit_uniform(rng) < spec.density) v = draw();
      break;
    case SequenceKind::random_dense:
      for (auto& v : values) v = draw();
      break;
    case SequenceKind::adversarial_dyadic: {
      // spikes straddling dyadic boundaries j*2^N | j*2^N + 1 to stress the
      // maximality of the CZ selection
      const int spikes = std::max<int>(1, static_cast<int>(n / 8));
      for (int s = 0; s < spikes; ++s) {
        const int level = 1 + static_cast<int>(rng() % 4);
        const std::int64_t block = std::int64_t{1} << level;
        std::int64_t b = spec.window.lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(
                                              spec.window.cardinality()));
        b = detail::floor_div(b, block) * block;  // boundary: right edge of a level-`level` interval
        const double v = spec.amplitude * (0.5 + detail::quantized_positive(rng, spec.quantum) / 2.0);
        for (const std::int64_t m : {b, b + 1})
          if (spec.window.contains(m)) values[static_cast<std::size_t>(m - spec.window.lo)] += v;
      }
      break;
    }
  }
  WindowedSequence<double> out(spec.window.lo, std::move(values));
  if (out.is_zero() && spec.kind != SequenceKind::constant) {
    // keep corpora usable: an all-zero random draw gets one spike
    std::vector<double> patched = out.values();
    patched[patched.size() / 2] = spec.amplitude;
    out = WindowedSequence<double>(spec.window.lo, std::move(patched));
  }
  return out;
}

struct WeightSpec {
  WeightKind kind = WeightKind::constant;
  IntegerInterval window{0, 15};
  double value = 1.0;         // constant level
  double low = 1.0;           // alternating levels
  double high = 2.0;
  double alpha = 0.4;         // power exponent
  std::int64_t center = 0;    // power profile center
  double ratio_bound = 4.0;   // max/min cap for the random kind
  int quantum = 256;
};

inline WeightSequence<double> generate_weight(const WeightSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(spec.window.cardinality());
  std::vector<double> values(n, spec.value);
  switch (spec.kind) {
    case WeightKind::constant:
      break;
    case WeightKind::alternating:
      for (std::int64_t m = spec.window.lo; m <= spec.window.hi; ++m)
        values[static_cast<std::size_t>(m - spec.window.lo)] = (m & 1) ? spec.high : spec.low;
      break;
    case WeightKind::power:
      for (std::int64_t m = spec.window.lo; m <= spec.window.hi; ++m)
        values[static_cast<std::size_t>(m - spec.window.lo)] =
            std::pow(1.0 + static_cast<double>(std::llabs(m - spec.center)), spec.alpha);
      break;
    case WeightKind::random_bounded_ratio:
      if (spec.ratio_bound < 1.0)
        throw std::invalid_argument("generate_weight: ratio bound must be >= 1");
      for (auto& v : values) {
        const double u = detail::quantized_positive(rng, spec.quantum);  // (0, 1]
        v = 1.0 + (spec.ratio_bound - 1.0) * std::floor(u * spec.quantum) / spec.quantum;
      }
      break;
  }
  return WeightSequence<double>(WindowedSequence<double>(spec.window.lo, std::move(values)));
}

struct SystemSpec {
  SystemKind kind = SystemKind::cycle;
  int n = 8;      // positive-mass atoms
  int extra = 2;  // null atoms appended (cycle_with_null_atoms only)
};

namespace detail {

inline std::vector<int> system_perm(const SystemSpec& spec) {
  switch (spec.kind) {
    case SystemKind::cycle: {
      std::vector<int> perm(static_cast<std::size_t>(spec.n));
      for (int i = 0; i < spec.n; ++i) perm[static_cast<std::size_t>(i)] = (i + 1) % spec.n;
      return perm;
    }
    case SystemKind::two_cycles: {
      if (spec.n < 2) throw std::invalid_argument("two_cycles needs n >= 2");
      const int h = spec.n / 2;
      std::vector<int> perm(static_cast<std::size_t>(spec.n));
      for (int i = 0; i < h; ++i) perm[static_cast<std::size_t>(i)] = (i + 1) % h;
      for (int i = h; i < spec.n; ++i)
        perm[static_cast<std::size_t>(i)] = h + (i - h + 1) % (spec.n - h);
      return perm;
    }
    case SystemKind::cycle_with_null_atoms: {
      const int total = spec.n + spec.extra;
      std::vector<int> perm(static_cast<std::size_t>(total));
      for (int i = 0; i < spec.n; ++i) perm[static_cast<std::size_t>(i)] = (i + 1) % spec.n;
      for (int i = spec.n; i < total; ++i) perm[static_cast<std::size_t>(i)] = i;  // null fixed points
      return perm;
    }
  }
  throw std::invalid_argument("generate_system: unknown kind");
}

}  // namespace detail

inline FinitePermutationSystem<double> generate_system(const SystemSpec& spec, std::uint64_t /*seed*/ = 0) {
  const std::vector<int> perm = detail::system_perm(spec);
  std::vector<double> masses(perm.size(), 0.0);
  for (int i = 0; i < spec.n; ++i) masses[static_cast<std::size_t>(i)] = 1.0 / spec.n;
  if (spec.kind == SystemKind::two_cycles)
    for (auto& m : masses) m = 1.0 / spec.n;
  return {std::move(masses), perm};
}

/// Same corpora with exact masses (1/n as a true rational), for the
/// exact-identity checks.
inline FinitePermutationSystem<Rational> generate_system_exact(const SystemSpec& spec,
                                                               std::uint64_t /*seed*/ = 0) {
  const std::vector<int> perm = detail::system_perm(spec);
  std::vector<Rational> masses(perm.size(), Rational(0));
  for (int i = 0; i < spec.n; ++i) masses[static_cast<std::size_t>(i)] = Rational(1, spec.n);
  if (spec.kind == SystemKind::two_cycles)
    for (auto& m : masses) m = Rational(1, spec.n);
  return {std::move(masses), perm};
}

enum class AtomFunctionKind { delta, constant, random_dense, random_sparse };
enum class AtomWeightKind { constant, alternating_cycle, power_cycle, random_bounded_ratio };

inline AtomFunction<double> generate_atom_function(AtomFunctionKind kind, int n_atoms,
                                                   std::uint64_t seed, int quantum = 256) {
  std::mt19937_64 rng(seed);
  AtomFunction<double> f(static_cast<std::size_t>(n_atoms), 0.0);
  switch (kind) {
    case AtomFunctionKind::delta:
      f[0] = 1.0;
      break;
    case AtomFunctionKind::constant:
      for (auto& v : f) v = 1.0;
      break;
    case AtomFunctionKind::random_dense:
      for (auto& v : f) v = detail::quantized_positive(rng, quantum);
      break;
    case AtomFunctionKind::random_sparse:
      for (auto& v : f)
        if (detail::unit_uniform(rng) < 0.25) v = detail::quantized_positive(rng, quantum);
      if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) f[0] = 1.0;
      break;
  }
  return f;
}

/// Weight profiles laid out along the positive-mass cycle (distance measured
/// circularly from the cycle's first atom). Null atoms get weight 1.
template <typename T>
AtomFunction<double> generate_atom_weight(const FinitePermutationSystem<T>& sys, AtomWeightKind kind,
                                          double alpha, double ratio_bound, std::uint64_t seed,
                                          int quantum = 256) {
  std::mt19937_64 rng(seed);
  AtomFunction<double> w(static_cast<std::size_t>(sys.atom_count()), 1.0);
  const auto& cycle = sys.positive_cycle();
  const auto len = static_cast<std::int64_t>(cycle.size());
  for (std::int64_t pos = 0; pos < len; ++pos) {
    const auto atom = static_cast<std::size_t>(cycle[static_cast<std::size_t>(pos)]);
    switch (kind) {
      case AtomWeightKind::constant:
        w[atom] = 1.0;
        break;
      case AtomWeightKind::alternating_cycle:
        w[atom] = (pos & 1) ? 2.0 : 1.0;
        break;
      case AtomWeightKind::power_cycle: {
        const std::int64_t dist = std::min(pos, len - pos);
        w[atom] = std::pow(1.0 + static_cast<double>(dist), alpha);
        break;
      }
      case AtomWeightKind::random_bounded_ratio: {
        const double u = detail::quantized_positive(rng, quantum);
        w[atom] = 1.0 + (ratio_bound - 1.0) * std::floor(u * quantum) / quantum;
        break;
      }
    }
  }
  return w;
}

inline AtomFunction<Rational> atom_function_to_rational(const AtomFunction<double>& f) {
  AtomFunction<Rational> out;
  out.reserve(f.size());
  for (const double v : f) out.push_back(rational_from_double(v));
  return out;
}

/// Geometric threshold grid lambda_i = lambda_max / 2^i, spanning from above
/// the largest value (empty superlevel set) down past the smallest positive
/// dyadic average (full coverage), capped at `points` entries.
template <typename T>
std::vector<double> lambda_grid(const WindowedSequence<T>& a, int points) {
  const auto support = a.support();
  if (!support || points <= 0) return {};
  const double max_abs = num::as_double(a.max_abs());
  const double l1 = num::as_double(a.l1_norm());
  // covering-level average ~ the smallest positive dyadic average scale
  const int top = detail::dyadic_cover_level(support, support->lo);
  const double lambda_min = l1 / static_cast<double>(std::int64_t{1} << top) / 4.0;
  std::vector<double> grid;
  double lambda = 4.0 * max_abs;
  for (int i = 0; i < points; ++i) {
    grid.push_back(lambda);
    if (lambda <= lambda_min) break;
    lambda /= 2.0;
  }
  return grid;
}

}  // namespace ergomax
