#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <ergomax/generators.hpp>
#include <ergomax/maximal.hpp>

#include "oracles.hpp"

using namespace ergomax;

namespace {

WindowedSequence<double> random_sequence(std::mt19937_64& rng, std::int64_t size, bool signed_values) {
  SequenceSpec spec;
  spec.kind = SequenceKind::random_dense;
  spec.window = {-(size / 2), size - 1 - size / 2};
  spec.signed_values = signed_values;
  return generate_sequence(spec, rng());
}

}  // namespace

TEST_CASE("centered maximal on a delta") {
  const auto delta = WindowedSequence<double>::delta(0);
  const auto result = centered_maximal(delta, {-6, 6});
  for (std::int64_t m = -6; m <= 6; ++m) {
    const double expected = 1.0 / (2.0 * std::llabs(m) + 1.0);
    CHECK(result.at(m) == Catch::Approx(m == 0 ? 1.0 / 3.0 : expected));
    CHECK(result.at(m) == Catch::Approx(oracle::centered(delta, m)));
  }
  // attaining window is [m - |m|, m + |m|] (radius max(1, |m|))
  CHECK(result.witness(3) == IntegerInterval(0, 6));
  CHECK(result.witness(0) == IntegerInterval(-1, 1));
}

TEST_CASE("centered maximal of a constant is the constant at interior points") {
  const WindowedSequence<double> c(0, std::vector<double>(41, 2.5));
  const auto result = centered_maximal(c, {15, 25});
  for (std::int64_t m = 15; m <= 25; ++m) CHECK(result.at(m) == Catch::Approx(2.5));
}

TEST_CASE("truncated centered maximal") {
  const auto delta = WindowedSequence<double>::delta(0);
  // only r = 1 allowed; the window [2, 4] misses the support
  const auto truncated = centered_maximal(delta, {3, 3}, 2);
  CHECK(truncated.at(3) == 0.0);
  CHECK(truncated.at(3) == oracle::centered(delta, 3, 2));
  CHECK_THROWS_AS(centered_maximal(delta, {0, 0}, 1), std::invalid_argument);

  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_sequence(rng, 24, true);
    const IntegerInterval eval{a.window().lo - 4, a.window().hi + 4};
    const auto full = centered_maximal(a, eval);
    MaximalResult<double> prev = centered_maximal(a, eval, 2);
    for (const std::int64_t j : {3, 5, 9, 70}) {
      const auto next = centered_maximal(a, eval, j);
      for (std::int64_t m = eval.lo; m <= eval.hi; ++m) {
        CHECK(prev.at(m) <= next.at(m) * (1 + 1e-12) + 1e-15);
        CHECK(next.at(m) <= full.at(m) * (1 + 1e-12) + 1e-15);
      }
      prev = next;
    }
    // J beyond every useful radius reproduces the untruncated operator
    const auto huge = centered_maximal(a, eval, 4096);
    for (std::int64_t m = eval.lo; m <= eval.hi; ++m) CHECK(huge.at(m) == full.at(m));
  }
}

TEST_CASE("uncentered maximal on a delta") {
  const auto delta = WindowedSequence<double>::delta(0);
  const auto result = uncentered_maximal(delta, {-4, 4});
  CHECK(result.at(0) == 1.0);  // singleton {0}
  CHECK(result.witness(0) == IntegerInterval(0, 0));
  CHECK(result.at(1) == 0.5);  // interval [0, 1]
  CHECK(result.witness(1) == IntegerInterval(0, 1));
  for (std::int64_t m = -4; m <= 4; ++m) {
    CHECK(result.at(m) == Catch::Approx(1.0 / (std::llabs(m) + 1.0)));
    CHECK(result.at(m) == Catch::Approx(oracle::uncentered(delta, m)));
  }
}

TEST_CASE("lemma-1 comparison is tight on the delta") {
  const auto delta = WindowedSequence<Rational>::delta(0);
  const auto centered = centered_maximal(delta, {0, 0});
  const auto uncentered = uncentered_maximal(delta, {0, 0});
  REQUIRE(uncentered.at(0) == Rational(1));
  REQUIRE(centered.at(0) == Rational(1, 3));
  REQUIRE(uncentered.at(0) == Rational(3) * centered.at(0));  // exact equality
}

TEST_CASE("pointwise comparisons among the operators") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_sequence(rng, 8 + static_cast<std::int64_t>(rng() % 56), trial % 2 == 0);
    const IntegerInterval eval{a.window().lo - 6, a.window().hi + 6};
    const auto centered = centered_maximal(a, eval);
    const auto uncentered = uncentered_maximal(a, eval);
    const auto dyadic = dyadic_maximal(a, eval);
    int violations = 0;
    for (std::int64_t m = eval.lo; m <= eval.hi; ++m) {
      const double mc = centered.at(m);
      const double mu = uncentered.at(m);
      const double md = dyadic.at(m);
      if (mc > mu * (1 + 1e-12)) ++violations;          // M' <= M
      if (mu > 3 * mc * (1 + 1e-12)) ++violations;      // M <= 3 M'
      if (md > mu * (1 + 1e-12)) ++violations;          // M_d <= M
      if (std::abs(a[m]) > mu * (1 + 1e-12)) ++violations;  // singleton bound
    }
    REQUIRE(violations == 0);
  }
}

TEST_CASE("sublinearity and homogeneity") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 12; ++trial) {
    SequenceSpec spec;
    spec.kind = SequenceKind::random_dense;
    spec.window = {-8, 9};
    spec.signed_values = true;
    const auto a = generate_sequence(spec, rng());
    const auto b = generate_sequence(spec, rng());
    std::vector<double> sum_values;
    for (std::int64_t m = spec.window.lo; m <= spec.window.hi; ++m) sum_values.push_back(a[m] + b[m]);
    const WindowedSequence<double> sum(spec.window.lo, sum_values);
    const IntegerInterval eval{-12, 13};
    const IntegerInterval shared_range{-40, 41};

    const auto check_sublinear = [&](auto&& op) {
      const auto ra = op(a);
      const auto rb = op(b);
      const auto rs = op(sum);
      for (std::int64_t m = eval.lo; m <= eval.hi; ++m)
        REQUIRE(rs.at(m) <= ra.at(m) + rb.at(m) + 1e-11);
    };
    check_sublinear([&](const auto& s) { return centered_maximal(s, eval); });
    check_sublinear([&](const auto& s) { return uncentered_maximal(s, eval); });
    check_sublinear([&](const auto& s) { return dyadic_maximal(s, eval); });
    check_sublinear([&](const auto& s) { return sharp_maximal(s, eval, shared_range); });

    const double c = 1.0 + static_cast<double>(rng() % 8);
    std::vector<double> scaled_values;
    for (std::int64_t m = spec.window.lo; m <= spec.window.hi; ++m) scaled_values.push_back(c * a[m]);
    const WindowedSequence<double> scaled(spec.window.lo, scaled_values);
    const auto ra = uncentered_maximal(a, eval);
    const auto rs = uncentered_maximal(scaled, eval);
    for (std::int64_t m = eval.lo; m <= eval.hi; ++m)
      REQUIRE(rs.at(m) == Catch::Approx(c * ra.at(m)));
  }
}

TEST_CASE("dyadic maximal examples") {
  const auto delta1 = WindowedSequence<double>::delta(1);
  const auto result = dyadic_maximal(delta1, {-2, 3});
  CHECK(result.at(1) == 0.5);
  CHECK(result.witness(1) == IntegerInterval(1, 2));
  CHECK(result.at(0) == 0.0);  // [-1,0], [-3,0], ... all miss the support
  for (std::int64_t m = -2; m <= 3; ++m)
    CHECK(result.at(m) == Catch::Approx(oracle::dyadic(delta1, m)));

  // grid-aligned constant window: every level-1 pair lies inside
  const WindowedSequence<double> c(1, std::vector<double>(32, 0.75));
  const auto rc = dyadic_maximal(c, {1, 32});
  for (std::int64_t m = 1; m <= 32; ++m) CHECK(rc.at(m) == Catch::Approx(0.75));
}

TEST_CASE("sharp maximal and BMO") {
  // constants have zero oscillation
  const WindowedSequence<double> c(0, std::vector<double>(12, 3.0));
  CHECK(bmo_norm(c).norm == 0.0);
  CHECK(best_constant_oscillation(c) == 0.0);

  // step on [-8, 7]: oscillation 1/2 attained on a half/half pair
  std::vector<double> step_values(16, 0.0);
  for (std::size_t i = 8; i < 16; ++i) step_values[i] = 1.0;
  const WindowedSequence<double> step(-8, step_values);
  const auto sharp = sharp_maximal(step, {-8, 7});
  CHECK(sharp.at(0) >= 0.5);
  const auto bmo = bmo_norm(step);
  CHECK(bmo.norm == Catch::Approx(0.5));
  CHECK(bmo.witness == IntegerInterval(-1, 0));  // tie rule: smallest |I|, then smallest lo

  // oscillation about the best constant: {0,1} -> 1/2 at any median
  CHECK(best_constant_oscillation(step) == Catch::Approx(0.5));

  // adding a constant shifts every a_I identically
  std::vector<double> shifted_values = step_values;
  for (auto& v : shifted_values) v += 4.25;
  const WindowedSequence<double> shifted(-8, shifted_values);
  CHECK(bmo_norm(shifted).norm == Catch::Approx(bmo.norm));
}

TEST_CASE("sharp maximal against the direct oracle") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 8; ++trial) {
    const auto a = random_sequence(rng, 12, true);
    const auto range = default_sharp_range(a);
    const auto sharp = sharp_maximal(a, a.window(), range);
    for (std::int64_t m = a.window().lo; m <= a.window().hi; ++m)
      REQUIRE(sharp.at(m) == Catch::Approx(oracle::sharp(a, m, range)).margin(1e-12));
  }
}

TEST_CASE("lemma-3 bounds: best constant vs BMO norm, abs comparison") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_sequence(rng, 6 + static_cast<std::int64_t>(rng() % 26), true);
    const auto bmo = bmo_norm(a);
    const double bco = best_constant_oscillation(a);
    REQUIRE(bco <= bmo.norm * (1 + 1e-9));
    REQUIRE(bmo.norm <= 2 * bco * (1 + 1e-9));

    const auto sharp_signed = sharp_maximal(a, a.window());
    const auto sharp_abs = sharp_maximal(a.abs(), a.window());
    for (std::int64_t m = a.window().lo; m <= a.window().hi; ++m)
      REQUIRE(sharp_abs.at(m) <= sharp_signed.at(m) * (1 + 1e-9) + 1e-15);
  }
}

TEST_CASE("best-constant oscillation matches the grid-minimization oracle") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = random_sequence(rng, 8, true);
    const IntegerInterval range{a.window().lo - 4, a.window().hi + 4};
    const double median_based = best_constant_oscillation(a, range);
    const double grid_based = oracle::best_constant_grid(a, range);
    REQUIRE(median_based == Catch::Approx(grid_based).epsilon(1e-6));
  }
}

TEST_CASE("optimized operators equal the brute-force oracles (exhaustive, rational)") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    const std::int64_t size = 1 + static_cast<std::int64_t>(rng() % 48);
    SequenceSpec spec;
    spec.kind = trial % 2 == 0 ? SequenceKind::random_dense : SequenceKind::random_sparse;
    spec.window = {-(size / 2), size - 1 - size / 2};
    spec.signed_values = true;
    const auto a_double = generate_sequence(spec, rng());
    const auto a = to_rational(a_double);
    const IntegerInterval eval{a.window().lo - 4, a.window().hi + 4};
    const auto centered = centered_maximal(a, eval);
    const auto uncentered = uncentered_maximal(a, eval);
    const auto dyadic = dyadic_maximal(a, eval);
    for (std::int64_t m = eval.lo; m <= eval.hi; ++m) {
      REQUIRE(centered.at(m) == oracle::centered(a, m));
      REQUIRE(uncentered.at(m) == oracle::uncentered(a, m));
      REQUIRE(dyadic.at(m) == oracle::dyadic(a, m));
    }
  }
}

TEST_CASE("optimized operators track the oracles on large windows (float)") {
  std::mt19937_64 rng(888);
  for (const std::int64_t size : {1024, 4096}) {
    for (const SequenceKind kind : {SequenceKind::random_dense, SequenceKind::random_sparse}) {
      SequenceSpec spec;
      spec.kind = kind;
      spec.window = {-(size / 2), size - 1 - size / 2};
      const auto a = generate_sequence(spec, rng());
      for (int probe = 0; probe < 6; ++probe) {
        const std::int64_t m =
            a.window().lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(size));
        const auto centered = centered_maximal(a, {m, m});
        const auto uncentered = uncentered_maximal(a, {m, m});
        const auto dyadic = dyadic_maximal(a, {m, m});
        REQUIRE(centered.at(m) == Catch::Approx(oracle::centered(a, m)).epsilon(1e-12));
        REQUIRE(uncentered.at(m) == Catch::Approx(oracle::uncentered(a, m)).epsilon(1e-12));
        REQUIRE(dyadic.at(m) == Catch::Approx(oracle::dyadic(a, m)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("zero sequences give zero operators") {
  const auto zeros = WindowedSequence<double>::zeros({-3, 3});
  const auto centered = centered_maximal(zeros, {-5, 5});
  const auto uncentered = uncentered_maximal(zeros, {-5, 5});
  for (std::int64_t m = -5; m <= 5; ++m) {
    CHECK(centered.at(m) == 0.0);
    CHECK(uncentered.at(m) == 0.0);
  }
}
