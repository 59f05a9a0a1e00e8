#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <ergomax/core.hpp>
#include <ergomax/generators.hpp>

#include "oracles.hpp"

using namespace ergomax;

TEST_CASE("dyadic interval endpoints and membership") {
  const DyadicInterval i11(1, 1);
  CHECK(i11.lo() == 1);
  CHECK(i11.hi() == 2);
  CHECK(i11.cardinality() == 2);

  // j = ceil(m / 2^N), including the nonpositive side
  CHECK(dyadic_containing(1, 1) == DyadicInterval(1, 1));
  CHECK(dyadic_containing(0, 1) == DyadicInterval(1, 0));
  CHECK(dyadic_containing(0, 1).interval() == IntegerInterval(-1, 0));
  for (const int level : {1, 2, 3, 5}) {
    const std::int64_t edge = std::int64_t{1} << level;  // m = 2^N sits in I_{N,1}
    CHECK(dyadic_containing(edge, level).index == 1);
  }
}

TEST_CASE("dyadic chain through a point") {
  const auto chain = dyadic_intervals_containing(1, 2);
  REQUIRE(chain.size() == 2);
  CHECK(chain[0].interval() == IntegerInterval(1, 2));
  CHECK(chain[1].interval() == IntegerInterval(1, 4));

  const auto at_zero = dyadic_intervals_containing(0, 1);
  REQUIRE(at_zero.size() == 1);
  CHECK(at_zero[0].interval() == IntegerInterval(-1, 0));

  for (const std::int64_t m : {-17, -1, 0, 3, 64}) {
    for (const auto& d : dyadic_intervals_containing(m, 6)) CHECK(d.contains(m));
  }
}

TEST_CASE("fixed level tiles the integers disjointly") {
  for (const int level : {1, 2, 3}) {
    for (std::int64_t m = -40; m <= 40; ++m) {
      const DyadicInterval d = dyadic_containing(m, level);
      CHECK(d.contains(m));
      // uniqueness: the neighbors at the same level miss m
      CHECK_FALSE(DyadicInterval(level, d.index - 1).contains(m));
      CHECK_FALSE(DyadicInterval(level, d.index + 1).contains(m));
    }
  }
}

TEST_CASE("parent splits into exactly its two children") {
  for (const int level : {2, 3, 6}) {
    for (const std::int64_t j : {-3, -1, 0, 1, 2, 9}) {
      const DyadicInterval parent(level, j);
      const DyadicInterval left = parent.left_child();
      const DyadicInterval right = parent.right_child();
      CHECK(left.lo() == parent.lo());
      CHECK(left.hi() + 1 == right.lo());
      CHECK(right.hi() == parent.hi());
      CHECK(left.parent() == parent);
      CHECK(right.parent() == parent);
    }
  }
}

TEST_CASE("expansions 2mLI, 2mRI, (2m+1)I") {
  const DyadicInterval i11(1, 1);  // [1, 2]
  CHECK(expand(i11, 1, ExpandMode::left) == IntegerInterval(-1, 2));
  CHECK(expand(i11, 1, ExpandMode::symmetric) == IntegerInterval(-1, 4));
  CHECK(expand(i11, 1, ExpandMode::symmetric).cardinality() == 6);

  for (const int level : {1, 2, 4}) {
    for (const std::int64_t j : {-2, 0, 1, 5}) {
      const DyadicInterval d(level, j);
      for (const std::int64_t m : {1, 2, 3}) {
        const auto left = expand(d, m, ExpandMode::left);
        const auto right = expand(d, m, ExpandMode::right);
        const auto sym = expand(d, m, ExpandMode::symmetric);
        CHECK(right.lo == d.lo());
        CHECK(left.hi == d.hi());
        CHECK(left.cardinality() == 2 * m * d.cardinality());
        CHECK(right.cardinality() == 2 * m * d.cardinality());
        CHECK(sym.cardinality() == (4 * m - 1) * d.cardinality());
        CHECK(sym.contains(d.interval()));
        CHECK(sym.lo == left.lo);
        CHECK(sym.hi == right.hi);
      }
    }
  }
}

TEST_CASE("interval averages") {
  const auto zeros = WindowedSequence<double>::zeros({-2, 2});
  CHECK(interval_average(zeros, {-5, 5}) == 0.0);

  const auto delta = WindowedSequence<double>::delta(0);
  CHECK(interval_average(delta, {0, 1}) == 0.5);

  const WindowedSequence<double> ramp(1, {1.0, 2.0, 3.0, 4.0});
  CHECK(interval_average(ramp, {1, 4}) == 2.5);
}

TEST_CASE("prefix sums match direct summation exhaustively") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::int64_t size = 1 + static_cast<std::int64_t>(rng() % 64);
    const std::int64_t offset = static_cast<std::int64_t>(rng() % 41) - 20;
    std::vector<double> values(static_cast<std::size_t>(size));
    for (auto& v : values)
      v = (static_cast<double>(rng() % 512) - 256.0) / 256.0;
    const WindowedSequence<double> a(offset, values);
    const PrefixTable<double> table(a, false);
    const PrefixTable<double> abs_table(a, true);
    const auto w = a.window();
    for (std::int64_t lo = w.lo - 2; lo <= w.hi + 2; ++lo) {
      for (std::int64_t hi = lo; hi <= w.hi + 2; ++hi) {
        const double direct = oracle::direct_signed_sum(a, lo, hi);
        const double direct_abs = oracle::direct_abs_sum(a, lo, hi);
        CHECK(table.sum({lo, hi}) == Catch::Approx(direct).margin(1e-12));
        CHECK(abs_table.sum({lo, hi}) == Catch::Approx(direct_abs).margin(1e-12));
      }
    }
  }
}

TEST_CASE("prefix sums are exact in rational mode") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const std::int64_t size = 1 + static_cast<std::int64_t>(rng() % 32);
    std::vector<Rational> values(static_cast<std::size_t>(size));
    for (auto& v : values)
      v = Rational(static_cast<int>(rng() % 97) - 48, 1 + static_cast<int>(rng() % 7));
    const WindowedSequence<Rational> a(-5, values);
    const PrefixTable<Rational> table(a, false);
    const auto w = a.window();
    for (std::int64_t lo = w.lo; lo <= w.hi; ++lo)
      for (std::int64_t hi = lo; hi <= w.hi; ++hi)
        REQUIRE(table.sum({lo, hi}) == oracle::direct_signed_sum(a, lo, hi));
  }
}

TEST_CASE("windowed sequence support and zero extension") {
  const WindowedSequence<double> a(3, {0.0, 0.0, 1.0, 0.0, 2.0, 0.0});
  REQUIRE(a.support().has_value());
  CHECK(*a.support() == IntegerInterval(5, 7));
  CHECK(a[2] == 0.0);
  CHECK(a[5] == 1.0);
  CHECK(a[100] == 0.0);
  CHECK(a.l1_norm() == 3.0);
  CHECK(WindowedSequence<double>::zeros({0, 4}).is_zero());
}

TEST_CASE("rational conversion is exact for doubles") {
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(-3.0) == Rational(-3));
  CHECK(rational_from_double(0.1) != Rational(1, 10));  // 0.1 is not dyadic
  CHECK(num::as_double(rational_from_double(0.1)) == 0.1);

  CHECK(rational_from_string("3/4") == Rational(3, 4));
  CHECK(rational_from_string("-7") == Rational(-7));
  CHECK(rational_from_string("0.25") == Rational(1, 4));
  CHECK_THROWS(rational_from_string("1/0"));
}
