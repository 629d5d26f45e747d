#include <random>

#include "doctest.h"
#include "lowvolt/speedup.hpp"
#include "oracle.hpp"

using namespace lowvolt;
using doctest::Approx;

namespace {
SpeedupModel<double> amdahl(double f) { return AmdahlSpeedup<double>{f}; }
SpeedupModel<double> table(std::vector<SpeedupRow<double>> rows) { return TableSpeedup<double>{std::move(rows)}; }
}  // namespace

TEST_CASE("Amdahl examples") {
  CHECK(speedup_at(amdahl(1.0), 37) == 37.0);
  CHECK(speedup_at(amdahl(0.0), 64) == 1.0);
  CHECK(speedup_at(amdahl(0.9), 16) == Approx(6.4).epsilon(1e-15));
}

TEST_CASE("Amdahl is exact at f = 1 for every p") {
  for (int p = 1; p <= 4096; ++p) CHECK(speedup_at(amdahl(1.0), p) == static_cast<double>(p));
}

TEST_CASE("table interpolation") {
  const auto m = table({{1, 1.0}, {4, 3.2}, {8, 5.6}});
  CHECK(speedup_at(m, 1) == 1.0);
  CHECK(speedup_at(m, 4) == 3.2);
  CHECK(speedup_at(m, 8) == 5.6);
  CHECK(speedup_at(m, 2) == Approx(1.0 + 2.2 / 3));
  CHECK(speedup_at(m, 6) == Approx(4.4));
  try {
    speedup_at(m, 9);
    FAIL("expected OutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRange);
  }
  CHECK_THROWS_AS(speedup_at(m, 0), Error);
  CHECK(max_core_count(m) == 8);
}

TEST_CASE("validate_model") {
  CHECK(validate_model(amdahl(0.5)).ok());
  CHECK_FALSE(validate_model(amdahl(1.5)).ok());
  CHECK_FALSE(validate_model(amdahl(-0.1)).ok());

  const auto unsorted = validate_model(table({{1, 1.0}, {4, 3.2}, {2, 1.9}}));
  REQUIRE_FALSE(unsorted.ok());
  CHECK(unsorted.violations.front() == "rows not sorted by p");

  const auto dip = validate_model(table({{1, 1.0}, {8, 5.0}, {16, 4.5}}));
  CHECK(dip.ok());
  CHECK(dip.warnings.size() == 1);

  CHECK_FALSE(validate_model(table({{1, 1.1}, {2, 1.5}})).ok());
  CHECK_FALSE(validate_model(table({{2, 1.5}, {4, 2.0}})).ok());
  CHECK_FALSE(validate_model(table({{1, 1.0}, {2, 0.9}})).ok());
  CHECK_FALSE(validate_model(table({{1, 1.0}, {1, 1.0}})).ok());
  CHECK_FALSE(validate_model(table({})).ok());
}

TEST_CASE("speedup_curve matches speedup_at") {
  for (double f : {0.0, 0.5, 0.9, 0.99, 1.0}) {
    const auto m = amdahl(f);
    const auto curve = speedup_curve(m, 1, 64);
    REQUIRE(curve.size() == 64);
    for (int p = 1; p <= 64; ++p) CHECK(curve(p - 1) == speedup_at(m, p));
  }
  const auto t = table({{1, 1.0}, {4, 3.2}, {8, 5.6}});
  const auto curve = speedup_curve(t, 2, 7);
  for (int p = 2; p <= 7; ++p) CHECK(curve(p - 2) == speedup_at(t, p));
  CHECK_THROWS_AS(speedup_curve(t, 3, 2), Error);
}

TEST_CASE("property: Amdahl monotone and bounded") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const double f = u(rng);
    const auto m = amdahl(f);
    CHECK(speedup_at(m, 1) == 1.0);
    double prev = 0;
    for (int p = 1; p <= 128; ++p) {
      const double s = speedup_at(m, p);
      CHECK(s >= prev);
      CHECK(s <= p * (1 + 1e-15));
      CHECK(s <= 1 / (1 - f) * (1 + 1e-15));
      CHECK(s == Approx(static_cast<double>(oracle::amdahl(f, p))).epsilon(1e-14));
      prev = s;
    }
  }
}

TEST_CASE("property: table reproduces its rows") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SpeedupRow<double>> rows{{1, 1.0}};
    int p = 1;
    double s = 1;
    for (int i = 0; i < 6; ++i) {
      p += 1 + static_cast<int>(u(rng) * 8);
      s += u(rng) * 3;
      rows.push_back({p, s});
    }
    const auto m = table(rows);
    REQUIRE(validate_model(m).ok());
    for (const auto& r : rows) CHECK(speedup_at(m, r.p) == r.s_p);
  }
}
