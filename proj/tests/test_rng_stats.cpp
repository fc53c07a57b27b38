#include <doctest.h>

#include <cmath>
#include <vector>

#include "rng.hpp"
#include "stats.hpp"

using namespace sic;

TEST_SUITE_BEGIN("rng_stats");

TEST_CASE("counter rng is deterministic and order-free") {
  CounterRng a(42, 7), b(42, 7);
  for (int i = 0; i < 100; i++) CHECK(a.next_u64() == b.next_u64());

  // random access via skip matches sequential draws
  CounterRng c(42, 7), d(42, 7);
  for (int i = 0; i < 10; i++) c.next_u64();
  d.skip(10);
  CHECK(c.next_u64() == d.next_u64());

  // different stream ids decorrelate
  CounterRng e(42, 8);
  CHECK(CounterRng(42, 7).next_u64() != e.next_u64());
}

TEST_CASE("u01 lies strictly inside (0,1) with sane moments") {
  CounterRng rng(123, 1);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; i++) {
    double u = rng.next_u01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 0.005);       // se ~ 0.00065
  CHECK(std::abs(var - 1.0 / 12) < 0.004);
}

TEST_CASE("exponential sampling has the right mean") {
  CounterRng rng(9, 2);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; i++) sum += rng.next_exp(2.0);
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("wilson interval brackets the proportion") {
  auto e = wilson_ci(0, 100, 1);
  CHECK(e.value == 0.0);
  CHECK(e.lo == 0.0);
  CHECK(e.hi > 0.0);
  CHECK(e.hi < 0.05);

  e = wilson_ci(100, 100, 1);
  CHECK(e.value == 1.0);
  CHECK(e.hi == 1.0);
  CHECK(e.lo > 0.95);

  e = wilson_ci(50, 100, 1);
  CHECK(e.value == doctest::Approx(0.5));
  CHECK(e.lo < 0.5);
  CHECK(e.hi > 0.5);
  CHECK(e.se == doctest::Approx(0.05));
}

TEST_CASE("mean ci covers the sample mean") {
  std::vector<double> xs{1, 2, 3, 4, 5};
  auto e = mean_ci(xs, 0);
  CHECK(e.value == doctest::Approx(3.0));
  CHECK(e.lo < 3.0);
  CHECK(e.hi > 3.0);
  CHECK(e.se == doctest::Approx(std::sqrt(2.5 / 5)));
}

TEST_CASE("linear fit recovers exact lines") {
  std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9}; // y = 2x + 1
  auto f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("z score uses combined standard errors") {
  EstimateCI a, b;
  a.value = 0.5;
  a.se = 0.03;
  b.value = 0.41;
  b.se = 0.04;
  CHECK(z_score(a, b) == doctest::Approx(0.09 / 0.05));
}

TEST_SUITE_END();
