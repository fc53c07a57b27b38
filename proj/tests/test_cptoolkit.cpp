#include <doctest.h>

#include <cmath>
#include <vector>

#include "cptoolkit.hpp"
#include "errors.hpp"
#include "rng.hpp"

using namespace sic;

TEST_SUITE_BEGIN("cptoolkit");

TEST_CASE("the half-line front dominates the single-site front on shared streams") {
  Box box = make_box1(-40, 40);
  std::vector<int32_t> halfline;
  for (int32_t x = -40; x <= 0; ++x) halfline.push_back(x);
  std::vector<double> ts = {2.0, 5.0, 8.0, 12.0};
  long long violations = 0, live_samples = 0;
  for (uint64_t r = 0; r < 100; ++r) {
    uint64_t s = derive_seed(13000, r);
    auto big = edge_trace(2.0, halfline, box, ts, s);
    auto small = edge_trace(2.0, {0}, box, ts, s);
    for (size_t k = 0; k < ts.size(); ++k) {
      if (std::isfinite(small[k])) {
        ++live_samples;
        if (big[k] < small[k]) ++violations;
      }
    }
  }
  CHECK(violations == 0);
  CHECK(live_samples > 100);
}

TEST_CASE("the front speed increases with the birth rate") {
  EdgeSpeedResult a = edge_speed(1.8, 60.0, 120, 150, 13100);
  EdgeSpeedResult b = edge_speed(2.0, 60.0, 150, 150, 13101);
  CHECK(a.v_hat.value > 0.0);
  CHECK(b.v_hat.lo > a.v_hat.hi); // non-overlapping intervals
  CHECK(b.v_hat.value < 2.0);     // the front cannot outrun the birth rate
  CHECK(a.wall_hits == 0);
  CHECK(b.wall_hits == 0);
}

TEST_CASE("a cramped box raises the wall error") {
  CHECK_THROWS_AS(edge_speed(3.0, 60.0, 80, 50, 13200), DomainError);
}

TEST_CASE("extinct runs are excluded from the speed and counted") {
  EdgeSpeedResult r = edge_speed(1.2, 15.0, 40, 150, 13300);
  CHECK(r.extinct > 0);
  CHECK(r.surviving + r.extinct == 150);
  CHECK(r.v_hat.value < 0.0); // subcritical front recedes
  CHECK_THROWS_AS(edge_speed(0.3, 50.0, 40, 30, 13301), DomainError); // all extinct
}

TEST_CASE("front tails decay on both sides of the speed with clean fits") {
  EdgeTailResult t = edge_tail(2.0, 0.1, 1.2, {8, 16, 24, 32, 40}, 130, 1200, 13400);
  CHECK(t.gamma0_hat > 0.0);
  CHECK(t.gamma1_hat > 0.0);
  CHECK(t.r2_low > 0.9);
  CHECK(t.r2_high > 0.9);
  CHECK(t.p_low.front().value > t.p_low.back().value);
  CHECK(t.p_high.front().value > t.p_high.back().value);
}

TEST_CASE("a bound above the maximal speed is never exceeded") {
  EdgeTailResult t = edge_tail(2.0, 0.1, 5.0, {5.0, 10.0}, 60, 300, 13500);
  for (const EstimateCI& p : t.p_high) CHECK(p.value == 0.0);
}

TEST_CASE("tail bounds must be ordered") {
  CHECK_THROWS_AS(edge_tail(2.0, 1.2, 0.5, {5.0}, 60, 10, 13600), DomainError);
  CHECK_THROWS_AS(edge_tail(2.0, 0.1, 1.2, {}, 60, 10, 13601), DomainError);
}

TEST_CASE("survival from a single site at rate zero matches the exact value") {
  EstimateCI s = finite_set_survival(0.0, {0}, 1.0, 40000, 13700);
  double expect = std::exp(-1.0);
  CHECK(std::abs(s.value - expect) < 4.0 * s.se);
}

TEST_CASE("an empty seed set never survives") {
  EstimateCI s = finite_set_survival(2.0, {}, 5.0, 100, 13800);
  CHECK(s.value == 0.0);
  CHECK(s.hi == 0.0); // exact, not a Monte Carlo zero
}

TEST_CASE("survival grows with the seed set") {
  EstimateCI s1 = finite_set_survival(1.7, {0}, 15.0, 400, 13900);
  EstimateCI s5 = finite_set_survival(1.7, {0, 1, 2, 3, 4}, 15.0, 400, 13901);
  CHECK(s5.lo > s1.hi);
}

TEST_CASE("window trimming keeps only the central interval") {
  // 1's only outside the trimmed window: nothing is kept, survival is exactly 0
  std::vector<int8_t> edge_only(61, 0);
  edge_only[0] = edge_only[1] = edge_only[59] = edge_only[60] = 1;
  EpsGoodResult none = epsilon_good(edge_only, 0.1, 20, 2.0, -1.0, 50, 14000);
  CHECK(none.kept_ones == 0);
  CHECK(none.survival.value == 0.0);
  CHECK(none.survival.hi == 0.0);

  std::vector<int8_t> full(61, 1);
  EpsGoodResult all = epsilon_good(full, 0.1, 20, 2.0, -1.0, 200, 14001);
  CHECK(all.kept_ones == 57); // cut = ceil(0.1 * 20) = 2 from each side
  CHECK(all.t_max_used == 120.0);
  CHECK(all.survival.value > 0.9);
}

TEST_CASE("survival of a trimmed configuration is monotone under shared streams") {
  std::vector<int8_t> sparse(61, 0), dense(61, 0);
  for (int32_t x = 20; x <= 40; x += 5) sparse[(size_t)x] = 1;
  for (int32_t x = 15; x <= 45; ++x) dense[(size_t)x] = 1;
  EpsGoodResult a = epsilon_good(sparse, 0.1, 20, 1.8, 40.0, 150, 14100);
  EpsGoodResult b = epsilon_good(dense, 0.1, 20, 1.8, 40.0, 150, 14100);
  // same seed, same box: every stream that keeps the sparse set alive keeps
  // the dense one alive, so the ordering is exact rather than statistical
  CHECK(a.survival.value <= b.survival.value);
  CHECK(b.survival.value > a.survival.value - 1e-12);
}

TEST_CASE("configurations shorter than twice the scale are rejected") {
  std::vector<int8_t> cfg(30, 1);
  CHECK_THROWS_AS(epsilon_good(cfg, 0.1, 20, 2.0, -1.0, 10, 14200), DomainError);
  std::vector<int8_t> bad(61, 0);
  bad[5] = 2;
  CHECK_THROWS_AS(epsilon_good(bad, 0.1, 20, 2.0, -1.0, 10, 14201), DomainError);
}

TEST_CASE("the moving window cannot be crossed without births") {
  ParallelogramResult r = parallelogram_open(0.0, 30.0, 0.5, 1.0, 100, 14300);
  CHECK(r.prob.value == 0.0);
  CHECK(r.audit_checked == 0);
}

TEST_CASE("a window faster than the front is not crossed") {
  ParallelogramResult r = parallelogram_open(3.0, 30.0, 0.5, 2.6, 150, 14400);
  CHECK(r.prob.value < 0.05);
}

TEST_CASE("a slow window is crossed and every success passes the audit") {
  ParallelogramResult r = parallelogram_open(3.0, 30.0, 0.5, 1.0, 200, 14500);
  CHECK(r.start_lo == -17);
  CHECK(r.start_hi == -13);
  CHECK(r.end_lo == 57);
  CHECK(r.end_hi == 63);
  CHECK(r.t_L == doctest::Approx(75.0));
  CHECK(r.prob.value > 0.6);
  CHECK(r.audit_checked > 100);
  CHECK(r.audit_failures == 0);
}

TEST_CASE("degenerate window geometry is rejected") {
  CHECK_THROWS_AS(parallelogram_open(-1.0, 30.0, 0.5, 1.0, 10, 1), DomainError);
  CHECK_THROWS_AS(parallelogram_open(2.0, 0.0, 0.5, 1.0, 10, 1), DomainError);
  CHECK_THROWS_AS(parallelogram_open(2.0, 30.0, 0.5, 0.0, 10, 1), DomainError);
  CHECK_THROWS_AS(parallelogram_open(2.0, 2.0, 0.05, 1.0, 10, 1), DomainError); // empty target
}

TEST_SUITE_END();
