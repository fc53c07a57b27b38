#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "process.hpp"
#include "renorm.hpp"

using namespace sic;

namespace {

ModelParams params1(double lambda, double theta, double alpha) {
  return ModelParams{lambda, theta, alpha, 1};
}
ModelParams params2(double lambda, double theta, double alpha) {
  return ModelParams{lambda, theta, alpha, 2};
}

} // namespace

TEST_SUITE("renorm") {

TEST_CASE("a birthless block is good once the window opens late enough") {
  BlockResult r = block_good_d1(2, 1.0, 4.0, 0.5, params1(0.0, 1.0, 0.5), 200, 17010);
  CHECK(r.T == doctest::Approx(10.0));
  CHECK(r.K == 2);
  CHECK(r.p_good.value == 1.0);
  CHECK(r.early_extinct == 200); // deaths only: every replica empties before T
}

TEST_CASE("a supercritical contact block without sterile pressure is rarely good") {
  // the block time unit comes from its own scale parameter, so the model
  // itself can have alpha = 0
  BlockResult r = block_good_d1(3, 1.0, 0.0, 0.05, params1(2.5, 1.0, 0.0), 200, 17020);
  CHECK(r.T == doctest::Approx(20.0));
  CHECK(r.p_good.value < 0.1);
  CHECK(r.p_good.hi < 0.15);
}

TEST_CASE("the tabulated block parameters reach the target good probability") {
  BlockResult slow =
      block_good_d1(4, 2.0, 2.0, 0.01, params1(2.0, 1.0, 0.01), 200, 18000);
  BlockResult fast = block_good_d1(4, 2.0, 2.0, 0.1, params1(2.0, 1.0, 0.1), 200, 18000);
  CHECK(slow.p_good.lo > 0.9);
  CHECK(slow.p_good.value == 1.0);
  // the same seeds at ten times the sterile rate leave less time for the
  // block to empty, so strictly fewer replicas are good
  CHECK(fast.p_good.value < slow.p_good.value);
  CHECK(fast.p_good.value > 0.8);
}

TEST_CASE("more birth arrows only hurt the block event") {
  BlockPairResult r =
      block_good_d1_pair(2, 1.0, 1.0, 0.5, params1(0.0, 1.0, 0.5), 0.5, 3.0, 200, 17040);
  CHECK(r.order_violations == 0);
  CHECK(r.lo.value > r.hi.value);
  CHECK(r.lo.value > 0.5);
  CHECK(r.hi.value < 0.2);
}

TEST_CASE("two-dimensional blocks derive their scale and respect the aspect bound") {
  BlockResult r = block_good_d2(0, 5.0, 5.0, params2(0.0, 1.0, 0.5), 100, 17050);
  CHECK(r.T == doctest::Approx(10.0));
  CHECK(r.K == 2); // derived: round(T / c_K)
  CHECK(r.p_good.value == 1.0);
  // 2*c_K must not exceed c0/lambda
  CHECK_THROWS_AS(block_good_d2(2, 5.0, 0.05, params2(1.0, 1.0, 0.5), 10, 17050),
                  DomainError);
}

TEST_CASE("the two-dimensional example reports a calibrated estimate") {
  ModelParams m = params2(1.0, 5.0, 0.02);
  BlockResult r = block_good_d2(2, 0.2, 0.03, m, 100, 17051);
  CHECK(r.T == doctest::Approx(10.0));
  CHECK(r.p_good.reps == 100);
  // supercritical births on a short window: almost never good at this scale
  CHECK(r.p_good.value < 0.2);
  BlockPairResult rp = block_good_d2_pair(2, 0.2, 0.015, m, 0.5, 2.0, 100, 17052);
  CHECK(rp.order_violations == 0);
  CHECK(rp.lo.value >= rp.hi.value);
}

TEST_CASE("never-sterile sites percolate when sterile pressure is calm") {
  InitialSpec init;
  init.kind = InitialSpec::Kind::Product;
  init.p1 = 0.05;
  init.p0 = 0.65;
  init.pm1 = 0.30;
  NEOpenResult r = ne_site_open(63, 0.5, 0.05, params2(1.0, 9.0, 0.01), init, 40, 17060);
  CHECK(r.T == doctest::Approx(5.0));
  CHECK(r.p_open.value > 0.9);
  CHECK(r.margin_ok); // theta/(1+theta)=0.9 and p0-p_c exceeds 1-exp(-2*eps0)
  CHECK(r.p0_hat == doctest::Approx(0.70).epsilon(0.03));
  CHECK(r.open_site_frac.value > 0.6);
  CHECK(r.open_site_frac.value < r.p0_hat); // extra sterile visits only close sites
}

TEST_CASE("a sterile-free start leaves every site open") {
  InitialSpec init;
  init.kind = InitialSpec::Kind::Product;
  init.p1 = 0.1;
  init.p0 = 0.9;
  init.pm1 = 0.0;
  NEOpenResult r = ne_site_open(21, 0.5, 0.0, params2(1.0, 1.0, 0.0), init, 20, 17061);
  CHECK(r.p_open.value == 1.0);
  CHECK(r.open_site_frac.value == 1.0);
  CHECK(r.margin_rhs == 0.0);
}

TEST_CASE("an all-sterile start blocks every crossing") {
  InitialSpec init;
  init.kind = InitialSpec::Kind::Product;
  init.p1 = 0.0;
  init.p0 = 0.0;
  init.pm1 = 1.0;
  NEOpenResult r = ne_site_open(21, 0.5, 0.01, params2(1.0, 1.0, 0.01), init, 10, 17062);
  CHECK(r.p_open.value == 0.0);
  CHECK(r.open_site_frac.value == 0.0);
  CHECK_FALSE(r.margin_ok);
}

TEST_CASE("a generous relaxation margin is flagged as violated") {
  InitialSpec init;
  init.kind = InitialSpec::Kind::Product;
  init.p1 = 0.05;
  init.p0 = 0.65;
  init.pm1 = 0.30;
  NEOpenResult r = ne_site_open(21, 0.5, 1.0, params2(1.0, 9.0, 0.2), init, 10, 17063);
  CHECK(r.margin_rhs == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK_FALSE(r.margin_ok); // p0 - p_c cannot reach 1-exp(-2)
}

TEST_CASE("oriented percolation wet sets match the degenerate limits") {
  OPRun full = op_run(1.0, 50, OPLattice::Diag1D, 17070);
  REQUIRE(full.survived);
  CHECK(full.levels.back().l == -50);
  CHECK(full.levels.back().r == 50);
  CHECK(full.levels.back().count == 51);
  CHECK(full.v_hat == 1.0);

  OPRun dead = op_run(0.0, 50, OPLattice::Diag1D, 17071);
  CHECK_FALSE(dead.survived);
  CHECK(dead.extinct_level == 1);
  CHECK(dead.levels.size() == 2);

  OPRun ne = op_run(1.0, 30, OPLattice::NE3D, 17072);
  REQUIRE(ne.survived);
  CHECK(ne.levels.back().l == 0);
  CHECK(ne.levels.back().r == 30);
  CHECK(ne.levels.back().count == 31);
  CHECK(ne.v_hat == 1.0);
}

TEST_CASE("supercritical oriented percolation survives with positive speed") {
  OPSurvival r = op_survival(0.9, 1000, OPLattice::Diag1D, 1000, 17073);
  CHECK(r.survival.value > 0.9);
  CHECK(r.surviving > 900);
  CHECK(r.v_hat_mean > 0.5);

  OPSurvival ne = op_survival(0.9, 300, OPLattice::NE3D, 300, 17074);
  CHECK(ne.survival.value > 0.9);
  CHECK(ne.v_hat_mean > 0.5);
}

TEST_CASE("a single seed wets a subset of what a full row wets") {
  for (uint64_t s = 0; s < 5; ++s) {
    OPRun one = op_run(0.8, 200, OPLattice::Diag1D, 17075 + s, 0, true);
    OPRun row = op_run(0.8, 200, OPLattice::Diag1D, 17075 + s, 200, true);
    REQUIRE(row.sets.size() >= one.sets.size());
    for (size_t j = 0; j < one.sets.size(); ++j) {
      CHECK(std::includes(row.sets[j].begin(), row.sets[j].end(), one.sets[j].begin(),
                          one.sets[j].end()));
      if (!one.sets[j].empty()) {
        // the recorded envelope is exactly the wet extremes, both wet
        CHECK(one.sets[j].front() == one.levels[j].l);
        CHECK(one.sets[j].back() == one.levels[j].r);
      }
    }
  }
}

TEST_CASE("wet recursion from an explicit grid follows the open blocks exactly") {
  BlockGrid all;
  all.n_levels = 4;
  all.open = {{1}, {1, 1}, {1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1, 1}};
  WetRun w = wet_from_grid(all);
  REQUIRE(w.survived);
  for (int64_t j = 0; j <= 4; ++j) {
    CHECK(w.l[(size_t)j] == -j);
    CHECK(w.r[(size_t)j] == j);
  }

  BlockGrid closed = all;
  closed.open[0][0] = 0; // no fiat: a closed origin kills the strict recursion
  WetRun dead = wet_from_grid(closed);
  CHECK_FALSE(dead.survived);
  CHECK(dead.extinct_level == 0);

  BlockGrid zig;
  zig.n_levels = 3;
  zig.open = {{1}, {1, 0}, {0, 1, 0}, {0, 1, 0, 0}};
  WetRun z = wet_from_grid(zig);
  REQUIRE(z.survived);
  REQUIRE(z.wet.size() == 4);
  CHECK(z.wet[0] == std::vector<int64_t>{0});
  CHECK(z.wet[1] == std::vector<int64_t>{-1});
  CHECK(z.wet[2] == std::vector<int64_t>{0});
  CHECK(z.wet[3] == std::vector<int64_t>{-1});

  BlockGrid bad;
  bad.n_levels = 2;
  bad.open = {{1}, {1, 1}}; // missing a level
  CHECK_THROWS_AS(wet_from_grid(bad), DomainError);
}

TEST_CASE("the dead zone between the walls stays empty") {
  long long viol = 0, ints = 0, zones = 0;
  for (uint64_t s = 0; s < 5; ++s) {
    DeadZoneResult r = dead_zone_audit(2, 1.0, 4.0, params1(0.0, 1.0, 0.5), 4, 17080 + s);
    viol += r.violations;
    ints += r.one_intervals;
    zones += r.zone_layers;
    CHECK(r.wet_survived); // birthless blocks are all good
  }
  CHECK(viol == 0);
  CHECK(ints > 0);
  CHECK(zones == 15); // full light cone: three nonempty zone layers per seed
}

TEST_CASE("the dead zone audit holds with births and sterile walls") {
  long long viol = 0, ints = 0;
  for (uint64_t s = 0; s < 5; ++s) {
    DeadZoneResult r = dead_zone_audit(3, 1.0, 4.0, params1(2.0, 1.0, 0.04), 4, 17090 + s);
    viol += r.violations;
    ints += r.one_intervals;
  }
  CHECK(viol == 0);
  CHECK(ints > 1000); // the audit really monitors many 1-intervals
  for (uint64_t s = 0; s < 3; ++s) {
    DeadZoneResult r = dead_zone_audit(4, 2.0, 2.0, params1(2.0, 1.0, 0.01), 4, 18300 + s);
    CHECK(r.violations == 0);
    CHECK(r.wet_survived);
  }
}

TEST_CASE("window events vanish without births and appear in the calibrated regime") {
  STCResult none = space_time_condition(2, 10, 5.0, params1(0.0, 1.0, 0.5), 200, 17100);
  CHECK(none.p1.value < 0.01);
  CHECK(none.p2.value == 0.0); // a window holding an initial -1 can never fill

  STCResult hot = space_time_condition(2, 12, 80.0, params1(4.0, 5.0, 0.01), 300, 18100);
  CHECK(hot.box_halfwidth == 16);
  CHECK(hot.p1.value > 0.5);
  CHECK(hot.p2.value > 0.2);

  STCResult flat = space_time_condition(1, 6, 6.0, params2(1.0, 1.0, 0.01), 100, 17103);
  CHECK(flat.p1.value >= 0.0);
  CHECK(flat.p1.value < 0.3);
  CHECK(flat.p2.value <= flat.p1.hi + 1.0); // smoke: both estimates defined
}

TEST_CASE("window events are monotone in the birth rate") {
  STCPairResult r =
      space_time_condition_pair(1, 8, 40.0, params1(4.0, 5.0, 0.01), 1.5, 4.0, 200, 18200);
  CHECK(r.order_violations == 0);
  CHECK(r.p2_violations == 0);
  CHECK(r.p1_hi.value > r.p1_lo.value);
}

TEST_CASE("replica parallelism never changes renormalization estimates") {
  ModelParams m = params1(2.0, 1.0, 0.1);
  BlockResult a = block_good_d1(3, 1.0, 4.0, 0.1, m, 60, 17200, 1);
  BlockResult b = block_good_d1(3, 1.0, 4.0, 0.1, m, 60, 17200, 4);
  CHECK(a.p_good.value == b.p_good.value);
  CHECK(a.p_good.lo == b.p_good.lo);
  CHECK(a.p_good.hi == b.p_good.hi);
  CHECK(a.early_extinct == b.early_extinct);

  STCResult s1 = space_time_condition(1, 8, 20.0, params1(3.0, 5.0, 0.01), 50, 17201, 1);
  STCResult s3 = space_time_condition(1, 8, 20.0, params1(3.0, 5.0, 0.01), 50, 17201, 3);
  CHECK(s1.p1.value == s3.p1.value);
  CHECK(s1.p2.value == s3.p2.value);

  OPSurvival o1 = op_survival(0.85, 200, OPLattice::Diag1D, 200, 17202, 1);
  OPSurvival o4 = op_survival(0.85, 200, OPLattice::Diag1D, 200, 17202, 4);
  CHECK(o1.survival.value == o4.survival.value);
  CHECK(o1.v_hat_mean == o4.v_hat_mean);
}

TEST_CASE("renormalization estimators reject bad arguments") {
  ModelParams m1 = params1(1.0, 1.0, 0.1);
  ModelParams m2 = params2(1.0, 1.0, 0.1);
  CHECK_THROWS_AS(block_good_d1(0, 1.0, 1.0, 0.1, m1, 10, 1), DomainError);
  CHECK_THROWS_AS(block_good_d1(2, 1.0, 1.0, 0.0, m1, 10, 1), DomainError);
  CHECK_THROWS_AS(block_good_d1(2, 0.0, 0.0, 0.1, m1, 10, 1), DomainError);
  CHECK_THROWS_AS(block_good_d1(2, 1.0, 1.0, 0.1, m2, 10, 1), DomainError);
  CHECK_THROWS_AS(block_good_d1(2, 1.0, 1.0, 0.1, m1, 0, 1), DomainError);
  CHECK_THROWS_AS(block_good_d2(2, 1.0, 0.01, m1, 10, 1), DomainError);
  CHECK_THROWS_AS(ne_site_open(21, 0.5, 0.05, m1, InitialSpec{}, 10, 1), DomainError);
  CHECK_THROWS_AS(ne_site_open(2, 0.5, 0.05, m2, InitialSpec{}, 10, 1), DomainError);
  CHECK_THROWS_AS(ne_site_open(21, 1.5, 0.05, m2, InitialSpec{}, 10, 1), DomainError);
  CHECK_THROWS_AS(op_run(1.5, 10, OPLattice::Diag1D, 1), DomainError);
  CHECK_THROWS_AS(op_run(0.5, 0, OPLattice::Diag1D, 1), DomainError);
  CHECK_THROWS_AS(space_time_condition(3, 3, 5.0, m1, 10, 1), DomainError);
  CHECK_THROWS_AS(space_time_condition(1, 8, 0.0, m1, 10, 1), DomainError);
  CHECK_THROWS_AS(dead_zone_audit(2, 1.0, 1.0, params1(1.0, 1.0, 0.0), 4, 1), DomainError);
}

TEST_CASE("the wet property counts ones inside the clamped window") {
  LatticeConfig c;
  c.box = make_box1(-5, 5);
  c.s.assign(11, 0);
  c.s[(size_t)c.box.index(Site{-4, 0})] = 1;
  c.s[(size_t)c.box.index(Site{0, 0})] = 1;
  c.s[(size_t)c.box.index(Site{3, 0})] = 1;
  CHECK(wet_property_h(c, 0, 3, 2));
  CHECK_FALSE(wet_property_h(c, 0, 3, 3));
  CHECK(wet_property_h(c, 4, 2, 1));
  CHECK(wet_property_h(c, -5, 1, 1)); // window clamps to the box edge
  CHECK_FALSE(wet_property_h(c, -5, 0, 1));
}

} // TEST_SUITE
