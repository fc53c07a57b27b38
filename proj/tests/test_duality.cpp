#include <doctest.h>

#include <algorithm>
#include <vector>

#include "duality.hpp"
#include "errors.hpp"
#include "events.hpp"
#include "process.hpp"
#include "rng.hpp"

using namespace sic;

TEST_SUITE_BEGIN("duality");

namespace {

LatticeConfig env_from_murho(const Box& box, double theta, uint64_t seed) {
  InitialSpec spec;
  spec.kind = InitialSpec::Kind::MuRho;
  spec.theta = theta;
  return sample_initial(spec, box, seed);
}

} // namespace

TEST_CASE("empty target set gives an empty dual") {
  Box box = make_centered_box(2, 3);
  ModelParams p{1.0, 1.0, 1.0, 2};
  for (uint64_t r = 0; r < 10; ++r) {
    uint64_t s = derive_seed(9100, r);
    EventStream stream = build_stream(p, box, 2.0, s);
    LatticeConfig env = env_from_murho(box, p.theta, derive_seed(s, 1));
    DualResult d = dual_evolve(stream, env, {}, 1.5);
    CHECK(d.a_hat.empty());
  }
}

TEST_CASE("at time zero the dual is the target minus the environment") {
  Box box = make_centered_box(2, 3);
  ModelParams p{1.0, 2.0, 0.7, 2};
  std::vector<Site> C = {{0, 0}, {1, 0}, {-2, 3}, {3, -3}};
  for (uint64_t r = 0; r < 20; ++r) {
    uint64_t s = derive_seed(9200, r);
    EventStream stream = build_stream(p, box, 1.0, s);
    LatticeConfig env = env_from_murho(box, p.theta, derive_seed(s, 1));
    DualResult d = dual_evolve(stream, env, C, 0.0);
    std::vector<int32_t> want;
    for (const Site& c : C) {
      int32_t idx = box.index(c);
      if (env.s[(size_t)idx] != -1) want.push_back(idx);
    }
    std::sort(want.begin(), want.end());
    CHECK(d.a_hat == want);
    // and the time-0 environment is env itself
    std::vector<int32_t> minus;
    for (int32_t i = 0; i < (int32_t)env.s.size(); ++i) {
      if (env.s[(size_t)i] == -1) minus.push_back(i);
    }
    CHECK(d.b_hat0 == minus);
  }
}

TEST_CASE("without arrows the dual never leaves the target set") {
  Box box = make_centered_box(2, 4);
  ModelParams p{0.0, 1.0, 0.8, 2};
  std::vector<Site> C = {{0, 0}, {2, -1}, {-3, 3}};
  std::vector<int32_t> cidx;
  for (const Site& c : C) cidx.push_back(box.index(c));
  std::sort(cidx.begin(), cidx.end());
  for (uint64_t r = 0; r < 50; ++r) {
    uint64_t s = derive_seed(9300, r);
    EventStream stream = build_stream(p, box, 3.0, s);
    LatticeConfig env = env_from_murho(box, p.theta, derive_seed(s, 1));
    DualResult d = dual_evolve(stream, env, C, 2.5);
    CHECK(std::includes(cidx.begin(), cidx.end(), d.a_hat.begin(), d.a_hat.end()));
  }
}

TEST_CASE("the reconstructed environment matches a forward run site for site") {
  Box box = make_centered_box(2, 5);
  ModelParams p{1.5, 2.0, 0.9, 2};
  const double t = 4.0;
  std::vector<double> grid;
  for (int k = 0; k <= 16; ++k) grid.push_back(t * k / 16.0);
  for (uint64_t r = 0; r < 25; ++r) {
    uint64_t s = derive_seed(9400, r);
    EventStream stream = build_stream(p, box, t + 0.5, s);
    LatticeConfig env = env_from_murho(box, p.theta, derive_seed(s, 1));
    EnvTimeline tl = build_env_timeline(stream, env, t);
    Trajectory traj = evolve(Variant::TwoStateEnv, env, stream, grid, true);
    for (size_t k = 0; k < grid.size(); ++k) {
      for (int32_t i = 0; i < (int32_t)env.s.size(); ++i) {
        bool fwd = traj.configs[k][(size_t)i] == -1;
        bool rec = tl.minus1_at(i, grid[k]);
        REQUIRE(fwd == rec);
      }
    }
  }
}

TEST_CASE("forward and backward hitting events agree on every stream") {
  Box box = make_centered_box(2, 3);
  std::vector<Site> A = {{0, 0}, {1, 1}};
  std::vector<Site> C = {{-1, 0}, {2, -2}};
  std::vector<Site> D = {{0, 1}, {-3, -3}};
  struct Triple {
    double lambda, theta, alpha, t;
  };
  std::vector<Triple> triples = {{1.0, 1.0, 1.0, 1.0},
                                 {2.0, 0.5, 0.4, 1.5},
                                 {0.7, 3.0, 1.6, 0.8}};
  for (size_t k = 0; k < triples.size(); ++k) {
    ModelParams p{triples[k].lambda, triples[k].theta, triples[k].alpha, 2};
    PathwiseCheck pc =
        pathwise_duality_check(A, C, D, triples[k].t, p, box, 200, 9500 + k);
    CHECK(pc.failures == 0);
    CHECK(pc.env_mismatches == 0);
    CHECK(pc.hits > 0); // the identity is not vacuous at these parameters
  }
}

TEST_CASE("forward and backward hitting probabilities agree in distribution") {
  Box box = make_centered_box(2, 3); // 7x7
  ModelParams p{1.0, 1.0, 1.0, 2};
  std::vector<Site> A = {{0, 0}};
  std::vector<Site> C = {{0, 0}};
  std::vector<Site> D = {{1, 0}};
  DualityCheck dc = duality_check(A, C, D, 1.0, p, box, 20000, 9600);
  CHECK(dc.lhs.value > 0.0);
  CHECK(dc.rhs.value > 0.0);
  CHECK(std::abs(dc.z) < 4.0);
}

TEST_CASE("empty D gives exact zeros on both sides") {
  Box box = make_centered_box(2, 2);
  ModelParams p{1.0, 1.0, 1.0, 2};
  DualityCheck dc = duality_check({{0, 0}}, {{0, 0}}, {}, 1.0, p, box, 200, 9700);
  CHECK(dc.lhs.value == 0.0);
  CHECK(dc.rhs.value == 0.0);
  CHECK(dc.z == 0.0);
}

TEST_CASE("dual inputs are validated") {
  Box box = make_centered_box(2, 2);
  ModelParams p{1.0, 1.0, 1.0, 2};
  EventStream stream = build_stream(p, box, 1.0, 9800);
  LatticeConfig env = env_from_murho(box, 1.0, 9801);

  CHECK_THROWS_AS(dual_evolve(stream, env, {{0, 0}}, 2.0), DomainError); // past horizon
  CHECK_THROWS_AS(dual_evolve(stream, env, {{7, 0}}, 0.5), DomainError); // outside box

  LatticeConfig bad = env;
  bad.s[0] = 1;
  CHECK_THROWS_AS(dual_evolve(stream, bad, {{0, 0}}, 0.5), DomainError); // +1 in env

  LatticeConfig other = env_from_murho(make_centered_box(2, 3), 1.0, 9802);
  CHECK_THROWS_AS(dual_evolve(stream, other, {{0, 0}}, 0.5), DomainError); // box mismatch

  CHECK_THROWS_AS(duality_check({{0, 0}}, {{0, 0}}, {}, -1.0, p, box, 10, 1), DomainError);
  CHECK_THROWS_AS(duality_check({{0, 0}}, {{0, 0}}, {}, 1.0, p, box, 0, 1), DomainError);
}

TEST_SUITE_END();
