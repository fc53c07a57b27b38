#include "renorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "estimators.hpp"
#include "parallel.hpp"
#include "percolation.hpp"
#include "rng.hpp"

namespace sic {
namespace {

constexpr uint64_t kBlockStreamSalt = 0x626c6f636b5f7374ULL;
constexpr uint64_t kNeInitSalt = 0x6e655f696e697400ULL;
constexpr uint64_t kNeStreamSalt = 0x6e655f7374726d00ULL;
constexpr uint64_t kOpSiteSalt1d = 0x6f705f736974655fULL;
constexpr uint64_t kOpSiteSaltNe = 0x6f705f6e655f3364ULL;
constexpr uint64_t kDzStreamSalt = 0x647a5f7374726561ULL;
constexpr uint64_t kStcStreamSalt = 0x7374635f73747265ULL;

// reference crossing thresholds used only for the margin flag
double p_c_reference(Adjacency adj) {
  return adj == Adjacency::ZNearest ? 0.592746 : 0.407254;
}

enum class BlockOutcome { Bad, Good, GoodEarly };

// Replays `events` (time-sorted, all within [t0, t0+3T)) against an all-1
// start on `subbox` at time t0, applying only events whose sites (and arrow
// sources) lie inside subbox. Good means no 1's in `window` throughout
// [t0+T, t0+3T); checked before and after every event, so no misses.
BlockOutcome block_event_outcome(std::span<const Event> events, const Box& streambox,
                                 const Box& subbox, const Rect& window, double t0,
                                 double T) {
  LatticeConfig init;
  init.box = subbox;
  init.s.assign((size_t)subbox.n_sites(), 1);
  Simulator sim(Variant::Sterile, std::move(init));

  const int64_t n = subbox.n_sites();
  std::vector<uint8_t> in_window((size_t)n, 0);
  int64_t cnt = 0; // 1's inside the window
  for (int64_t i = 0; i < n; ++i) {
    if (window.contains(subbox.site((int32_t)i))) {
      in_window[(size_t)i] = 1;
      ++cnt;
    }
  }

  const double wlo = t0 + T;
  bool entered = false;
  for (const Event& e : events) {
    if (!entered && e.t >= wlo) {
      if (cnt > 0) return BlockOutcome::Bad;
      entered = true;
    }
    Site dst = streambox.site(e.site);
    if (!subbox.contains(dst)) continue;
    Event local = e;
    local.site = subbox.index(dst);
    if (e.type == EventType::Arrow) {
      Site from = streambox.site(e.src);
      if (!subbox.contains(from)) continue; // births are confined to the block
      local.src = subbox.index(from);
    } else {
      local.src = -1;
    }
    Change ch = sim.apply(local);
    if (ch.site >= 0 && in_window[(size_t)ch.site]) {
      if (ch.from == 1 && ch.to != 1) --cnt;
      if (ch.from != 1 && ch.to == 1) ++cnt;
    }
    if (entered && cnt > 0) return BlockOutcome::Bad;
    if (sim.count_plus() == 0) {
      return entered ? BlockOutcome::Good : BlockOutcome::GoodEarly;
    }
  }
  if (!entered) return cnt == 0 ? BlockOutcome::Good : BlockOutcome::Bad;
  return BlockOutcome::Good;
}

struct BlockGeom {
  Box subbox;
  Rect window;
};

BlockGeom block_geometry(int dim, int64_t K, int64_t center_x) {
  BlockGeom g;
  int32_t c = (int32_t)center_x;
  int32_t k = (int32_t)K;
  if (dim == 1) {
    g.subbox = make_box1(c - 2 * k, c + 2 * k);
    g.window = Rect{c - k, c + k, 0, 0};
  } else {
    g.subbox = make_box2(c - 2 * k, c + 2 * k, -2 * k, 2 * k);
    g.window = Rect{c - k, c + k, -k, k};
  }
  return g;
}

BlockResult block_good_mc(int dim, int64_t K, double T, const ModelParams& model,
                          int64_t reps, uint64_t seed, int jobs) {
  if (reps < 1) throw DomainError("block_good: reps must be >= 1");
  if (K < 1) throw DomainError("block_good: K must be >= 1");
  if (!(T > 0)) throw DomainError("block_good: time unit T must be positive");
  model.validate();
  BlockGeom g = block_geometry(dim, K, 0);

  std::vector<uint8_t> good((size_t)reps, 0), early((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    EventStream s = build_stream(model, g.subbox, 3 * T,
                                 derive_seed(seed ^ kBlockStreamSalt, (uint64_t)r));
    BlockOutcome out = block_event_outcome(s.events, g.subbox, g.subbox, g.window, 0, T);
    good[(size_t)r] = out != BlockOutcome::Bad;
    early[(size_t)r] = out == BlockOutcome::GoodEarly;
  });

  BlockResult res;
  res.T = T;
  res.K = K;
  long long ok = 0;
  for (int64_t r = 0; r < reps; ++r) {
    ok += good[(size_t)r];
    res.early_extinct += early[(size_t)r];
  }
  res.p_good = wilson_ci(ok, reps, seed);
  return res;
}

BlockPairResult block_good_pair_mc(int dim, int64_t K, double T, ModelParams model,
                                   double lambda_lo, double lambda_hi, int64_t reps,
                                   uint64_t seed, int jobs) {
  if (reps < 1) throw DomainError("block_good_pair: reps must be >= 1");
  if (K < 1) throw DomainError("block_good_pair: K must be >= 1");
  if (!(T > 0)) throw DomainError("block_good_pair: time unit T must be positive");
  if (!(lambda_hi > 0) || lambda_lo < 0 || lambda_lo > lambda_hi)
    throw DomainError("block_good_pair: need 0 <= lambda_lo <= lambda_hi, lambda_hi > 0");
  model.lambda = lambda_hi;
  model.validate();
  BlockGeom g = block_geometry(dim, K, 0);

  std::vector<uint8_t> glo((size_t)reps, 0), ghi((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    EventStream master = build_stream(model, g.subbox, 3 * T,
                                      derive_seed(seed ^ kBlockStreamSalt, (uint64_t)r));
    EventStream lo = thinned_arrows(master, lambda_lo / lambda_hi);
    ghi[(size_t)r] =
        block_event_outcome(master.events, g.subbox, g.subbox, g.window, 0, T) !=
        BlockOutcome::Bad;
    glo[(size_t)r] =
        block_event_outcome(lo.events, g.subbox, g.subbox, g.window, 0, T) !=
        BlockOutcome::Bad;
  });

  BlockPairResult res;
  long long nlo = 0, nhi = 0;
  for (int64_t r = 0; r < reps; ++r) {
    nlo += glo[(size_t)r];
    nhi += ghi[(size_t)r];
    if (ghi[(size_t)r] && !glo[(size_t)r]) ++res.order_violations;
  }
  res.lo = wilson_ci(nlo, reps, seed);
  res.hi = wilson_ci(nhi, reps, seed);
  return res;
}

void check_d2_aspect(double c_K, double lambda) {
  if (!(c_K > 0)) throw DomainError("block_good_d2: c_K must be positive");
  if (lambda > 0 && 2 * c_K > solve_c0() / lambda) {
    throw DomainError("block_good_d2: aspect ratio violates 2*c_K <= c0/lambda");
  }
}

} // namespace

BlockResult block_good_d1(int64_t K, double t0, double beta, double alpha_T,
                          const ModelParams& model, int64_t reps, uint64_t seed,
                          int jobs) {
  if (model.dim != 1) throw DomainError("block_good_d1: model.dim must be 1");
  if (!(alpha_T > 0)) throw DomainError("block_good_d1: alpha_T must be positive");
  if (t0 < 0 || beta < 0 || !(t0 + beta > 0))
    throw DomainError("block_good_d1: need t0, beta >= 0 with t0 + beta > 0");
  return block_good_mc(1, K, (t0 + beta) / alpha_T, model, reps, seed, jobs);
}

BlockResult block_good_d2(int64_t K, double c_T, double c_K, const ModelParams& model,
                          int64_t reps, uint64_t seed, int jobs) {
  if (model.dim != 2) throw DomainError("block_good_d2: model.dim must be 2");
  if (!(model.alpha > 0)) throw DomainError("block_good_d2: model.alpha must be positive");
  if (!(c_T > 0)) throw DomainError("block_good_d2: c_T must be positive");
  check_d2_aspect(c_K, model.lambda);
  double T = c_T / model.alpha;
  int64_t k = K > 0 ? K : (int64_t)std::llround(T / c_K);
  return block_good_mc(2, k, T, model, reps, seed, jobs);
}

BlockPairResult block_good_d1_pair(int64_t K, double t0, double beta, double alpha_T,
                                   ModelParams model, double lambda_lo, double lambda_hi,
                                   int64_t reps, uint64_t seed, int jobs) {
  if (model.dim != 1) throw DomainError("block_good_d1_pair: model.dim must be 1");
  if (!(alpha_T > 0)) throw DomainError("block_good_d1_pair: alpha_T must be positive");
  return block_good_pair_mc(1, K, (t0 + beta) / alpha_T, model, lambda_lo, lambda_hi,
                            reps, seed, jobs);
}

BlockPairResult block_good_d2_pair(int64_t K, double c_T, double c_K, ModelParams model,
                                   double lambda_lo, double lambda_hi, int64_t reps,
                                   uint64_t seed, int jobs) {
  if (model.dim != 2) throw DomainError("block_good_d2_pair: model.dim must be 2");
  if (!(model.alpha > 0))
    throw DomainError("block_good_d2_pair: model.alpha must be positive");
  if (!(c_T > 0)) throw DomainError("block_good_d2_pair: c_T must be positive");
  check_d2_aspect(c_K, lambda_hi);
  double T = c_T / model.alpha;
  int64_t k = K > 0 ? K : (int64_t)std::llround(T / c_K);
  return block_good_pair_mc(2, k, T, model, lambda_lo, lambda_hi, reps, seed, jobs);
}

NEOpenResult ne_site_open(int64_t N, double eta, double eps0, const ModelParams& model,
                          const InitialSpec& init, int64_t reps, uint64_t seed,
                          int jobs) {
  if (model.dim != 2) throw DomainError("ne_site_open: model.dim must be 2");
  if (N < 3) throw DomainError("ne_site_open: N must be >= 3");
  if (!(eta > 0) || eta >= 1) throw DomainError("ne_site_open: eta must be in (0,1)");
  if (model.alpha > 0 && !(eps0 > 0))
    throw DomainError("ne_site_open: eps0 must be positive when alpha > 0");
  if (reps < 1) throw DomainError("ne_site_open: reps must be >= 1");
  model.validate();

  const Box box = make_centered_box(2, (int32_t)N);
  const std::array<Rect, 4> rects = make_rectangles((int)N, eta);
  const Adjacency adj = Adjacency::LStar;
  const double T = model.alpha > 0 ? eps0 / model.alpha : 0.0;
  const int64_t n = box.n_sites();

  std::vector<uint8_t> all4((size_t)reps, 0);
  std::vector<double> open_frac((size_t)reps, 0), init_frac((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    LatticeConfig cfg =
        sample_initial(init, box, derive_seed(seed ^ kNeInitSalt, (uint64_t)r));
    std::vector<uint8_t> ever_minus((size_t)n, 0);
    int64_t minus0 = 0;
    for (int64_t i = 0; i < n; ++i) {
      if (cfg.s[(size_t)i] == -1) {
        ever_minus[(size_t)i] = 1;
        ++minus0;
      }
    }
    init_frac[(size_t)r] = 1.0 - (double)minus0 / (double)n;

    if (model.alpha > 0) {
      EventStream s = build_stream(model, box, 2 * T,
                                   derive_seed(seed ^ kNeStreamSalt, (uint64_t)r));
      Simulator sim(Variant::Sterile, std::move(cfg));
      for (const Event& e : s.events) {
        Change ch = sim.apply(e);
        if (ch.site >= 0 && ch.to == -1) ever_minus[(size_t)ch.site] = 1;
      }
    }

    PercGrid g;
    g.box = box;
    g.adj = adj;
    g.open.assign((size_t)n, 0);
    int64_t open_n = 0;
    for (int64_t i = 0; i < n; ++i) {
      g.open[(size_t)i] = !ever_minus[(size_t)i];
      open_n += g.open[(size_t)i];
    }
    open_frac[(size_t)r] = (double)open_n / (double)n;
    all4[(size_t)r] = has_crossing(g, rects[0], CrossDir::TopBottom) &&
                      has_crossing(g, rects[1], CrossDir::LeftRight) &&
                      has_crossing(g, rects[2], CrossDir::TopBottom) &&
                      has_crossing(g, rects[3], CrossDir::LeftRight);
  });

  NEOpenResult res;
  res.T = T;
  long long hits = 0;
  double p0_sum = 0;
  for (int64_t r = 0; r < reps; ++r) {
    hits += all4[(size_t)r];
    p0_sum += init_frac[(size_t)r];
  }
  res.p_open = wilson_ci(hits, reps, seed);
  res.open_site_frac = mean_ci(open_frac, seed);
  res.p0_hat = p0_sum / (double)reps;
  res.theta_frac = model.theta / (1.0 + model.theta);
  res.margin_rhs = model.alpha > 0 ? 1.0 - std::exp(-2.0 * eps0) : 0.0;
  res.p_c_ref = p_c_reference(adj);
  res.margin_ok =
      res.theta_frac > res.p_c_ref && res.p0_hat - res.p_c_ref > res.margin_rhs;
  return res;
}

namespace {

uint64_t op_site_sid(OPLattice lat, int64_t m, int64_t n) {
  uint64_t z = ((uint64_t)(uint32_t)(int32_t)m << 32) | (uint64_t)(uint32_t)(int32_t)n;
  uint64_t salt = lat == OPLattice::Diag1D ? kOpSiteSalt1d : kOpSiteSaltNe;
  return salt ^ rngdetail::mix64(z);
}

bool op_site_open(double p, uint64_t seed, OPLattice lat, int64_t m, int64_t n) {
  return CounterRng(seed, op_site_sid(lat, m, n)).next_u01() < p;
}

} // namespace

OPRun op_run(double p, int64_t n_levels, OPLattice lattice, uint64_t seed,
             int64_t init_halfwidth, bool keep_sets) {
  if (p < 0 || p > 1) throw DomainError("op_run: p must be in [0,1]");
  if (n_levels < 1) throw DomainError("op_run: n_levels must be >= 1");
  if (init_halfwidth < 0) throw DomainError("op_run: init_halfwidth must be >= 0");

  OPRun res;
  std::vector<int64_t> wet;
  if (lattice == OPLattice::Diag1D) {
    for (int64_t m = -(init_halfwidth - init_halfwidth % 2); m <= init_halfwidth; m += 2)
      wet.push_back(m);
    if (wet.empty()) wet.push_back(0);
  } else {
    wet.push_back(0); // NE lattice has the single level-0 site (0,0,0)
  }

  auto record = [&]() {
    OPLevel lv;
    lv.count = (int64_t)wet.size();
    if (!wet.empty()) {
      lv.l = wet.front();
      lv.r = wet.back();
    }
    res.levels.push_back(lv);
    if (keep_sets) res.sets.push_back(wet);
  };
  record();

  for (int64_t lev = 1; lev <= n_levels; ++lev) {
    std::vector<int64_t> next;
    next.reserve(wet.size() + 1);
    if (lattice == OPLattice::Diag1D) {
      int64_t prev = INT64_MIN;
      for (int64_t m : wet) {
        for (int64_t c : {m - 1, m + 1}) {
          if (c == prev) continue; // wet is ascending, so candidates arrive sorted
          if (c > prev) {
            if (op_site_open(p, seed, lattice, c, lev)) next.push_back(c);
            prev = c;
          }
        }
      }
    } else {
      int64_t prev = INT64_MIN;
      for (int64_t m : wet) {
        for (int64_t c : {m, m + 1}) {
          if (c <= prev || c > lev) continue;
          if (op_site_open(p, seed, lattice, c, lev - c)) next.push_back(c);
          prev = c;
        }
      }
    }
    wet = std::move(next);
    record();
    if (wet.empty()) {
      res.extinct_level = lev;
      res.survived = false;
      return res;
    }
  }
  res.survived = true;
  res.v_hat = (double)res.levels.back().r / (double)n_levels;
  return res;
}

OPSurvival op_survival(double p, int64_t n_levels, OPLattice lattice, int64_t reps,
                       uint64_t seed, int jobs) {
  if (reps < 1) throw DomainError("op_survival: reps must be >= 1");
  std::vector<uint8_t> ok((size_t)reps, 0);
  std::vector<double> vs((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    OPRun run = op_run(p, n_levels, lattice, derive_seed(seed, (uint64_t)r));
    ok[(size_t)r] = run.survived;
    vs[(size_t)r] = run.v_hat;
  });
  OPSurvival res;
  long long n_ok = 0;
  double v_sum = 0;
  for (int64_t r = 0; r < reps; ++r) {
    if (ok[(size_t)r]) {
      ++n_ok;
      v_sum += vs[(size_t)r];
    }
  }
  res.survival = wilson_ci(n_ok, reps, seed);
  res.surviving = n_ok;
  res.v_hat_mean = n_ok > 0 ? v_sum / (double)n_ok : 0.0;
  return res;
}

WetRun wet_from_grid(const BlockGrid& grid) {
  if (grid.n_levels + 1 != (int64_t)grid.open.size())
    throw DomainError("wet_from_grid: grid level count mismatch");
  for (int64_t j = 0; j <= grid.n_levels; ++j) {
    if ((int64_t)grid.open[(size_t)j].size() != j + 1)
      throw DomainError("wet_from_grid: level " + std::to_string(j) +
                        " must hold " + std::to_string(j + 1) + " offsets");
  }

  WetRun res;
  std::vector<int64_t> wet;
  if (grid.open[0][0]) wet.push_back(0);
  auto push_level = [&](int64_t lev) {
    res.wet.push_back(wet);
    res.l.push_back(wet.empty() ? 0 : wet.front());
    res.r.push_back(wet.empty() ? 0 : wet.back());
    if (wet.empty() && res.extinct_level < 0) res.extinct_level = lev;
  };
  push_level(0);
  for (int64_t lev = 1; lev <= grid.n_levels && !wet.empty(); ++lev) {
    std::vector<int64_t> next;
    int64_t prev = INT64_MIN;
    for (int64_t m : wet) {
      for (int64_t c : {m - 1, m + 1}) {
        if (c <= prev || c < -lev || c > lev) continue;
        if (grid.open[(size_t)lev][(size_t)((c + lev) / 2)]) next.push_back(c);
        prev = c;
      }
    }
    wet = std::move(next);
    push_level(lev);
  }
  res.survived = (int64_t)res.wet.size() == grid.n_levels + 1 && !res.wet.back().empty();
  return res;
}

DeadZoneResult dead_zone_audit(int64_t K, double t0, double beta,
                               const ModelParams& model, int64_t n_levels,
                               uint64_t seed) {
  if (model.dim != 1) throw DomainError("dead_zone_audit: model.dim must be 1");
  if (!(model.alpha > 0)) throw DomainError("dead_zone_audit: model.alpha must be positive");
  if (K < 1) throw DomainError("dead_zone_audit: K must be >= 1");
  if (n_levels < 1) throw DomainError("dead_zone_audit: n_levels must be >= 1");
  if (t0 < 0 || beta < 0 || !(t0 + beta > 0))
    throw DomainError("dead_zone_audit: need t0, beta >= 0 with t0 + beta > 0");
  model.validate();

  const double T = (t0 + beta) / model.alpha;
  const int32_t W = (int32_t)(K * (n_levels + 4));
  const Box box = make_box1(-W, W);
  const double horizon = (double)(n_levels + 3) * T;
  EventStream stream = build_stream(model, box, horizon, seed ^ kDzStreamSalt);

  DeadZoneResult res;
  res.grid.n_levels = n_levels;
  res.grid.open.resize((size_t)n_levels + 1);
  for (int64_t j = 0; j <= n_levels; ++j) {
    res.grid.open[(size_t)j].assign((size_t)j + 1, 0);
    auto span = events_in_window(stream, (double)j * T, (double)(j + 3) * T);
    for (int64_t m = -j; m <= j; m += 2) {
      BlockGeom g = block_geometry(1, K, m * K);
      BlockOutcome out =
          block_event_outcome(span, box, g.subbox, g.window, (double)j * T, T);
      res.grid.open[(size_t)j][(size_t)((m + j) / 2)] = out != BlockOutcome::Bad;
    }
  }

  res.wet = wet_from_grid(res.grid);
  res.wet_survived = res.wet.survived;
  const int64_t n_use =
      res.wet.survived ? n_levels : res.wet.extinct_level - 1;
  res.levels = n_use + 1;
  if (n_use < 0) return res; // the seed block failed; no walls to audit

  // wall paths: leftmost (rightmost) wet path ending at the wet extremes
  std::vector<int64_t> pL((size_t)n_use + 1), pR((size_t)n_use + 1);
  pL[(size_t)n_use] = res.wet.l[(size_t)n_use];
  pR[(size_t)n_use] = res.wet.r[(size_t)n_use];
  auto is_wet = [&](int64_t lev, int64_t m) {
    const auto& w = res.wet.wet[(size_t)lev];
    return std::binary_search(w.begin(), w.end(), m);
  };
  for (int64_t j = n_use - 1; j >= 0; --j) {
    pL[(size_t)j] = is_wet(j, pL[(size_t)j + 1] - 1) ? pL[(size_t)j + 1] - 1
                                                     : pL[(size_t)j + 1] + 1;
    pR[(size_t)j] = is_wet(j, pR[(size_t)j + 1] + 1) ? pR[(size_t)j + 1] + 1
                                                     : pR[(size_t)j + 1] - 1;
  }

  // zone interior per time layer [l*T, (l+1)*T): walls from the levels whose
  // vacant rectangles cover the layer
  const int64_t max_layer = n_use + 2;
  std::vector<int64_t> zoneL((size_t)max_layer + 1, 0), zoneR((size_t)max_layer + 1, 0);
  std::vector<uint8_t> zone_has((size_t)max_layer + 1, 0);
  for (int64_t l = 0; l <= max_layer; ++l) {
    int64_t jlo = std::max<int64_t>(0, l - 2);
    int64_t jhi = std::min<int64_t>(n_use, l - 1);
    if (jlo > jhi) continue;
    int64_t lb = INT64_MIN, rb = INT64_MAX;
    for (int64_t j = jlo; j <= jhi; ++j) {
      lb = std::max(lb, pL[(size_t)j] * K + K);
      rb = std::min(rb, pR[(size_t)j] * K - K);
    }
    if (rb - lb >= 2) {
      zone_has[(size_t)l] = 1;
      zoneL[(size_t)l] = lb;
      zoneR[(size_t)l] = rb;
      ++res.zone_layers;
    }
  }

  // replay the full trajectory and test every maximal 1-interval
  LatticeConfig init;
  init.box = box;
  init.s.assign((size_t)box.n_sites(), 0);
  for (int32_t x = (int32_t)(-2 * K); x <= (int32_t)(2 * K); ++x)
    init.s[(size_t)box.index(Site{x, 0})] = 1;
  const int64_t nsites = box.n_sites();
  std::vector<double> one_start((size_t)nsites, -1.0);
  for (int64_t i = 0; i < nsites; ++i)
    if (init.s[(size_t)i] == 1) one_start[(size_t)i] = 0.0;

  auto check_interval = [&](int32_t idx, double a, double b) {
    ++res.one_intervals;
    int64_t pos = box.site(idx).x;
    int64_t llo = std::max<int64_t>(0, (int64_t)std::floor(a / T));
    int64_t lhi = std::min(max_layer, (int64_t)std::floor(b / T));
    for (int64_t l = llo; l <= lhi; ++l) {
      if (!zone_has[(size_t)l]) continue;
      if (!(b > (double)l * T && a < (double)(l + 1) * T)) continue;
      if (pos > zoneL[(size_t)l] && pos < zoneR[(size_t)l]) {
        ++res.violations;
        return;
      }
    }
  };

  Simulator sim(Variant::Sterile, std::move(init));
  for (const Event& e : stream.events) {
    Change ch = sim.apply(e);
    if (ch.site < 0) continue;
    if (ch.from != 1 && ch.to == 1) {
      one_start[(size_t)ch.site] = e.t;
    } else if (ch.from == 1 && ch.to != 1) {
      check_interval(ch.site, one_start[(size_t)ch.site], e.t);
      one_start[(size_t)ch.site] = -1.0;
    }
  }
  for (int64_t i = 0; i < nsites; ++i) {
    if (one_start[(size_t)i] >= 0) check_interval((int32_t)i, one_start[(size_t)i], horizon);
  }
  return res;
}

bool wet_property_h(const LatticeConfig& c, int32_t center, int32_t L, int64_t threshold) {
  c.validate();
  if (c.box.dim != 1) throw DomainError("wet_property_h: box must be one-dimensional");
  if (L < 0) throw DomainError("wet_property_h: L must be >= 0");
  int32_t lo = std::max(c.box.lo[0], center - L);
  int32_t hi = std::min(c.box.hi[0], center + L);
  int64_t ones = 0;
  for (int32_t x = lo; x <= hi; ++x) ones += c.s[(size_t)c.box.index(Site{x, 0})] == 1;
  return ones >= threshold;
}

namespace {

struct STCGeom {
  Box box;
  int64_t n = 0, L = 0;
  int dim = 1;
  std::vector<std::vector<int32_t>> p2_windows; // site indices per face window
};

STCGeom stc_geometry(int64_t n, int64_t L, const ModelParams& model) {
  if (n < 0) throw DomainError("space_time_condition: n must be >= 0");
  if (L <= n) throw DomainError("space_time_condition: need L > n");
  STCGeom g;
  g.n = n;
  g.L = L;
  g.dim = model.dim;
  g.box = make_centered_box(model.dim, (int32_t)(L + 2 * n));
  if (model.dim == 1) {
    std::vector<int32_t> w;
    for (int64_t x = L; x <= L + 2 * n; ++x)
      w.push_back(g.box.index(Site{(int32_t)x, 0}));
    g.p2_windows.push_back(std::move(w));
  } else {
    for (int64_t y = 0; y < L; ++y) {
      std::vector<int32_t> w;
      for (int64_t x = L; x <= L + 2 * n; ++x)
        for (int64_t yy = y - n; yy <= y + n; ++yy)
          w.push_back(g.box.index(Site{(int32_t)x, (int32_t)yy}));
      g.p2_windows.push_back(std::move(w));
    }
  }
  return g;
}

LatticeConfig stc_initial(const STCGeom& g) {
  LatticeConfig init;
  init.box = g.box;
  init.s.assign((size_t)g.box.n_sites(), -1);
  for (int64_t i = 0; i < g.box.n_sites(); ++i) {
    Site s = g.box.site((int32_t)i);
    if (std::abs(s.x) <= g.n && (g.dim == 1 || std::abs(s.y) <= g.n))
      init.s[(size_t)i] = 1;
  }
  return init;
}

struct STCOutcome {
  bool p1 = false, p2 = false;
};

STCOutcome stc_replay(const STCGeom& g, const EventStream& stream, double T) {
  const int64_t nsites = g.box.n_sites();
  // window membership for the monitored face windows
  std::vector<std::vector<int32_t>> windows_of((size_t)nsites);
  std::vector<int64_t> deficit(g.p2_windows.size(), 0);
  for (size_t w = 0; w < g.p2_windows.size(); ++w) {
    deficit[w] = (int64_t)g.p2_windows[w].size();
    for (int32_t idx : g.p2_windows[w]) windows_of[(size_t)idx].push_back((int32_t)w);
  }
  int64_t full_windows = 0;

  Simulator sim(Variant::Sterile, stc_initial(g));
  STCOutcome out;
  bool entered = false;
  const double monitor_from = 1.0;
  for (const Event& e : stream.events) {
    if (!entered && e.t >= monitor_from) {
      if (full_windows > 0) out.p2 = true;
      entered = true;
    }
    Change ch = sim.apply(e);
    if (ch.site >= 0) {
      int delta = 0;
      if (ch.from == 1 && ch.to != 1) delta = +1;
      if (ch.from != 1 && ch.to == 1) delta = -1;
      if (delta != 0) {
        for (int32_t w : windows_of[(size_t)ch.site]) {
          deficit[(size_t)w] += delta;
          if (delta < 0 && deficit[(size_t)w] == 0) ++full_windows;
          if (delta > 0 && deficit[(size_t)w] == 1) --full_windows;
        }
      }
    }
    if (entered && !out.p2 && full_windows > 0) out.p2 = true;
    if (sim.count_plus() == 0 && !(full_windows > 0)) {
      // no 1's left anywhere: neither event can occur later
      if (!entered && full_windows > 0) out.p2 = true;
      return out;
    }
  }
  if (!entered && full_windows > 0) out.p2 = true;

  // final state is the configuration at time T+1
  const auto& s = sim.state();
  (void)T;
  if (g.dim == 1) {
    int64_t run = 0;
    for (int64_t x = -g.n; x < g.L + g.n; ++x) {
      run = s[(size_t)g.box.index(Site{(int32_t)x, 0})] == 1 ? run + 1 : 0;
      int64_t xc = x - g.n; // window [xc-n, xc+n] just completed
      if (run >= 2 * g.n + 1 && xc >= 0 && xc < g.L) {
        out.p1 = true;
        break;
      }
    }
  } else {
    const int64_t side = g.box.len(0);
    std::vector<int64_t> pre((size_t)((side + 1) * (side + 1)), 0);
    auto at = [&](int64_t i, int64_t j) -> int64_t& {
      return pre[(size_t)(i * (side + 1) + j)];
    };
    for (int64_t i = 0; i < side; ++i) {
      for (int64_t j = 0; j < side; ++j) {
        Site site{(int32_t)(g.box.lo[0] + i), (int32_t)(g.box.lo[1] + j)};
        at(i + 1, j + 1) = (s[(size_t)g.box.index(site)] == 1) + at(i, j + 1) +
                           at(i + 1, j) - at(i, j);
      }
    }
    const int64_t wlen = 2 * g.n + 1, want = wlen * wlen;
    for (int64_t x = 0; x < g.L && !out.p1; ++x) {
      for (int64_t y = 0; y < g.L; ++y) {
        int64_t i0 = (x - g.n) - g.box.lo[0], j0 = (y - g.n) - g.box.lo[1];
        int64_t sum = at(i0 + wlen, j0 + wlen) - at(i0, j0 + wlen) -
                      at(i0 + wlen, j0) + at(i0, j0);
        if (sum == want) {
          out.p1 = true;
          break;
        }
      }
    }
  }
  return out;
}

} // namespace

STCResult space_time_condition(int64_t n, int64_t L, double T, const ModelParams& model,
                               int64_t reps, uint64_t seed, int jobs) {
  if (!(T > 0)) throw DomainError("space_time_condition: T must be positive");
  if (reps < 1) throw DomainError("space_time_condition: reps must be >= 1");
  model.validate();
  STCGeom g = stc_geometry(n, L, model);

  std::vector<uint8_t> h1((size_t)reps, 0), h2((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    EventStream s = build_stream(model, g.box, T + 1.0,
                                 derive_seed(seed ^ kStcStreamSalt, (uint64_t)r));
    STCOutcome out = stc_replay(g, s, T);
    h1[(size_t)r] = out.p1;
    h2[(size_t)r] = out.p2;
  });

  STCResult res;
  res.T = T;
  res.box_halfwidth = L + 2 * n;
  long long n1 = 0, n2 = 0;
  for (int64_t r = 0; r < reps; ++r) {
    n1 += h1[(size_t)r];
    n2 += h2[(size_t)r];
  }
  res.p1 = wilson_ci(n1, reps, seed);
  res.p2 = wilson_ci(n2, reps, seed);
  return res;
}

STCPairResult space_time_condition_pair(int64_t n, int64_t L, double T, ModelParams model,
                                        double lambda_lo, double lambda_hi, int64_t reps,
                                        uint64_t seed, int jobs) {
  if (!(T > 0)) throw DomainError("space_time_condition_pair: T must be positive");
  if (reps < 1) throw DomainError("space_time_condition_pair: reps must be >= 1");
  if (!(lambda_hi > 0) || lambda_lo < 0 || lambda_lo > lambda_hi)
    throw DomainError(
        "space_time_condition_pair: need 0 <= lambda_lo <= lambda_hi, lambda_hi > 0");
  model.lambda = lambda_hi;
  model.validate();
  STCGeom g = stc_geometry(n, L, model);

  std::vector<uint8_t> lo1((size_t)reps, 0), hi1((size_t)reps, 0), lo2((size_t)reps, 0),
      hi2((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    EventStream master = build_stream(model, g.box, T + 1.0,
                                      derive_seed(seed ^ kStcStreamSalt, (uint64_t)r));
    EventStream thin = thinned_arrows(master, lambda_lo / lambda_hi);
    STCOutcome oh = stc_replay(g, master, T);
    STCOutcome ol = stc_replay(g, thin, T);
    lo1[(size_t)r] = ol.p1;
    hi1[(size_t)r] = oh.p1;
    lo2[(size_t)r] = ol.p2;
    hi2[(size_t)r] = oh.p2;
  });

  STCPairResult res;
  long long nlo = 0, nhi = 0;
  for (int64_t r = 0; r < reps; ++r) {
    nlo += lo1[(size_t)r];
    nhi += hi1[(size_t)r];
    if (lo1[(size_t)r] && !hi1[(size_t)r]) ++res.order_violations;
    if (lo2[(size_t)r] && !hi2[(size_t)r]) ++res.p2_violations;
  }
  res.p1_lo = wilson_ci(nlo, reps, seed);
  res.p1_hi = wilson_ci(nhi, reps, seed);
  return res;
}

} // namespace sic
