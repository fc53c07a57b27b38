#include "cptoolkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "errors.hpp"
#include "events.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace sic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelParams cp_params(double lambda) {
  ModelParams p;
  p.lambda = lambda;
  p.theta = 1.0;
  p.alpha = 0.0; // contact process: no sterile marks at all
  p.dim = 1;
  return p;
}

} // namespace

std::vector<double> edge_trace(double lambda, const std::vector<int32_t>& initial_ones,
                               const Box& box, const std::vector<double>& sample_times,
                               uint64_t seed, bool* wall_hit) {
  if (lambda < 0.0) throw DomainError("edge_trace: lambda must be nonnegative");
  box.validate();
  if (box.dim != 1) throw DomainError("edge_trace: box must be one-dimensional");
  if (sample_times.empty()) throw DomainError("edge_trace: no sample times");
  for (size_t k = 1; k < sample_times.size(); ++k) {
    if (sample_times[k] < sample_times[k - 1]) {
      throw DomainError("edge_trace: sample times must be nondecreasing");
    }
  }

  const int32_t n = (int32_t)box.n_sites();
  std::vector<uint8_t> s((size_t)n, 0);
  int64_t n1 = 0;
  int32_t r = -1;
  for (int32_t x : initial_ones) {
    Site site{x, 0};
    if (!box.contains(site)) throw DomainError("edge_trace: initial 1 outside the box");
    int32_t idx = box.index(site);
    if (!s[(size_t)idx]) {
      s[(size_t)idx] = 1;
      ++n1;
      r = std::max(r, idx);
    }
  }

  bool wall = (r == n - 1);
  EventStream stream =
      build_stream(cp_params(lambda), box, sample_times.back() + 1e-9, seed);
  std::vector<double> out;
  out.reserve(sample_times.size());
  size_t k = 0;
  auto flush = [&](double upto) {
    while (k < sample_times.size() && sample_times[k] < upto) {
      out.push_back(n1 > 0 ? (double)(box.lo[0] + r) : -kInf);
      ++k;
    }
  };
  for (const Event& e : stream.events) {
    flush(e.t); // state is right-continuous: sample times strictly before e.t
    if (k >= sample_times.size()) break;
    if (e.type == EventType::Death) {
      if (s[(size_t)e.site]) {
        s[(size_t)e.site] = 0;
        --n1;
        if (e.site == r) {
          while (r >= 0 && !s[(size_t)r]) --r;
        }
      }
    } else if (e.type == EventType::Arrow) {
      if (s[(size_t)e.src] && !s[(size_t)e.site]) {
        s[(size_t)e.site] = 1;
        ++n1;
        if (e.site > r) r = e.site;
        if (e.site == n - 1) wall = true;
      }
    }
  }
  flush(kInf);
  if (wall_hit) *wall_hit = wall;
  return out;
}

EdgeSpeedResult edge_speed(double lambda, double t_max, int32_t box_halfwidth,
                           int64_t reps, uint64_t seed, int jobs) {
  if (t_max <= 0.0) throw DomainError("edge_speed: t_max must be positive");
  if (box_halfwidth < 1) throw DomainError("edge_speed: box halfwidth must be positive");
  if (reps <= 0) throw DomainError("edge_speed: reps must be positive");

  Box box = make_box1(-box_halfwidth, box_halfwidth);
  std::vector<int32_t> init;
  for (int32_t x = -box_halfwidth; x <= 0; ++x) init.push_back(x);

  std::vector<double> r_end((size_t)reps, 0.0);
  std::vector<uint8_t> walls((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long rep) {
    bool wall = false;
    auto tr = edge_trace(lambda, init, box, {t_max}, derive_seed(seed, (uint64_t)rep), &wall);
    r_end[(size_t)rep] = tr[0];
    walls[(size_t)rep] = wall;
  });

  EdgeSpeedResult out;
  std::vector<double> vs;
  for (int64_t rep = 0; rep < reps; ++rep) {
    out.wall_hits += walls[(size_t)rep];
    if (std::isfinite(r_end[(size_t)rep])) {
      vs.push_back(r_end[(size_t)rep] / t_max);
    } else {
      ++out.extinct;
    }
  }
  out.surviving = (int64_t)vs.size();
  out.wall_frac = (double)out.wall_hits / (double)reps;
  if (out.wall_frac > 0.01) {
    throw DomainError("edge_speed: front reached the box wall in more than 1% of runs; "
                      "increase the box halfwidth");
  }
  if (vs.empty()) throw DomainError("edge_speed: every run went extinct before t_max");
  out.v_hat = mean_ci(vs, seed);
  return out;
}

EdgeTailResult edge_tail(double lambda, double a, double b, std::vector<double> ts,
                         int32_t box_halfwidth, int64_t reps, uint64_t seed, int jobs) {
  if (a >= b) throw DomainError("edge_tail: need a < b");
  if (ts.empty()) throw DomainError("edge_tail: the time ladder is empty");
  if (reps <= 0) throw DomainError("edge_tail: reps must be positive");
  std::sort(ts.begin(), ts.end());
  if (ts.front() <= 0.0) throw DomainError("edge_tail: ladder times must be positive");

  Box box = make_box1(-box_halfwidth, box_halfwidth);
  std::vector<int32_t> init;
  for (int32_t x = -box_halfwidth; x <= 0; ++x) init.push_back(x);

  const size_t m = ts.size();
  std::vector<double> traces((size_t)reps * m);
  std::vector<uint8_t> walls((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long rep) {
    bool wall = false;
    auto tr = edge_trace(lambda, init, box, ts, derive_seed(seed, (uint64_t)rep), &wall);
    std::copy(tr.begin(), tr.end(), traces.begin() + (size_t)rep * m);
    walls[(size_t)rep] = wall;
  });

  EdgeTailResult out;
  out.ts = ts;
  out.wall_hits = std::accumulate(walls.begin(), walls.end(), 0LL);
  std::vector<double> fit_t_low, fit_p_low, fit_t_high, fit_p_high;
  for (size_t k = 0; k < m; ++k) {
    long long nl = 0, nh = 0;
    for (int64_t rep = 0; rep < reps; ++rep) {
      double r = traces[(size_t)rep * m + k];
      if (r <= a * ts[k]) ++nl; // extinct runs (r = -inf) land here
      if (r >= b * ts[k]) ++nh;
    }
    out.p_low.push_back(wilson_ci(nl, reps, seed));
    out.p_high.push_back(wilson_ci(nh, reps, seed));
    if (nl >= 3) {
      fit_t_low.push_back(ts[k]);
      fit_p_low.push_back(std::log((double)nl / (double)reps));
    }
    if (nh >= 3) {
      fit_t_high.push_back(ts[k]);
      fit_p_high.push_back(std::log((double)nh / (double)reps));
    }
  }
  if (fit_t_low.size() >= 2) {
    LinFit f = linear_fit(fit_t_low, fit_p_low);
    out.gamma0_hat = -f.slope;
    out.r2_low = f.r2;
  }
  if (fit_t_high.size() >= 2) {
    LinFit f = linear_fit(fit_t_high, fit_p_high);
    out.gamma1_hat = -f.slope;
    out.r2_high = f.r2;
  }
  return out;
}

EstimateCI finite_set_survival(double lambda, const std::vector<int32_t>& A,
                               double t_max, int64_t reps, uint64_t seed, int jobs) {
  if (lambda < 0.0) throw DomainError("finite_set_survival: lambda must be nonnegative");
  if (t_max <= 0.0) throw DomainError("finite_set_survival: t_max must be positive");
  if (reps <= 0) throw DomainError("finite_set_survival: reps must be positive");
  if (A.empty()) return exact_value(0.0);

  auto [mn, mx] = std::minmax_element(A.begin(), A.end());
  int32_t pad = (int32_t)std::ceil(2.0 * lambda * t_max) + 10;
  Box box = make_box1(*mn - pad, *mx + pad);

  std::vector<uint8_t> alive((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long rep) {
    auto tr = edge_trace(lambda, A, box, {t_max}, derive_seed(seed, (uint64_t)rep));
    alive[(size_t)rep] = std::isfinite(tr[0]);
  });
  long long hits = std::accumulate(alive.begin(), alive.end(), 0LL);
  return wilson_ci(hits, reps, seed);
}

EpsGoodResult epsilon_good(const std::vector<int8_t>& config, double epsilon,
                           int32_t N, double lambda, double t_max, int64_t reps,
                           uint64_t seed, int jobs) {
  if (config.size() < 2) throw DomainError("epsilon_good: configuration too short");
  const int32_t l = (int32_t)config.size() - 1;
  if (N < 1) throw DomainError("epsilon_good: N must be positive");
  if (l < 2 * N) throw DomainError("epsilon_good: need l >= 2N");
  if (epsilon < 0.0 || epsilon >= 1.0) throw DomainError("epsilon_good: epsilon must lie in [0,1)");
  if (reps <= 0) throw DomainError("epsilon_good: reps must be positive");
  for (int8_t v : config) {
    if (v != 0 && v != 1) throw DomainError("epsilon_good: configuration must be over {0,1}");
  }

  EpsGoodResult out;
  out.t_max_used = t_max > 0.0 ? t_max : 2.0 * (double)l;
  const int32_t cut = (int32_t)std::ceil(epsilon * (double)N - 1e-9);
  std::vector<int32_t> ones;
  for (int32_t x = cut; x <= l - cut; ++x) {
    if (config[(size_t)x] == 1) ones.push_back(x);
  }
  out.kept_ones = (int64_t)ones.size();
  if (ones.empty()) {
    out.survival = exact_value(0.0);
    return out;
  }

  Box box = make_box1(0, l);
  std::vector<uint8_t> alive((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long rep) {
    auto tr = edge_trace(lambda, ones, box, {out.t_max_used},
                         derive_seed(seed, (uint64_t)rep));
    alive[(size_t)rep] = std::isfinite(tr[0]);
  });
  long long hits = std::accumulate(alive.begin(), alive.end(), 0LL);
  out.survival = wilson_ci(hits, reps, seed);
  return out;
}

namespace {

// occupation interval of one site, with its birth provenance
struct Occ {
  double t0 = 0, t1 = kInf;
  int32_t parent = -1;   // site index; -1 for initial occupation
  int32_t parent_occ = -1;
};

struct WindowRun {
  bool success = false;
  std::vector<std::vector<Occ>> hist; // per site
  std::vector<int32_t> final_occ;     // open occupation per end site, -1 if empty
};

struct WindowGeom {
  double dL = 0, v = 0, t_L = 0;
  double left_at(double u) const { return -1.5 * dL + v * u; }
  double right_at(double u) const { return -0.5 * dL + v * u; }
  bool in_band(double x, double u) const {
    return x >= left_at(u) && x <= right_at(u);
  }
  double t_exit(double x) const { return (x + 1.5 * dL) / v; }
};

WindowRun run_window(const EventStream& stream, const Box& box, const WindowGeom& g,
                     const std::vector<int32_t>& seed_sites, int32_t end_lo,
                     int32_t end_hi, bool keep_history) {
  const int32_t n = (int32_t)box.n_sites();
  std::vector<uint8_t> s((size_t)n, 0);
  std::vector<int32_t> cur((size_t)n, -1);
  WindowRun run;
  run.hist.resize((size_t)n);
  int64_t n1 = 0;
  for (int32_t x : seed_sites) {
    int32_t idx = box.index({x, 0});
    s[(size_t)idx] = 1;
    ++n1;
    run.hist[(size_t)idx].push_back({0.0, kInf, -1, -1});
    cur[(size_t)idx] = 0;
  }

  auto close_occ = [&](int32_t idx, double t) {
    s[(size_t)idx] = 0;
    --n1;
    run.hist[(size_t)idx][(size_t)cur[(size_t)idx]].t1 = t;
    cur[(size_t)idx] = -1;
  };

  // trailing-edge exit times are increasing in x, so a single cursor suffices
  int32_t exit_cursor = 0; // next box index whose exit has not happened yet
  while (exit_cursor < n && g.t_exit((double)(box.lo[0] + exit_cursor)) <= 0.0) {
    ++exit_cursor;
  }
  auto flush_exits = [&](double upto) {
    while (exit_cursor < n) {
      double te = g.t_exit((double)(box.lo[0] + exit_cursor));
      if (te > upto || te > g.t_L) break;
      if (s[(size_t)exit_cursor]) close_occ(exit_cursor, te);
      ++exit_cursor;
    }
  };

  for (const Event& e : stream.events) {
    if (e.t > g.t_L) break;
    flush_exits(e.t);
    if (n1 == 0) break;
    if (e.type == EventType::Death) {
      if (s[(size_t)e.site]) close_occ(e.site, e.t);
    } else if (e.type == EventType::Arrow) {
      if (s[(size_t)e.src] && !s[(size_t)e.site]) {
        double x = (double)box.site(e.site).x;
        if (g.in_band(x, e.t)) {
          s[(size_t)e.site] = 1;
          ++n1;
          run.hist[(size_t)e.site].push_back({e.t, kInf, e.src, cur[(size_t)e.src]});
          cur[(size_t)e.site] = (int32_t)run.hist[(size_t)e.site].size() - 1;
        }
      }
    }
  }
  flush_exits(g.t_L);

  run.final_occ.assign((size_t)(end_hi - end_lo + 1), -1);
  for (int32_t x = end_lo; x <= end_hi; ++x) {
    int32_t idx = box.index({x, 0});
    if (s[(size_t)idx]) {
      run.success = true;
      run.final_occ[(size_t)(x - end_lo)] = cur[(size_t)idx];
    }
  }
  if (!keep_history) run.hist.clear();
  return run;
}

// Independent re-check of one successful replica: walk the recorded birth
// chain from an occupied end site back to time 0 and verify every link
// against the raw stream (arrow present, no death inside the occupation,
// site inside the moving window for the whole stretch it is relied upon).
bool audit_window_path(const EventStream& stream, const Box& box, const WindowGeom& g,
                       const WindowRun& run, int32_t end_lo,
                       const std::vector<uint8_t>& seeded) {
  const int32_t n = (int32_t)box.n_sites();
  std::vector<std::vector<double>> deaths((size_t)n);
  std::unordered_map<int64_t, std::vector<double>> arrows;
  for (const Event& e : stream.events) {
    if (e.t > g.t_L) break;
    if (e.type == EventType::Death) {
      deaths[(size_t)e.site].push_back(e.t);
    } else if (e.type == EventType::Arrow) {
      arrows[(int64_t)e.src * n + e.site].push_back(e.t);
    }
  }
  auto death_free = [&](int32_t idx, double t0, double t1) {
    const auto& d = deaths[(size_t)idx];
    auto it = std::upper_bound(d.begin(), d.end(), t0);
    return it == d.end() || *it > t1;
  };

  int32_t idx = -1, occ = -1;
  for (size_t k = 0; k < run.final_occ.size(); ++k) {
    if (run.final_occ[k] >= 0) {
      idx = box.index({end_lo + (int32_t)k, 0});
      occ = run.final_occ[k];
      break;
    }
  }
  if (idx < 0) return false;

  double needed_until = g.t_L;
  for (int guard = 0; guard < 1 << 20; ++guard) {
    const Occ& o = run.hist[(size_t)idx][(size_t)occ];
    double x = (double)box.site(idx).x;
    // the site must be alive and inside the window from its birth to the
    // moment the chain relies on it
    if (!death_free(idx, o.t0, needed_until)) return false;
    if (!g.in_band(x, o.t0) || !g.in_band(x, needed_until)) return false;
    if (o.parent < 0) {
      return o.t0 == 0.0 && seeded[(size_t)idx];
    }
    auto it = arrows.find((int64_t)o.parent * n + idx);
    if (it == arrows.end() ||
        !std::binary_search(it->second.begin(), it->second.end(), o.t0)) {
      return false;
    }
    needed_until = o.t0;
    occ = o.parent_occ;
    idx = o.parent;
    if (occ < 0) return false;
  }
  return false;
}

} // namespace

ParallelogramResult parallelogram_open(double lambda, double L, double delta,
                                       double v_input, int64_t reps, uint64_t seed,
                                       int jobs) {
  if (lambda < 0.0) throw DomainError("parallelogram_open: lambda must be nonnegative");
  if (L <= 0.0 || delta <= 0.0) throw DomainError("parallelogram_open: L and delta must be positive");
  if (v_input <= 0.0) throw DomainError("parallelogram_open: the window speed must be positive");
  if (reps <= 0) throw DomainError("parallelogram_open: reps must be positive");

  WindowGeom g;
  g.dL = delta * L;
  g.v = v_input;
  g.t_L = (1.0 + 3.0 * delta) * L / v_input;

  ParallelogramResult out;
  out.t_L = g.t_L;
  out.start_lo = (int32_t)std::floor(-1.1 * g.dL);
  out.start_hi = (int32_t)std::ceil(-0.9 * g.dL);
  out.end_lo = (int32_t)std::ceil((1.0 + 1.75 * delta) * L);
  out.end_hi = (int32_t)std::floor((1.0 + 2.25 * delta) * L);
  if (out.end_lo > out.end_hi) {
    throw DomainError("parallelogram_open: the target interval is empty at this L and delta");
  }

  Box box = make_box1((int32_t)std::floor(-1.5 * g.dL) - 1,
                      (int32_t)std::ceil((1.0 + 2.5 * delta) * L) + 1);
  std::vector<int32_t> seed_sites;
  std::vector<uint8_t> seeded((size_t)box.n_sites(), 0);
  for (int32_t x = out.start_lo; x <= out.start_hi; ++x) {
    if (g.in_band((double)x, 0.0)) {
      seed_sites.push_back(x);
      seeded[(size_t)box.index({x, 0})] = 1;
    }
  }
  if (seed_sites.empty()) {
    throw DomainError("parallelogram_open: the window is too narrow to seed any site");
  }

  std::vector<uint8_t> ok((size_t)reps, 0), audit_bad((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long rep) {
    EventStream stream = build_stream(cp_params(lambda), box, g.t_L + 1e-9,
                                      derive_seed(seed, (uint64_t)rep));
    WindowRun run = run_window(stream, box, g, seed_sites, out.end_lo, out.end_hi, true);
    ok[(size_t)rep] = run.success;
    if (run.success) {
      audit_bad[(size_t)rep] = !audit_window_path(stream, box, g, run, out.end_lo, seeded);
    }
  });

  long long hits = 0;
  for (int64_t rep = 0; rep < reps; ++rep) {
    hits += ok[(size_t)rep];
    out.audit_checked += ok[(size_t)rep];
    out.audit_failures += audit_bad[(size_t)rep];
  }
  out.prob = wilson_ci(hits, reps, seed);
  return out;
}

} // namespace sic
