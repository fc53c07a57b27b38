#include "percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace sic {

namespace {

constexpr uint64_t kSiteSalt = 0x706572635f736974ULL;

// per-site uniform, independent of everything but (seed, site index)
inline double site_uniform(uint64_t seed, int32_t idx) {
  return CounterRng(seed, kSiteSalt ^ (uint64_t)(uint32_t)idx).next_u01();
}

struct UnionFind {
  std::vector<int32_t> parent;
  explicit UnionFind(int32_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int32_t find(int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
};

} // namespace

PercGrid sample_grid(double p, const Box& box, Adjacency adj, uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw DomainError("sample_grid: p must lie in [0,1]");
  box.validate();
  if (box.dim != 2) throw DomainError("sample_grid: percolation grids are 2-d");
  PercGrid g;
  g.box = box;
  g.adj = adj;
  int64_t n = box.n_sites();
  g.open.resize((size_t)n);
  for (int64_t i = 0; i < n; ++i) {
    g.open[(size_t)i] = site_uniform(seed, (int32_t)i) < p;
  }
  return g;
}

bool has_crossing(const PercGrid& g, const Rect& rect, CrossDir dir) {
  if (!g.box.contains({rect.x0, rect.y0}) || !g.box.contains({rect.x1, rect.y1}) ||
      rect.x0 > rect.x1 || rect.y0 > rect.y1) {
    throw DomainError("has_crossing: rect must lie inside the grid box");
  }
  const int32_t w = rect.x1 - rect.x0 + 1;
  const int32_t h = rect.y1 - rect.y0 + 1;
  const int32_t n = w * h;
  const int32_t kSource = n, kSink = n + 1;
  UnionFind uf(n + 2);

  auto local = [&](const Site& s) { return (s.x - rect.x0) + w * (s.y - rect.y0); };

  Site nb[8];
  for (int32_t y = rect.y0; y <= rect.y1; ++y) {
    for (int32_t x = rect.x0; x <= rect.x1; ++x) {
      Site s{x, y};
      int32_t bi = g.box.index(s);
      if (!g.open[(size_t)bi]) continue;
      int32_t li = local(s);
      if (dir == CrossDir::TopBottom) {
        if (y == rect.y1) uf.unite(li, kSource);
        if (y == rect.y0) uf.unite(li, kSink);
      } else {
        if (x == rect.x0) uf.unite(li, kSource);
        if (x == rect.x1) uf.unite(li, kSink);
      }
      int cnt = neighbors(s, g.box, g.adj, nb);
      for (int k = 0; k < cnt; ++k) {
        if (!rect.contains(nb[k])) continue;
        if (!g.open[(size_t)g.box.index(nb[k])]) continue;
        uf.unite(li, local(nb[k]));
      }
    }
  }
  return uf.find(kSource) == uf.find(kSink);
}

EstimateCI four_crossings_prob(double p, int N, double eta, int64_t reps,
                               uint64_t seed, Adjacency adj, int jobs) {
  if (reps <= 0) throw DomainError("four_crossings_prob: reps must be positive");
  auto rects = make_rectangles(N, eta); // validates N, eta
  Box box = make_centered_box(2, N);

  std::vector<uint8_t> ok((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    PercGrid g = sample_grid(p, box, adj, derive_seed(seed, (uint64_t)r));
    bool all = has_crossing(g, rects[0], CrossDir::TopBottom) &&
               has_crossing(g, rects[2], CrossDir::TopBottom) &&
               has_crossing(g, rects[1], CrossDir::LeftRight) &&
               has_crossing(g, rects[3], CrossDir::LeftRight);
    ok[(size_t)r] = all;
  });
  long long hits = std::accumulate(ok.begin(), ok.end(), 0LL);
  return wilson_ci(hits, reps, seed);
}

namespace {

// lazy origin-cluster growth; returns size (capped) and boundary contact
struct ClusterProbe {
  int64_t size = 0;
  bool boundary = false;
};

ClusterProbe grow_cluster(double p, const Box& box, Adjacency adj, uint64_t rep_seed,
                          int64_t cap) {
  ClusterProbe out;
  Site origin{0, 0};
  if (!box.contains(origin)) throw DomainError("cluster_stats: box must contain the origin");
  int32_t oidx = box.index(origin);
  if (!(site_uniform(rep_seed, oidx) < p)) return out; // closed origin: size 0

  std::vector<uint8_t> seen((size_t)box.n_sites(), 0);
  std::vector<int32_t> queue;
  seen[(size_t)oidx] = 1;
  queue.push_back(oidx);
  out.size = 1;
  Site nb[8];
  for (size_t head = 0; head < queue.size(); ++head) {
    if (cap > 0 && out.size >= cap) break;
    Site s = box.site(queue[head]);
    if (s.x == box.lo[0] || s.x == box.hi[0] || s.y == box.lo[1] || s.y == box.hi[1]) {
      out.boundary = true;
    }
    int cnt = neighbors(s, box, adj, nb);
    for (int k = 0; k < cnt; ++k) {
      int32_t idx = box.index(nb[k]);
      if (seen[(size_t)idx]) continue;
      seen[(size_t)idx] = 1;
      if (site_uniform(rep_seed, idx) < p) {
        queue.push_back(idx);
        ++out.size;
        if (cap > 0 && out.size >= cap) break;
      }
    }
  }
  return out;
}

} // namespace

ClusterStats cluster_stats(double p, const Box& box, Adjacency adj, int64_t reps,
                           uint64_t seed, int64_t size_cap, int jobs) {
  if (p < 0.0 || p > 1.0) throw DomainError("cluster_stats: p must lie in [0,1]");
  box.validate();
  if (box.dim != 2) throw DomainError("cluster_stats: percolation grids are 2-d");
  if (reps <= 0) throw DomainError("cluster_stats: reps must be positive");

  ClusterStats cs;
  cs.sizes.assign((size_t)reps, 0);
  std::vector<uint8_t> btouch((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    ClusterProbe pr = grow_cluster(p, box, adj, derive_seed(seed, (uint64_t)r), size_cap);
    cs.sizes[(size_t)r] = pr.size;
    btouch[(size_t)r] = pr.boundary;
  });

  std::vector<double> xs(cs.sizes.begin(), cs.sizes.end());
  cs.chi = mean_ci(xs, seed);
  cs.boundary_hits = std::accumulate(btouch.begin(), btouch.end(), 0LL);
  cs.boundary_frac = (double)cs.boundary_hits / (double)reps;
  cs.boundary_warning = cs.boundary_frac > 0.01;

  // tail fit over n with at least 30 surviving samples
  int64_t max_size = *std::max_element(cs.sizes.begin(), cs.sizes.end());
  std::vector<int64_t> at_least((size_t)max_size + 2, 0);
  for (int64_t s : cs.sizes) ++at_least[(size_t)s];
  for (int64_t n = max_size - 1; n >= 0; --n) at_least[(size_t)n] += at_least[(size_t)n + 1];
  for (int64_t n = 1; n <= max_size; ++n) {
    if (at_least[(size_t)n] < 30) break;
    cs.tail_n.push_back((double)n);
    cs.tail_logp.push_back(std::log((double)at_least[(size_t)n] / (double)reps));
  }
  if (cs.tail_n.size() >= 4) {
    LinFit fit = linear_fit(cs.tail_n, cs.tail_logp);
    cs.gamma_hat = -fit.slope;
    cs.r2 = fit.r2;
  }
  return cs;
}

namespace {

// LR crossing probability of [0,N]^2 at density p with per-replica CRN seeds
double crossing_prob_crn(Adjacency adj, int N, double p, int64_t reps, uint64_t seed,
                         int jobs) {
  Box box = make_box2(0, N, 0, N);
  Rect rect{0, N, 0, N};
  std::vector<uint8_t> ok((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    PercGrid g = sample_grid(p, box, adj, derive_seed(seed, (uint64_t)r));
    ok[(size_t)r] = has_crossing(g, rect, CrossDir::LeftRight);
  });
  return (double)std::accumulate(ok.begin(), ok.end(), 0LL) / (double)reps;
}

} // namespace

ThresholdResult threshold_bisect(Adjacency adj, int N, double target_prob, double tol,
                                 int64_t reps_per_eval, uint64_t seed, int jobs) {
  if (N < 2) throw DomainError("threshold_bisect: N must be at least 2");
  if (target_prob <= 0.0 || target_prob >= 1.0) {
    throw DomainError("threshold_bisect: target probability must lie in (0,1)");
  }
  if (tol <= 0.0) throw DomainError("threshold_bisect: tol must be positive");
  if (reps_per_eval <= 0) throw DomainError("threshold_bisect: reps must be positive");

  ThresholdResult out;
  out.reps_per_eval = reps_per_eval;
  double lo = 0.0, hi = 1.0; // f(0) = 0 < target < 1 = f(1), same seeds everywhere
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double f = crossing_prob_crn(adj, N, mid, reps_per_eval, seed, jobs);
    ++out.evals;
    if (f >= target_prob) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.lo = lo;
  out.hi = hi;
  out.p_hat = 0.5 * (lo + hi);
  return out;
}

P0Result solve_p0(double lambda, double tol, int64_t chi_budget, uint64_t seed) {
  if (lambda < 0.0) throw DomainError("solve_p0: lambda must be nonnegative");
  if (tol <= 0.0) throw DomainError("solve_p0: tol must be positive");
  if (chi_budget <= 0) throw DomainError("solve_p0: chi budget must be positive");

  P0Result out;
  out.q_lambda = (1.0 - std::exp(-1.0)) * std::exp(-4.0 * lambda);
  out.chi_star = 1.0 / (2.0 * std::sqrt(-std::log(out.q_lambda)));

  Box box = make_centered_box(2, 64);
  auto chi_at = [&](double p) {
    return cluster_stats(p, box, Adjacency::ZNearest, chi_budget, seed).chi.value;
  };

  double lo = 0.0, hi = 0.45; // safely subcritical on the square lattice
  double chi_hi = chi_at(hi);
  if (chi_hi <= out.chi_star) {
    throw DomainError("solve_p0: mean cluster size at the bracket top does not reach the target");
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double c = chi_at(mid);
    ++out.iterations;
    if (c >= out.chi_star) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.p0 = 0.5 * (lo + hi);
  out.chi_at_p0 = chi_at(out.p0);
  return out;
}

} // namespace sic
