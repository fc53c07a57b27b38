#include "duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace sic {

namespace {

void validate_sites_in_box(const std::vector<Site>& sites, const Box& box,
                           const char* what) {
  for (const Site& s : sites) {
    if (!box.contains(s)) {
      throw DomainError(std::string(what) + ": site outside the box");
    }
  }
}

void validate_env_init(const EventStream& s, const LatticeConfig& env_init) {
  if (env_init.box.dim != s.box.dim || env_init.box.lo[0] != s.box.lo[0] ||
      env_init.box.hi[0] != s.box.hi[0] || env_init.box.lo[1] != s.box.lo[1] ||
      env_init.box.hi[1] != s.box.hi[1]) {
    throw DomainError("dual_evolve: env_init box does not match the stream box");
  }
  env_init.validate();
  for (int8_t v : env_init.s) {
    if (v == 1) {
      throw DomainError("dual_evolve: env_init must only hold states 0 and -1");
    }
  }
}

} // namespace

bool EnvTimeline::minus1_at(int32_t index, double t) const {
  const auto& v = iv[(size_t)index];
  // first interval with a > t, predecessor may cover t
  auto it = std::upper_bound(v.begin(), v.end(), t,
                             [](double val, const std::pair<double, double>& p) {
                               return val < p.first;
                             });
  if (it == v.begin()) return false;
  --it;
  return t < it->second;
}

EnvTimeline build_env_timeline(const EventStream& s, const LatticeConfig& env_init,
                               double t) {
  validate_env_init(s, env_init);
  if (t > s.horizon) {
    throw DomainError("build_env_timeline: t exceeds the stream horizon");
  }
  const double inf = std::numeric_limits<double>::infinity();
  const int64_t n = s.box.n_sites();
  EnvTimeline tl;
  tl.iv.resize((size_t)n);

  std::vector<uint8_t> in(n, 0);
  std::vector<double> start(n, 0.0);
  for (int64_t i = 0; i < n; ++i) in[i] = (env_init.s[(size_t)i] == -1);

  auto window = events_in_window(s, 0.0, std::nextafter(t, inf));
  for (const Event& e : window) {
    if (e.type == EventType::SterileArrival) {
      if (!in[e.site]) {
        in[e.site] = 1;
        start[e.site] = e.t;
      }
    } else if (e.type == EventType::SterileRemoval) {
      if (in[e.site]) {
        in[e.site] = 0;
        tl.iv[(size_t)e.site].emplace_back(start[e.site], e.t);
      }
    }
  }
  for (int64_t i = 0; i < n; ++i) {
    if (in[i]) tl.iv[(size_t)i].emplace_back(start[i], inf);
  }
  return tl;
}

DualResult dual_evolve(const EventStream& s, const LatticeConfig& env_init,
                       const std::vector<Site>& C, double t) {
  if (t < 0.0) throw DomainError("dual_evolve: negative time");
  if (t > s.horizon) throw DomainError("dual_evolve: t exceeds the stream horizon");
  validate_sites_in_box(C, s.box, "dual_evolve");
  EnvTimeline tl = build_env_timeline(s, env_init, t);

  const int64_t n = s.box.n_sites();
  // Right endpoints of -1 intervals per site: a removal event flips the
  // environment exactly when its timestamp is one of these (same double).
  std::vector<std::vector<double>> release(n);
  for (int64_t i = 0; i < n; ++i) {
    for (const auto& p : tl.iv[(size_t)i]) {
      if (std::isfinite(p.second)) release[(size_t)i].push_back(p.second);
    }
  }

  std::vector<uint8_t> dual(n, 0);
  for (const Site& c : C) {
    int32_t idx = s.box.index(c);
    if (!tl.minus1_at(idx, t)) dual[idx] = 1;
  }

  const double inf = std::numeric_limits<double>::infinity();
  auto window = events_in_window(s, 0.0, std::nextafter(t, inf));
  for (auto it = window.rbegin(); it != window.rend(); ++it) {
    const Event& e = *it;
    switch (e.type) {
      case EventType::Death:
        dual[e.site] = 0;
        break;
      case EventType::Arrow:
        // forward arrow src -> site; a backward path sitting at `site` steps
        // down through the arrow onto `src` unless src is -1 at that instant
        if (dual[e.site] && !tl.minus1_at(e.src, e.t)) dual[e.src] = 1;
        break;
      case EventType::SterileRemoval: {
        const auto& rel = release[(size_t)e.site];
        if (std::binary_search(rel.begin(), rel.end(), e.t)) dual[e.site] = 0;
        break;
      }
      case EventType::SterileArrival:
        // below an effective arrival the site is not -1; membership unchanged.
        // (dual occupation of a -1 site is impossible, so nothing to clear.)
        break;
    }
  }

  DualResult r;
  for (int64_t i = 0; i < n; ++i) {
    if (dual[i]) r.a_hat.push_back((int32_t)i);
    if (tl.minus1_at((int32_t)i, t)) r.b_hat0.push_back((int32_t)i);
  }
  return r;
}

namespace {

constexpr uint64_t kDualSaltStream = 0x6475616c5f73740aULL;
constexpr uint64_t kDualSaltInit = 0x6475616c5f696e69ULL;

// one forward run of the all-flip variant from nu_X; reports whether the
// time-t 1-set hits `hit1`, plus the -1 sets at times 0 and t
struct ForwardOutcome {
  bool ones_hit = false;
  bool minus0_hit = false;
  bool minust_hit = false;
};

ForwardOutcome forward_event(const std::vector<Site>& X, const std::vector<Site>& hit1,
                             const std::vector<Site>& D, double t, const ModelParams& p,
                             const Box& box, uint64_t rep_seed) {
  InitialSpec spec;
  spec.kind = InitialSpec::Kind::NuC;
  spec.C = X;
  spec.theta = p.theta;
  LatticeConfig init = sample_initial(spec, box, derive_seed(rep_seed, kDualSaltInit));
  EventStream stream =
      build_stream(p, box, t + 1e-9, derive_seed(rep_seed, kDualSaltStream));
  Trajectory traj = evolve(Variant::Remenik, init, stream, {t}, true);
  const std::vector<int8_t>& cfg = traj.configs[0];
  ForwardOutcome out;
  for (const Site& y : hit1) {
    if (cfg[(size_t)box.index(y)] == 1) {
      out.ones_hit = true;
      break;
    }
  }
  for (const Site& z : D) {
    int32_t idx = box.index(z);
    if (init.s[(size_t)idx] == -1) out.minus0_hit = true;
    if (cfg[(size_t)idx] == -1) out.minust_hit = true;
  }
  return out;
}

} // namespace

DualityCheck duality_check(const std::vector<Site>& A, const std::vector<Site>& C,
                           const std::vector<Site>& D, double t, const ModelParams& p,
                           const Box& box, int64_t reps, uint64_t seed, int jobs) {
  p.validate();
  box.validate();
  if (reps <= 0) throw DomainError("duality_check: reps must be positive");
  if (t < 0.0) throw DomainError("duality_check: negative time");
  validate_sites_in_box(A, box, "duality_check");
  validate_sites_in_box(C, box, "duality_check");
  validate_sites_in_box(D, box, "duality_check");

  std::vector<uint8_t> lhs_hit(reps, 0), rhs_hit(reps, 0);
  parallel_for(reps, jobs, [&](long long r) {
    // lhs: start on A, ask for 1's on C at t and -1's on D at t
    ForwardOutcome a = forward_event(A, C, D, t, p, box, derive_seed(seed, 2 * r));
    lhs_hit[r] = a.ones_hit && a.minust_hit;
    // rhs: start on C, ask for 1's on A at t and -1's on D at 0
    ForwardOutcome c = forward_event(C, A, D, t, p, box, derive_seed(seed, 2 * r + 1));
    rhs_hit[r] = c.ones_hit && c.minus0_hit;
  });

  long long nl = 0, nr = 0;
  for (int64_t r = 0; r < reps; ++r) {
    nl += lhs_hit[r];
    nr += rhs_hit[r];
  }
  DualityCheck out;
  out.lhs = wilson_ci(nl, reps, seed);
  out.rhs = wilson_ci(nr, reps, seed);
  out.z = z_score(out.lhs, out.rhs);
  return out;
}

PathwiseCheck pathwise_duality_check(const std::vector<Site>& A,
                                     const std::vector<Site>& C,
                                     const std::vector<Site>& D, double t,
                                     const ModelParams& p, const Box& box,
                                     int64_t reps, uint64_t seed) {
  p.validate();
  box.validate();
  if (reps <= 0) throw DomainError("pathwise_duality_check: reps must be positive");
  validate_sites_in_box(A, box, "pathwise_duality_check");
  validate_sites_in_box(C, box, "pathwise_duality_check");
  validate_sites_in_box(D, box, "pathwise_duality_check");

  PathwiseCheck out;
  for (int64_t r = 0; r < reps; ++r) {
    uint64_t rep_seed = derive_seed(seed, (uint64_t)r);
    InitialSpec spec;
    spec.kind = InitialSpec::Kind::NuC;
    spec.C = A;
    spec.theta = p.theta;
    LatticeConfig init =
        sample_initial(spec, box, derive_seed(rep_seed, kDualSaltInit));
    EventStream stream =
        build_stream(p, box, t + 1e-9, derive_seed(rep_seed, kDualSaltStream));

    Trajectory traj = evolve(Variant::Remenik, init, stream, {t}, true);
    const std::vector<int8_t>& cfg = traj.configs[0];
    bool fwd_ones = false, fwd_minus = false;
    for (const Site& y : C) {
      if (cfg[(size_t)box.index(y)] == 1) {
        fwd_ones = true;
        break;
      }
    }
    for (const Site& z : D) {
      if (cfg[(size_t)box.index(z)] == -1) {
        fwd_minus = true;
        break;
      }
    }

    LatticeConfig env_init = init;
    for (int8_t& v : env_init.s) {
      if (v == 1) v = 0;
    }
    DualResult dual = dual_evolve(stream, env_init, C, t);
    bool bwd_ones = false;
    for (const Site& a : A) {
      int32_t idx = box.index(a);
      if (std::binary_search(dual.a_hat.begin(), dual.a_hat.end(), idx)) {
        bwd_ones = true;
        break;
      }
    }

    // the reconstructed time-t environment must match the forward one exactly
    std::vector<int32_t> fwd_m;
    for (size_t i = 0; i < cfg.size(); ++i) {
      if (cfg[i] == -1) fwd_m.push_back((int32_t)i);
    }
    if (fwd_m != dual.b_hat0) ++out.env_mismatches;

    bool lhs_event = fwd_ones && fwd_minus;
    bool rhs_event = bwd_ones && fwd_minus;
    if (lhs_event != rhs_event) ++out.failures;
    if (lhs_event) ++out.hits;
  }
  return out;
}

} // namespace sic
