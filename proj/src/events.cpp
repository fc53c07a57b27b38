#include "events.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "errors.hpp"
#include "rng.hpp"

namespace sic {

void ModelParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("params: lambda >= 0 required");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("params: theta > 0 required");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("params: alpha >= 0 required");
  if (dim != 1 && dim != 2) throw DomainError("params: dim must be 1 or 2");
}

namespace {

// fixed direction table; arrow stream id = 3*n_sites + site*2*dim + dir
const int kDx[4] = {1, -1, 0, 0};
const int kDy[4] = {0, 0, 1, -1};

constexpr uint64_t kThinSalt = 0x7468696e5f73616cULL;

// target of the directed edge (site, dir); false if absent (vacant-frozen edge
// leaving the box)
bool edge_target(const Box& box, const Site& from, int dir, Site& to) {
  to = {from.x + kDx[dir], from.y + kDy[dir]};
  if (box.boundary == Boundary::Periodic) {
    int32_t len0 = box.len(0);
    int32_t off = (to.x - box.lo[0]) % len0;
    if (off < 0) off += len0;
    to.x = box.lo[0] + off;
    if (box.dim == 2) {
      int32_t len1 = box.len(1);
      off = (to.y - box.lo[1]) % len1;
      if (off < 0) off += len1;
      to.y = box.lo[1] + off;
    }
    return !(to == from);
  }
  return box.contains(to);
}

struct EventOrder {
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t < b.t;
    if (a.type != b.type) return a.type < b.type;
    if (a.src != b.src) return a.src < b.src;
    return a.site < b.site;
  }
};

void fill_stream(std::vector<Event>& out, uint64_t seed, uint64_t sid, double rate,
                 double horizon, EventType type, int32_t site, int32_t src) {
  if (rate <= 0.0) return;
  CounterRng rng(seed, sid);
  double t = rng.next_exp(rate);
  while (t < horizon) {
    out.push_back({t, site, src, type});
    t += rng.next_exp(rate);
  }
}

} // namespace

int64_t EventStream::n_directed_edges() const {
  const int64_t n = box.n_sites();
  int64_t cnt = 0;
  for (int32_t i = 0; i < n; i++) {
    Site from = box.site(i), to;
    for (int dir = 0; dir < 2 * box.dim; dir++)
      if (edge_target(box, from, dir, to)) cnt++;
  }
  return cnt;
}

EventStream build_stream(const ModelParams& params, const Box& box, double horizon,
                         uint64_t seed) {
  params.validate();
  box.validate();
  if (params.dim != box.dim) throw DomainError("build_stream: params.dim != box.dim");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw DomainError("build_stream: horizon > 0 required");

  EventStream s;
  s.box = box;
  s.params = params;
  s.horizon = horizon;
  s.seed = seed;

  const int64_t n = box.n_sites();
  const double site_rate = 1.0 + params.alpha + params.removal_rate();
  const double expect =
      horizon * ((double)n * site_rate + (double)n * 2 * box.dim * params.lambda);
  s.events.reserve((size_t)(expect * 1.05) + 64);

  for (int32_t i = 0; i < n; i++) {
    fill_stream(s.events, seed, (uint64_t)i, 1.0, horizon, EventType::Death, i, -1);
    fill_stream(s.events, seed, (uint64_t)n + i, params.alpha, horizon,
                EventType::SterileArrival, i, -1);
    fill_stream(s.events, seed, (uint64_t)2 * n + i, params.removal_rate(), horizon,
                EventType::SterileRemoval, i, -1);
    Site from = box.site(i), to;
    for (int dir = 0; dir < 2 * box.dim; dir++) {
      if (!edge_target(box, from, dir, to)) continue;
      fill_stream(s.events, seed, (uint64_t)3 * n + (uint64_t)i * 2 * box.dim + dir,
                  params.lambda, horizon, EventType::Arrow, box.index(to), i);
    }
  }
  std::sort(s.events.begin(), s.events.end(), EventOrder{});
  return s;
}

std::span<const Event> events_in_window(const EventStream& s, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 >= t0) || !(t1 <= s.horizon))
    throw DomainError("events_in_window: need 0 <= t0 <= t1 <= horizon");
  auto lo = std::lower_bound(s.events.begin(), s.events.end(), t0,
                             [](const Event& e, double t) { return e.t < t; });
  auto hi = std::lower_bound(lo, s.events.end(), t1,
                             [](const Event& e, double t) { return e.t < t; });
  return {&*lo, (size_t)(hi - lo)};
}

EventStream thinned_arrows(const EventStream& s, double keep_prob) {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0))
    throw DomainError("thinned_arrows: keep_prob in [0,1] required");
  const int64_t n = s.box.n_sites();
  // per-edge arrow counters; scanning the merged list ascending visits each
  // edge's arrows in arrival order, so counter k is the arrow's index
  std::vector<uint32_t> k((size_t)n * 2 * s.box.dim, 0);
  const uint64_t thin_seed = derive_seed(s.seed, kThinSalt);

  EventStream out;
  out.box = s.box;
  out.params = s.params;
  out.params.lambda = s.params.lambda * keep_prob;
  out.horizon = s.horizon;
  out.seed = s.seed;
  out.events.reserve(s.events.size());
  for (const Event& e : s.events) {
    if (e.type != EventType::Arrow) {
      out.events.push_back(e);
      continue;
    }
    // recover the direction index of edge (src -> site)
    Site from = s.box.site(e.src), to;
    int dir = -1;
    for (int d = 0; d < 2 * s.box.dim; d++)
      if (edge_target(s.box, from, d, to) && s.box.index(to) == e.site) {
        dir = d;
        break;
      }
    const size_t edge = (size_t)e.src * 2 * s.box.dim + dir;
    CounterRng rng(thin_seed, (uint64_t)3 * n + edge);
    rng.skip(k[edge]++);
    if (rng.next_u01() < keep_prob) out.events.push_back(e);
  }
  return out;
}

namespace {
void print_site(std::ostream& os, const Box& box, int32_t idx) {
  Site s = box.site(idx);
  if (box.dim == 1)
    os << s.x;
  else
    os << '(' << s.x << ' ' << s.y << ')';
}
} // namespace

void dump_stream(const EventStream& s, std::ostream& os) {
  static const char* names[4] = {"death", "arrow", "sterile-arrival", "sterile-removal"};
  char buf[32];
  for (const Event& e : s.events) {
    std::snprintf(buf, sizeof buf, "%.17g", e.t);
    os << buf << ',' << names[(int)e.type] << ',';
    if (e.type == EventType::Arrow) {
      print_site(os, s.box, e.src);
      os << "->";
    }
    print_site(os, s.box, e.site);
    os << '\n';
  }
}

std::vector<double> mark_times(const EventStream& s, EventType type, const Site& site) {
  std::vector<double> ts;
  const int32_t idx = s.box.index(site);
  for (const Event& e : s.events)
    if (e.type == type && e.site == idx && e.src == -1) ts.push_back(e.t);
  return ts;
}

std::vector<double> arrow_times(const EventStream& s, const Site& from, const Site& to) {
  std::vector<double> ts;
  const int32_t f = s.box.index(from), t = s.box.index(to);
  for (const Event& e : s.events)
    if (e.type == EventType::Arrow && e.src == f && e.site == t) ts.push_back(e.t);
  return ts;
}

} // namespace sic
