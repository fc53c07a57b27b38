#include "lattice.hpp"

#include <cmath>

#include "errors.hpp"

namespace sic {

bool Box::contains(const Site& s) const {
  if (s.x < lo[0] || s.x > hi[0]) return false;
  if (dim == 1) return s.y == 0;
  return s.y >= lo[1] && s.y <= hi[1];
}

int32_t Box::index(const Site& s) const {
  if (dim == 1) return s.x - lo[0];
  return (s.x - lo[0]) + len(0) * (s.y - lo[1]);
}

Site Box::site(int32_t idx) const {
  if (dim == 1) return {lo[0] + idx, 0};
  return {lo[0] + idx % len(0), lo[1] + idx / len(0)};
}

void Box::validate() const {
  if (dim != 1 && dim != 2) throw DomainError("box: dim must be 1 or 2");
  for (int a = 0; a < dim; a++)
    if (lo[a] > hi[a]) throw DomainError("box: lo > hi");
  if (dim == 1 && (lo[1] != 0 || hi[1] != 0))
    throw DomainError("box: 1d box must have y range {0}");
}

Box make_box1(int32_t lo, int32_t hi, Boundary b) {
  Box box;
  box.dim = 1;
  box.lo[0] = lo;
  box.hi[0] = hi;
  box.boundary = b;
  box.validate();
  return box;
}

Box make_box2(int32_t lox, int32_t hix, int32_t loy, int32_t hiy, Boundary b) {
  Box box;
  box.dim = 2;
  box.lo[0] = lox;
  box.hi[0] = hix;
  box.lo[1] = loy;
  box.hi[1] = hiy;
  box.boundary = b;
  box.validate();
  return box;
}

Box make_centered_box(int dim, int32_t halfwidth, Boundary b) {
  if (dim == 1) return make_box1(-halfwidth, halfwidth, b);
  return make_box2(-halfwidth, halfwidth, -halfwidth, halfwidth, b);
}

namespace {
// wrap coordinate into [lo, hi] for periodic boxes
inline int32_t wrap(int32_t v, int32_t lo, int32_t len) {
  int32_t off = (v - lo) % len;
  if (off < 0) off += len;
  return lo + off;
}
} // namespace

int neighbors(const Site& site, const Box& box, Adjacency adj, Site out[8]) {
  if (!box.contains(site)) throw DomainError("neighbors: site outside box");
  static const int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int deg = box.dim == 1 ? 2 : (adj == Adjacency::LStar ? 8 : 4);
  int n = 0;
  for (int k = 0; k < deg; k++) {
    Site s{site.x + dx8[k], site.y + dy8[k]};
    if (box.boundary == Boundary::Periodic) {
      s.x = wrap(s.x, box.lo[0], box.len(0));
      if (box.dim == 2) s.y = wrap(s.y, box.lo[1], box.len(1));
      if (s == site) continue; // wrapped onto itself (length-1 axis)
      bool dup = false;
      for (int i = 0; i < n; i++)
        if (out[i] == s) dup = true;
      if (dup) continue;
      out[n++] = s;
    } else {
      if (box.contains(s)) out[n++] = s;
    }
  }
  return n;
}

std::array<Rect, 4> make_rectangles(int N, double eta) {
  if (N < 8) throw DomainError("make_rectangles: N >= 8 required");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("make_rectangles: eta in (0,1) required");
  const int32_t L = N / 3;
  const int32_t W = (int32_t)std::floor(std::pow((double)N, eta) + 1e-9);
  if (W < 1) throw DomainError("make_rectangles: floor(N^eta) >= 1 required");
  // strips are trimmed to the ambient square: wide strips (large eta at small
  // N) would otherwise poke out of [-N,N]^2
  const int32_t lo = std::max(-L - W, -N);
  const int32_t hi = std::min(L + W, N);
  Rect q1{lo, -L + W, -N, N};
  Rect q2{-N, N, L - W, hi};
  Rect q3{L - W, hi, -N, N};
  Rect q4{-N, N, lo, -L + W};
  return {q1, q2, q3, q4};
}

int PathEmbedding::index_of(const Site& s) const {
  for (size_t i = 0; i < site_of.size(); i++)
    if (site_of[i] == s) return (int)i;
  return -1;
}

PathEmbedding embed_path(const SitePath& path, Adjacency adj) {
  if (path.sites.empty()) throw DomainError("embed_path: empty path");
  for (size_t i = 0; i < path.sites.size(); i++) {
    for (size_t j = i + 1; j < path.sites.size(); j++)
      if (path.sites[i] == path.sites[j])
        throw DomainError("embed_path: repeated site (path not self-avoiding)");
    if (i + 1 < path.sites.size()) {
      const int dx = std::abs(path.sites[i + 1].x - path.sites[i].x);
      const int dy = std::abs(path.sites[i + 1].y - path.sites[i].y);
      const bool ok = adj == Adjacency::ZNearest ? (dx + dy == 1)
                                                 : (std::max(dx, dy) == 1);
      if (!ok) throw DomainError("embed_path: consecutive sites not adjacent");
    }
  }
  PathEmbedding e;
  e.site_of = path.sites;
  return e;
}

} // namespace sic
