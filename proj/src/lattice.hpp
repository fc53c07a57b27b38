#pragma once
#include <array>
#include <cstdint>
#include <vector>

namespace sic {

enum class Boundary { VacantFrozen, Periodic };
enum class Adjacency { ZNearest, LStar };

struct Site {
  int32_t x = 0;
  int32_t y = 0; // unused (0) when dim == 1
  bool operator==(const Site&) const = default;
};

// Finite box in Z^1 or Z^2. Under the vacant-frozen boundary, sites outside
// the box are permanently empty and never give birth (the truncated process);
// under the periodic boundary, coordinates wrap.
struct Box {
  int dim = 2;
  int32_t lo[2] = {0, 0};
  int32_t hi[2] = {0, 0};
  Boundary boundary = Boundary::VacantFrozen;

  int32_t len(int axis) const { return hi[axis] - lo[axis] + 1; }
  int64_t n_sites() const { return dim == 1 ? (int64_t)len(0) : (int64_t)len(0) * len(1); }
  bool contains(const Site& s) const;
  int32_t index(const Site& s) const; // row-major linear index
  Site site(int32_t idx) const;
  void validate() const; // throws DomainError on lo > hi or bad dim
};

Box make_box1(int32_t lo, int32_t hi, Boundary b = Boundary::VacantFrozen);
Box make_box2(int32_t lox, int32_t hix, int32_t loy, int32_t hiy,
              Boundary b = Boundary::VacantFrozen);
// the centered square [-n, n]^dim
Box make_centered_box(int dim, int32_t halfwidth, Boundary b = Boundary::VacantFrozen);

// closed integer rectangle [x0,x1] x [y0,y1]
struct Rect {
  int32_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool contains(const Site& s) const {
    return s.x >= x0 && s.x <= x1 && s.y >= y0 && s.y <= y1;
  }
};

struct SitePath {
  std::vector<Site> sites;
};

// In-box neighbors of `site` under the adjacency and the box's boundary rule.
// Writes up to 8 sites into out, returns the count. Out-of-box site -> DomainError.
int neighbors(const Site& site, const Box& box, Adjacency adj, Site out[8]);

// The four crossing strips at scale N with fringe exponent eta,
// half-width floor(N^eta), offset floor(N/3). Q1/Q3 vertical, Q2/Q4 horizontal.
std::array<Rect, 4> make_rectangles(int N, double eta);

// Bijection between a self-avoiding path and the interval [0, l].
// Consecutive sites must be adjacent (raw lattice adjacency, boxless).
struct PathEmbedding {
  std::vector<Site> site_of; // index -> site
  int length() const { return (int)site_of.size() - 1; }
  int index_of(const Site& s) const; // -1 if not on the path
};
PathEmbedding embed_path(const SitePath& path, Adjacency adj = Adjacency::ZNearest);

} // namespace sic
