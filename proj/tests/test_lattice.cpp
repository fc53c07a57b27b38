#include <doctest.h>

#include "errors.hpp"
#include "lattice.hpp"

using namespace sic;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("neighbor counts at interior, edge, corner") {
  Box box = make_centered_box(2, 1);
  Site out[8];

  CHECK(neighbors({0, 0}, box, Adjacency::ZNearest, out) == 4);
  CHECK(neighbors({1, 1}, box, Adjacency::ZNearest, out) == 2);
  CHECK(neighbors({1, 0}, box, Adjacency::ZNearest, out) == 3);
  CHECK(neighbors({0, 0}, box, Adjacency::LStar, out) == 8);
  CHECK(neighbors({1, 1}, box, Adjacency::LStar, out) == 3);

  CHECK_THROWS_AS(neighbors({2, 0}, box, Adjacency::ZNearest, out), DomainError);
}

TEST_CASE("periodic neighbors wrap and deduplicate") {
  Box box = make_centered_box(2, 1, Boundary::Periodic);
  Site out[8];
  CHECK(neighbors({1, 1}, box, Adjacency::ZNearest, out) == 4);

  Box line = make_box1(0, 4, Boundary::Periodic);
  CHECK(neighbors({0, 0}, line, Adjacency::ZNearest, out) == 2);
  bool saw_wrap = false;
  for (int i = 0; i < 2; i++)
    if (out[i] == Site{4, 0}) saw_wrap = true;
  CHECK(saw_wrap);
}

TEST_CASE("neighbor relation is symmetric") {
  for (Boundary b : {Boundary::VacantFrozen, Boundary::Periodic})
    for (Adjacency adj : {Adjacency::ZNearest, Adjacency::LStar}) {
      Box box = make_box2(-2, 3, -1, 2, b);
      Site out[8], back[8];
      for (int32_t i = 0; i < box.n_sites(); i++) {
        Site x = box.site(i);
        int n = neighbors(x, box, adj, out);
        CHECK(n <= (adj == Adjacency::LStar ? 8 : 4));
        for (int k = 0; k < n; k++) {
          int m = neighbors(out[k], box, adj, back);
          bool found = false;
          for (int j = 0; j < m; j++)
            if (back[j] == x) found = true;
          CHECK(found);
        }
      }
    }
}

TEST_CASE("site indexing round-trips") {
  Box box = make_box2(-3, 5, 2, 7);
  for (int32_t i = 0; i < box.n_sites(); i++) {
    Site s = box.site(i);
    CHECK(box.contains(s));
    CHECK(box.index(s) == i);
  }
  Box line = make_box1(-4, 9);
  CHECK(line.n_sites() == 14);
  CHECK(line.index({-4, 0}) == 0);
  CHECK(line.site(13) == Site{9, 0});
}

TEST_CASE("crossing rectangles use the floor convention") {
  auto q = make_rectangles(99, 0.5);
  CHECK(q[0].x0 == -42);
  CHECK(q[0].x1 == -24);
  CHECK(q[0].y0 == -99);
  CHECK(q[0].y1 == 99);
  CHECK(q[1].x0 == -99);
  CHECK(q[1].x1 == 99);
  CHECK(q[1].y0 == 24);
  CHECK(q[1].y1 == 42);
  // reflection symmetry
  CHECK(q[2].x0 == -q[0].x1);
  CHECK(q[2].x1 == -q[0].x0);
  CHECK(q[3].y0 == -q[1].y1);
  CHECK(q[3].y1 == -q[1].y0);
}

TEST_CASE("rectangles stay inside the ambient square") {
  for (int N : {9, 12, 50, 99})
    for (double eta : {0.1, 0.5, 0.9}) {
      auto q = make_rectangles(N, eta);
      for (const Rect& r : q) {
        CHECK(r.x0 <= r.x1);
        CHECK(r.y0 <= r.y1);
        CHECK(r.x0 >= -N);
        CHECK(r.x1 <= N);
        CHECK(r.y0 >= -N);
        CHECK(r.y1 <= N);
      }
    }
  CHECK_THROWS_AS(make_rectangles(7, 0.5), DomainError);
}

TEST_CASE("path embedding is a bijection and validates adjacency") {
  SitePath p{{{0, 0}, {0, 1}, {1, 1}}};
  auto e = embed_path(p);
  CHECK(e.length() == 2);
  CHECK(e.index_of({0, 1}) == 1);
  CHECK(e.site_of[2] == Site{1, 1});
  for (int i = 0; i <= e.length(); i++) CHECK(e.index_of(e.site_of[i]) == i);

  SitePath single{{{5, 5}}};
  CHECK(embed_path(single).length() == 0);

  SitePath skip{{{0, 0}, {2, 0}}};
  CHECK_THROWS_AS(embed_path(skip), DomainError);
  SitePath diag{{{0, 0}, {1, 1}}};
  CHECK_THROWS_AS(embed_path(diag), DomainError);
  CHECK(embed_path(diag, Adjacency::LStar).length() == 1);
  SitePath rep{{{0, 0}, {0, 1}, {0, 0}}};
  CHECK_THROWS_AS(embed_path(rep), DomainError);
}

TEST_SUITE_END();
