#include "doctest.h"
#include "manin/integer.hpp"
#include "manin/p1.hpp"

#include <set>

using namespace manin;

TEST_CASE("P1 sizes match the index of Gamma0(N)") {
  for (std::int64_t n : {1, 2, 11, 12, 37, 64, 100, 210}) {
    P1List p1(n);
    CHECK(static_cast<std::int64_t>(p1.size()) == gamma0_index(n));
    for (std::size_t i = 0; i < p1.size(); ++i) {
      const auto g = p1.lift(i);
      CHECK(g.det() == 1);
      CHECK(p1.index(g.c, g.d) == static_cast<std::int64_t>(i));
    }
  }
}

TEST_CASE("cusp equivalence counts") {
  for (std::int64_t n = 1; n <= 60; ++n) {
    std::vector<Cusp> reps;
    for (std::int64_t q = 0; q <= n; ++q)
      for (std::int64_t p = 0; p <= n; ++p) {
        if (gcd64(p, q) != 1) continue;
        const auto c = Cusp::make(p, q);
        bool found = false;
        for (const auto& r : reps) found = found || cusps_equivalent(c, r, n);
        if (!found) reps.push_back(c);
      }
    CHECK(static_cast<int>(reps.size()) == cusp_count_x0(n));
  }
}

TEST_CASE("Heilbronn sets have the right determinant") {
  for (std::int64_t p : {2, 3, 5, 7, 13}) {
    for (const auto& h : heilbronn_cremona(p)) CHECK(h.det() == p);
  }
  for (std::int64_t n : {1, 4, 6, 9}) {
    auto hs = heilbronn_merel(n);
    for (const auto& h : hs) CHECK(h.det() == n);
  }
  CHECK(heilbronn_merel(1).size() == 1);
}
