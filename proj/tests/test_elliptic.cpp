#include "doctest.h"
#include "manin/catalog.hpp"
#include "manin/elliptic.hpp"
#include "manin/modsym.hpp"

#include <random>

using namespace manin;

namespace {

Catalog& catalog() {
  static Catalog cat = [] {
    CatalogConfig cfg = CatalogConfig::defaults();
    cfg.offline = true;
    return Catalog(cfg);
  }();
  return cat;
}

std::array<std::int64_t, 5> ainvs_of(const CatalogEntry& e) {
  std::array<std::int64_t, 5> a{};
  for (std::size_t i = 0; i < 5; ++i) a[i] = e.ainvs[i];
  return a;
}

// Model obtained by x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
WeierstrassModel transform(const WeierstrassModel& w, const Rational& u, const Rational& r, const Rational& s,
                           const Rational& t) {
  const auto& [a1, a2, a3, a4, a6] = w.a;
  WeierstrassModel o;
  const Rational u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u4 * u2;
  o.a[0] = (a1 + 2 * s) / u;
  o.a[1] = (a2 - s * a1 + 3 * r - s * s) / u2;
  o.a[2] = (a3 + r * a1 + 2 * t) / u3;
  o.a[3] = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u4;
  o.a[4] = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / u6;
  return o;
}

std::int64_t ap_brute(const MinimalModel& m, std::int64_t p) {
  std::array<std::int64_t, 5> a{};
  for (std::size_t i = 0; i < 5; ++i) {
    Integer r = m.a[i] % p;
    if (r < 0) r += p;
    a[i] = r.get_si();
  }
  std::int64_t count = 1;
  for (std::int64_t x = 0; x < p; ++x)
    for (std::int64_t y = 0; y < p; ++y)
      if ((y * y + a[0] * x * y + a[2] * y - x * x * x - a[1] * x * x - a[3] * x - a[4]) % p == 0) ++count;
  return p + 1 - count;
}

}  // namespace

TEST_CASE("minimal_model examples") {
  const auto w = WeierstrassModel::from_integers({0, -1, 1, -10, -20});
  const auto m = minimal_model(w);
  CHECK(m.delta == -161051);
  CHECK(m.ainvs_string() == "[0,-1,1,-10,-20]");
  // u = 2 scaling: a_i -> 2^i a_i.
  const auto scaled = WeierstrassModel::from_integers({0, -4, 8, -160, -1280});
  CHECK(minimal_model(scaled).ainvs_string() == "[0,-1,1,-10,-20]");
  CHECK(minimal_model(scaled).delta == -161051);
  CHECK_THROWS_AS(minimal_model(WeierstrassModel::from_integers({0, 0, 0, 0, 0})), SingularCurve);
  CHECK_THROWS_AS(minimal_model(WeierstrassModel::from_integers({0, 0, 0, -3, 2})), SingularCurve);
}

TEST_CASE("fixture curves are fixed points and survive changes of variables") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> small(-4, 4), uexp(0, 2);
  const auto entries = catalog().fetch_range(600);
  REQUIRE(entries.size() > 100);
  for (std::size_t i = 0; i < entries.size(); i += entries.size() / 100) {
    const auto& e = entries[i];
    const auto w = WeierstrassModel::from_integers(ainvs_of(e));
    const auto m = minimal_model(w);
    INFO(e.label);
    CHECK(m.a[0] == e.ainvs[0]);
    CHECK(m.a[1] == e.ainvs[1]);
    CHECK(m.a[2] == e.ainvs[2]);
    CHECK(m.a[3] == e.ainvs[3]);
    CHECK(m.a[4] == e.ainvs[4]);
    CHECK(m.c4 * m.c4 * m.c4 - m.c6 * m.c6 == 1728 * m.delta);
    CHECK(minimal_model(WeierstrassModel{{Rational(m.a[0]), Rational(m.a[1]), Rational(m.a[2]), Rational(m.a[3]),
                                          Rational(m.a[4])}})
              .ainvs_string() == m.ainvs_string());
    const Rational u = Rational(1, 1 << uexp(rng)) * (uexp(rng) ? 3 : 1);
    const auto moved = transform(w, u, small(rng), small(rng), small(rng));
    CHECK(minimal_model(moved).ainvs_string() == m.ainvs_string());
    CHECK(minimal_model(moved).delta == m.delta);
  }
}

TEST_CASE("two_torsion_rank") {
  CHECK(two_torsion_rank(minimal_model(WeierstrassModel::from_integers({0, 0, 0, -1, 0}))) == 2);
  CHECK(two_torsion_rank(minimal_model(WeierstrassModel::from_integers({0, -1, 1, -10, -20}))) == 0);
  const auto e530 = catalog().fetch_curve("530.a1");
  CHECK(two_torsion_rank(minimal_model(WeierstrassModel::from_integers(ainvs_of(e530)))) == 0);
  for (const auto& e : catalog().fetch_range(600)) {
    const int r = two_torsion_rank(minimal_model(WeierstrassModel::from_integers(ainvs_of(e))));
    INFO(e.label);
    CHECK((r > 0) == (e.torsion_order % 2 == 0));
    if (r == 2) CHECK(e.torsion_order % 4 == 0);
  }
}

TEST_CASE("integer_roots_monic_cubic") {
  using V = std::vector<Integer>;
  CHECK(integer_roots_monic_cubic(0, -1, 0) == V{-1, 0, 1});          // x^3 - x
  CHECK(integer_roots_monic_cubic(-6, 11, -6) == V{1, 2, 3});
  CHECK(integer_roots_monic_cubic(0, 0, 1) == V{-1});                 // x^3 + 1
  CHECK(integer_roots_monic_cubic(0, 0, 2).empty());
  CHECK(integer_roots_monic_cubic(-2000, 0, 0) == V{0, 2000});        // double root at 0
}

TEST_CASE("ap_via_counting against brute force, and the Hasse bound") {
  const auto m11 = minimal_model(WeierstrassModel::from_integers({0, -1, 1, -10, -20}));
  CHECK(ap_via_counting(m11, 2) == -2);
  CHECK(ap_via_counting(m11, 3) == -1);
  CHECK(ap_via_counting(m11, 5) == 1);
  CHECK_THROWS_AS(ap_via_counting(m11, 11), std::invalid_argument);
  CHECK_THROWS_AS(ap_via_counting(m11, 9), std::invalid_argument);
  for (const auto& label : {"37.a1", "43.a1", "389.a1", "530.a1", "54.a1"}) {
    const auto m = minimal_model(WeierstrassModel::from_integers(ainvs_of(catalog().fetch_curve(label))));
    for (std::int64_t p : primes_up_to(200)) {
      if (m.delta % p == 0) continue;
      const auto a = ap_via_counting(m, p);
      CHECK(a == ap_brute(m, p));
      CHECK(static_cast<double>(a * a) <= 4.0 * static_cast<double>(p));
    }
  }
}

TEST_CASE("match_curve_to_newform") {
  const auto m = minimal_model(WeierstrassModel::from_integers({0, 0, 1, -1, 0}));
  const auto forms = rational_eigenspaces(*build_space(37));
  const auto f = match_curve_to_newform(m, 37, forms);
  CHECK(f.ap.at(2) == -2);
  CHECK_THROWS_AS(match_curve_to_newform(m, 11, forms), std::invalid_argument);
  const auto m11 = minimal_model(WeierstrassModel::from_integers({0, -1, 1, -10, -20}));
  CHECK_THROWS(match_curve_to_newform(m11, 37, forms));
}
