#include "doctest.h"
#include "manin/catalog.hpp"
#include "manin/invariants.hpp"
#include "manin/pipeline.hpp"

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

bool stable(const Lattice& l, const IntMatrix& op) {
  return l.contains(Lattice::from_generators(IntMatrix(l.basis() * op), op.cols()));
}

}  // namespace

TEST_CASE("modular degree examples") {
  const auto s11 = build_space(11);
  CHECK(modular_degree(*s11, rational_eigenspaces(*s11)[0]).degree == 1);
  const auto s37 = build_space(37);
  const auto f37 = rational_eigenspaces(*s37);
  REQUIRE(f37.size() == 2);
  CHECK(modular_degree(*s37, f37[0]).degree == 2);
  CHECK(modular_degree(*s37, f37[1]).degree == 2);
}

TEST_CASE("computed degrees match ingested degrees of optimal curves, N <= 70") {
  for (const auto& e : catalog().fetch_range(70)) {
    if (!e.optimal || !e.modular_degree) continue;
    const auto a = analyze_curve(CurveRecord::from_entry(e), false);
    INFO(e.label);
    CHECK(a.degree.degree == *e.modular_degree);
    CHECK(a.degree.index_used == a.degree.degree * a.degree.degree);
  }
}

TEST_CASE("level 26: both classes against the reference degrees") {
  const auto s = build_space(26);
  const auto fs = rational_eigenspaces(*s);
  REQUIRE(fs.size() == 2);
  for (const auto& f : fs) {
    std::optional<Integer> ref;
    for (const auto& e : catalog().fetch_range(26))
      if (e.conductor == 26 && e.optimal && e.label.rfind(f.id(), 0) == 0) ref = e.modular_degree;
    REQUIRE(ref);
    CHECK(modular_degree(*s, f).degree == *ref);
  }
}

TEST_CASE("degree composite has Smith form diag(deg, deg)") {
  for (std::int64_t n : {11, 37, 43, 58, 65, 89, 92}) {
    const auto s = build_space(n);
    for (const auto& f : rational_eigenspaces(*s)) {
      const auto e = eigen_data(*s, f);
      const IntMatrix m = degree_composite(*s, f.eigenspace, e);
      const Integer d = modular_degree(*s, f, e).degree;
      REQUIRE(m.rows() == 2);
      REQUIRE(m.cols() == 2);
      const auto ed = elementary_divisors(m);
      REQUIRE(ed.size() == 2);
      CHECK(ed[0] == d);
      CHECK(ed[1] == d);
      CHECK(abs(determinant(m)) == d * d);
    }
  }
}

TEST_CASE("index equals the quotient order of L_f + L_perp") {
  for (std::int64_t n : {37, 53, 57, 61}) {
    const auto s = build_space(n);
    for (const auto& f : rational_eigenspaces(*s)) {
      const auto e = eigen_data(*s, f);
      const Lattice perp = hecke_complement(*s, e);
      const Lattice sum = lattice_sum(f.eigenspace, perp);
      CHECK(quotient_order(Lattice::standard(s->cuspidal_rank()), sum).value == modular_degree(*s, f, e).index_used);
    }
  }
}

TEST_CASE("eigenspace and complement are stable under Hecke and Atkin-Lehner") {
  for (std::int64_t n : {37, 57, 58, 77}) {
    const auto s = build_space(n);
    std::vector<IntMatrix> ops;
    for (std::int64_t p : {2, 3, 5, 7}) ops.push_back(hecke_operator(*s, p).matrix);
    for (const auto& [p, k] : factor(n)) {
      std::int64_t q = 1;
      for (int i = 0; i < k; ++i) q *= p;
      ops.push_back(atkin_lehner(*s, q));
    }
    ops.push_back(star_involution(*s));
    for (const auto& f : rational_eigenspaces(*s)) {
      const Lattice perp = hecke_complement(*s, eigen_data(*s, f));
      for (const auto& op : ops) {
        CHECK(stable(f.eigenspace, op));
        CHECK(stable(perp, op));
      }
    }
  }
}

TEST_CASE("degree-congruence gap") {
  DegreeResult d;
  d.degree = 4;
  const auto g = degree_congruence_gap(d, 24);
  CHECK(g.gap == 1);
  CHECK(g.ratio == 6);
  CHECK(degree_congruence_gap(d, 4).gap == 0);
  CHECK_THROWS_AS(degree_congruence_gap(d, 6), DivisibilityViolation);

  auto gap_at = [](std::int64_t n) {
    std::vector<int> out;
    for (const auto& fa : analyze_level(n, true).forms) out.push_back(fa.gap->gap);
    return out;
  };
  for (std::int64_t n : {11, 37, 43, 53, 57, 65, 99})
    for (int g2 : gap_at(n)) CHECK(g2 == 0);
  for (std::int64_t n : {64, 72, 80}) {
    const auto forms = analyze_level(n, true).forms;
    REQUIRE(!forms.empty());
    CHECK(forms[0].form.letter() == "a");
    CHECK(forms[0].gap->gap > 0);
  }
}
