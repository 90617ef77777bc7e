#include "doctest.h"
#include "manin/catalog.hpp"
#include "manin/periods.hpp"
#include "manin/pipeline.hpp"

using namespace manin;

namespace {

constexpr long double kTol = 1e-9L;

MinimalModel model(const std::array<std::int64_t, 5>& a) { return minimal_model(WeierstrassModel::from_integers(a)); }

Catalog& catalog() {
  static Catalog cat = [] {
    CatalogConfig cfg = CatalogConfig::defaults();
    cfg.offline = true;
    return Catalog(cfg);
  }();
  return cat;
}

CurveRecord record(const std::string& label) { return CurveRecord::from_entry(catalog().fetch_curve(label)); }

// Complete elliptic integral of the first kind by Gauss-Legendre quadrature on a
// substituted integrand; independent of the AGM.
long double real_period_quadrature(long double e1, long double e2, long double e3) {
  // omega = 2 * int_{e1}^{inf} dx / sqrt(4 (x - e1)(x - e2)(x - e3)); substitute x = e1 + t^2 / (1 - t^2)... use
  // x = e1 + s^2, dx = 2 s ds, then s = tan(theta).
  const int n = 20000;
  long double sum = 0;
  const long double pi = std::acos(-1.0L);
  for (int k = 0; k < n; ++k) {
    const long double th = (k + 0.5L) * (pi / 2) / n;
    const long double s = std::tan(th), ds = 1 / (std::cos(th) * std::cos(th));
    const long double x = e1 + s * s;
    sum += 2 * s * ds / std::sqrt(4 * s * s * (x - e2) * (x - e3));
  }
  return 2 * sum * (pi / 2) / n;
}

}  // namespace

TEST_CASE("elliptic_period_lattice examples") {
  const auto l = elliptic_period_lattice(model({0, -1, 1, -10, -20}), kTol);
  CHECK(std::abs(l.omega1.real() - 1.26920930427955L) < 1e-10L);
  CHECK(l.omega1.imag() == 0);
  CHECK(!l.rectangular);

  const auto lem = elliptic_period_lattice(model({0, 0, 0, -1, 0}), kTol);
  CHECK(lem.rectangular);
  CHECK(std::abs(lem.omega2 / lem.omega1 - Complex(0, 1)) < 1e-12L);
  // Real roots -1, 0, 1.
  CHECK(std::abs(lem.omega1.real() - real_period_quadrature(1, 0, -1)) < 1e-6L);

  CHECK_THROWS_AS(elliptic_period_lattice(model({0, 0, 0, -1, 0}), 0), std::invalid_argument);
  CHECK_THROWS_AS(elliptic_period_lattice(model({0, 0, 0, -1, 0}), -1), std::invalid_argument);
}

TEST_CASE("lattice invariants reproduce c4/12 and c6/216") {
  for (const auto& e : catalog().fetch_range(120)) {
    std::array<std::int64_t, 5> a{};
    for (std::size_t i = 0; i < 5; ++i) a[i] = e.ainvs[i];
    const auto m = model(a);
    const auto l = elliptic_period_lattice(m, kTol);
    const auto [g2, g3] = lattice_invariants(l);
    const long double c4 = m.c4.get_d(), c6 = m.c6.get_d();
    INFO(e.label);
    CHECK(std::abs(g2 - Complex(c4 / 12)) <= 10 * kTol * std::max(1.0L, std::abs(c4 / 12)));
    CHECK(std::abs(g3 - Complex(c6 / 216)) <= 10 * kTol * std::max(1.0L, std::abs(c6 / 216)));
  }
}

TEST_CASE("normalize_lattice is invariant under change of basis") {
  const auto l = elliptic_period_lattice(model({0, 0, 1, -1, 0}), kTol);
  const std::vector<std::array<int, 4>> us{{1, 0, 0, 1}, {1, 1, 0, 1}, {2, 1, 1, 1}, {0, -1, 1, 0}, {3, 5, 1, 2}};
  for (const auto& [a, b, c, d] : us) {
    const auto n = normalize_lattice(Complex(a) * l.omega1 + Complex(b) * l.omega2,
                                     Complex(c) * l.omega1 + Complex(d) * l.omega2, kTol);
    CHECK(std::abs(n.omega1 - l.omega1) < 1e-12L);
    CHECK(std::abs(n.omega2 - l.omega2) < 1e-12L);
    CHECK(n.rectangular == l.rectangular);
    const auto c1 = manin_constant_numeric(l, n, kTol);
    CHECK(c1.value == 1);
  }
}

TEST_CASE("newform periods converge and honour the term cap") {
  const auto s = build_space(37);
  for (const auto& f : rational_eigenspaces(*s)) {
    const auto e = eigen_data(*s, f);
    const auto base = newform_period_lattice(*s, f, e, kTol);
    const auto doubled = newform_period_lattice(*s, f, e, kTol, 2.0);
    CHECK(doubled.terms > base.terms);
    CHECK(std::abs(base.lattice.omega1 - doubled.lattice.omega1) < kTol);
    CHECK(std::abs(base.lattice.omega2 - doubled.lattice.omega2) < kTol);
    CHECK_THROWS_AS(newform_period_lattice(*s, f, e, kTol, 1.0, 50), PrecisionError);
  }
}

TEST_CASE("numeric Manin constant") {
  for (const auto& label : {"11.a2", "37.a1", "37.b2", "14.a6", "54.a3", "54.b3", "43.a1"}) {
    const auto n = numeric_manin(record(label), kTol);
    INFO(label);
    CHECK(n.constant.value == 1);
    CHECK(std::abs(n.constant.ratio - 1) < 1e-7L);
    CHECK(n.form.lattice.rectangular == n.curve.rectangular);
  }
  // A non-optimal curve in the class of 11a is not a homothetic image with integral factor.
  CHECK_THROWS_AS(numeric_manin(record("11.a3"), kTol), InconsistencyError);
  CHECK_THROWS_AS(numeric_manin(record("14.a1"), kTol), InconsistencyError);
  CHECK_THROWS_AS(numeric_manin(record("11.a2"), 0), std::invalid_argument);
}
