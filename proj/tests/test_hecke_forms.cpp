#include "doctest.h"
#include "lattice_properties.hpp"
#include "manin/hecke_forms.hpp"
#include "manin/invariants.hpp"

using namespace manin;

namespace {

// Coefficients of q prod (1 - q^n)^2 (1 - q^{11n})^2, the newform of level 11.
std::vector<std::int64_t> eta_11(int terms) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(terms), 0);
  c[0] = 1;
  auto mul = [&](int step) {
    for (int k = terms - 1; k >= step; --k) c[static_cast<std::size_t>(k)] -= c[static_cast<std::size_t>(k - step)];
  };
  for (int n = 1; n < terms; ++n) {
    mul(n);
    mul(n);
    if (11 * n < terms) {
      mul(11 * n);
      mul(11 * n);
    }
  }
  std::vector<std::int64_t> a(static_cast<std::size_t>(terms) + 1, 0);
  for (int k = 0; k < terms; ++k) a[static_cast<std::size_t>(k) + 1] = c[static_cast<std::size_t>(k)];
  return a;
}

// #E(F_p) by brute force on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
std::int64_t ap_brute(const std::array<std::int64_t, 5>& a, std::int64_t p) {
  std::int64_t count = 1;
  for (std::int64_t x = 0; x < p; ++x)
    for (std::int64_t y = 0; y < p; ++y) {
      const std::int64_t lhs = y * y + a[0] * x * y + a[2] * y;
      const std::int64_t rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
      if (((lhs - rhs) % p + p) % p == 0) ++count;
    }
  return p + 1 - count;
}

RationalNewform only_form(std::int64_t n, std::int64_t ap_bound = 0) {
  const auto s = build_space(n);
  auto fs = rational_eigenspaces(*s);
  REQUIRE(fs.size() == 1);
  if (ap_bound) extend_ap(*s, eigen_data(*s, fs[0]), fs[0], ap_bound);
  return fs[0];
}

}  // namespace

TEST_CASE("sturm_bound examples") {
  CHECK(sturm_bound(11) == 2);
  CHECK(sturm_bound(1) == 1);
  CHECK(sturm_bound(130) == 42);
}

TEST_CASE("extend_an against the eta product at level 11") {
  const auto f = only_form(11, 200);
  const auto eta = eta_11(200);
  CHECK(extend_an(f, 4) == 2);
  CHECK(extend_an(f, 6) == 2);
  for (std::int64_t n = 1; n <= 200; ++n) REQUIRE(extend_an(f, n) == eta[static_cast<std::size_t>(n)]);
  const auto list = an_list(f, 50);
  CHECK(list[0] == 0);
  for (std::int64_t n = 1; n <= 50; ++n) CHECK(list[static_cast<std::size_t>(n)] == eta[static_cast<std::size_t>(n)]);
  RationalNewform bare;
  bare.level = 11;
  CHECK_THROWS_AS(extend_an(bare, 3), std::out_of_range);
}

TEST_CASE("a_p from modular symbols matches point counts") {
  const std::vector<std::pair<std::int64_t, std::array<std::int64_t, 5>>> curves{
      {11, {0, -1, 1, -10, -20}}, {37, {0, 0, 1, -1, 0}}, {43, {0, 1, 1, 0, 0}}, {53, {1, -1, 1, 0, 0}}};
  for (const auto& [n, a] : curves) {
    const auto s = build_space(n);
    bool matched = false;
    for (auto f : rational_eigenspaces(*s)) {
      const auto e = eigen_data(*s, f);
      extend_ap(*s, e, f, 60);
      bool ok = true;
      for (std::int64_t p : primes_up_to(60))
        if (n % p != 0 && f.ap.at(p) != ap_brute(a, p)) ok = false;
      matched = matched || ok;
    }
    CHECK(matched);
  }
}

TEST_CASE("Hasse bound on computed a_p") {
  for (std::int64_t n : {11, 37, 58, 77, 79, 89}) {
    const auto s = build_space(n);
    for (auto f : rational_eigenspaces(*s)) {
      extend_ap(*s, eigen_data(*s, f), f, 100);
      for (const auto& [p, a] : f.ap)
        if (n % p != 0) CHECK(static_cast<double>(a * a) <= 4.0 * static_cast<double>(p));
    }
  }
}

TEST_CASE("integral_cusp_basis examples") {
  const auto b11 = integral_cusp_basis(11, 10);
  REQUIRE(b11.coeff_matrix.rows() == 1);
  const auto eta = eta_11(20);
  IntRow expect(10);
  for (int i = 0; i < 10; ++i) expect(i) = eta[static_cast<std::size_t>(i) + 1];
  CHECK((b11.coeff_matrix.row(0) == expect || b11.coeff_matrix.row(0) == IntRow(-expect)));

  CHECK(integral_cusp_basis(1, 5).coeff_matrix.rows() == 0);

  // Level 22: spanned by f(q) and f(q^2) with f the level-11 form.
  const auto b22 = integral_cusp_basis(22, 20);
  REQUIRE(b22.coeff_matrix.rows() == 2);
  IntMatrix old(2, 20);
  const auto e40 = eta_11(40);
  for (int n = 1; n <= 20; ++n) {
    old(0, n - 1) = e40[static_cast<std::size_t>(n)];
    old(1, n - 1) = n % 2 == 0 ? e40[static_cast<std::size_t>(n / 2)] : 0;
  }
  CHECK(Lattice::from_generators(b22.coeff_matrix) == Lattice::from_generators(old));

  CHECK_THROWS_AS(integral_cusp_basis(130, 41), std::invalid_argument);
}

TEST_CASE("integral_cusp_basis is stable under extra precision") {
  for (std::int64_t n : {37, 44, 60}) {
    const std::int64_t b = sturm_bound(n) + 2;
    const auto short_b = integral_cusp_basis(n, b), long_b = integral_cusp_basis(n, b + 10);
    REQUIRE(short_b.coeff_matrix.rows() == long_b.coeff_matrix.rows());
    CHECK(Lattice::from_generators(short_b.coeff_matrix) ==
          Lattice::from_generators(IntMatrix(long_b.coeff_matrix.leftCols(b))));
  }
}

TEST_CASE("congruence number examples") {
  CHECK(congruence_number(11, only_form(11)) == 1);
  const auto f37 = rational_eigenspaces(*build_space(37));
  REQUIRE(f37.size() == 2);
  CHECK(congruence_number(37, f37[0]) == 2);
  CHECK(congruence_number(37, f37[1]) == 2);
  const auto s26 = build_space(26);
  for (const auto& f : rational_eigenspaces(*s26)) CHECK(congruence_number(*s26, f) == modular_degree(*s26, f).degree);
}

TEST_CASE("congruence number does not depend on the Z-basis") {
  std::mt19937_64 rng(7);
  for (std::int64_t n : {37, 54, 65}) {
    const auto s = build_space(n);
    const std::int64_t b = sturm_bound(n) + 4;
    auto basis = integral_cusp_basis(*s, b);
    for (auto f : rational_eigenspaces(*s)) {
      extend_ap(*s, eigen_data(*s, f), f, b);
      const IntRow fn = isotypic_functional(*s, f, b);
      const Integer r = congruence_number(basis, f, fn);
      for (int t = 0; t < 3; ++t) {
        IntegralCuspBasis other = basis;
        other.coeff_matrix = props::random_unimodular(rng, basis.coeff_matrix.rows()) * basis.coeff_matrix;
        CHECK(congruence_number(other, f, fn) == r);
      }
    }
  }
}

TEST_CASE("deg divides r_f") {
  for (std::int64_t n : {37, 43, 53, 57, 58, 65, 77, 91, 99}) {
    const auto s = build_space(n);
    for (const auto& f : rational_eigenspaces(*s)) {
      const Integer r = congruence_number(*s, f), d = modular_degree(*s, f).degree;
      CHECK(r % d == 0);
    }
  }
}

TEST_CASE("newforms are primitive in the integral basis") {
  for (std::int64_t n : {11, 37, 57, 79}) {
    const auto s = build_space(n);
    const std::int64_t b = sturm_bound(n) + 2;
    const auto basis = integral_cusp_basis(*s, b);
    const Lattice sat = saturate(Lattice::from_generators(basis.coeff_matrix));
    CHECK(sat == Lattice::from_generators(basis.coeff_matrix));
    for (auto f : rational_eigenspaces(*s)) {
      extend_ap(*s, eigen_data(*s, f), f, b);
      const auto an = an_list(f, b);
      IntMatrix row(1, b);
      for (std::int64_t i = 0; i < b; ++i) row(0, i) = an[static_cast<std::size_t>(i) + 1];
      CHECK(Lattice::from_generators(basis.coeff_matrix).contains(IntRow(row.row(0))));
      CHECK(saturate(Lattice::from_generators(row)) == Lattice::from_generators(row));
    }
  }
}
