#include "manin/hecke_forms.hpp"

#include <stdexcept>

namespace manin {

std::int64_t sturm_bound(std::int64_t level) { return (gamma0_index(level) + 5) / 6; }

Integer extend_an(const RationalNewform& f, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("extend_an: n must be positive");
  Integer out = 1;
  for (auto [p, e] : factor(n)) {
    const Integer ap = f.ap.at(p);
    Integer prev = 1, cur = ap;  // a_{p^0}, a_{p^1}
    for (int r = 2; r <= e; ++r) {
      Integer next = f.level % p == 0 ? Integer(cur * ap) : Integer(ap * cur - p * prev);
      prev = cur;
      cur = next;
    }
    out *= cur;
  }
  return out;
}

std::vector<Integer> an_list(const RationalNewform& f, std::int64_t n) {
  std::vector<Integer> a(static_cast<std::size_t>(n + 1), Integer(0));
  if (n >= 1) a[1] = 1;
  // Smallest prime factor sieve, then a_n = a_{p^e} a_{n/p^e}.
  std::vector<std::int64_t> spf(static_cast<std::size_t>(n + 1), 0);
  for (std::int64_t i = 2; i <= n; ++i)
    if (spf[static_cast<std::size_t>(i)] == 0)
      for (std::int64_t j = i; j <= n; j += i)
        if (spf[static_cast<std::size_t>(j)] == 0) spf[static_cast<std::size_t>(j)] = i;
  for (std::int64_t m = 2; m <= n; ++m) {
    const std::int64_t p = spf[static_cast<std::size_t>(m)];
    std::int64_t q = m / p, pe = p;
    while (q % p == 0) {
      q /= p;
      pe *= p;
    }
    if (q > 1) {
      a[static_cast<std::size_t>(m)] = a[static_cast<std::size_t>(pe)] * a[static_cast<std::size_t>(q)];
    } else if (pe == p) {
      a[static_cast<std::size_t>(m)] = f.ap.at(p);
    } else {
      const Integer& ap = a[static_cast<std::size_t>(p)];
      a[static_cast<std::size_t>(m)] = f.level % p == 0
                                           ? Integer(ap * a[static_cast<std::size_t>(m / p)])
                                           : Integer(ap * a[static_cast<std::size_t>(m / p)] - p * a[static_cast<std::size_t>(m / p / p)]);
    }
  }
  return a;
}

namespace {

// Columns x with (op - a) x = 0, restricted to the span of the columns of basis^T.
IntMatrix restrict_right_kernel(const IntMatrix& basis, const IntMatrix& op, std::int64_t a) {
  IntMatrix shifted = op;
  for (Eigen::Index i = 0; i < shifted.rows(); ++i) shifted(i, i) -= a;
  const IntMatrix y = right_kernel(IntMatrix(shifted * basis.transpose()));
  return y * basis;
}

}  // namespace

EigenData eigen_data(const ModSymSpace& s, const RationalNewform& f) {
  const Eigen::Index k = s.ambient_rank();
  IntMatrix basis = IntMatrix::Identity(k, k);
  // Good primes first: they separate f from the Eisenstein part.
  std::vector<std::int64_t> order;
  for (const auto& [p, a] : f.ap)
    if (s.level() % p != 0) order.push_back(p);
  for (const auto& [p, a] : f.ap)
    if (s.level() % p == 0) order.push_back(p);
  for (std::int64_t p : order) {
    if (basis.rows() <= 2) break;
    basis = restrict_right_kernel(basis, s.hecke_ambient(p), f.ap.at(p));
  }
  if (basis.rows() != 2) throw std::logic_error("eigen_data: f-eigen dual is not two-dimensional");
  EigenData out;
  out.functionals = basis.transpose();

  const IntMatrix plus = restrict_right_kernel(basis, s.star_ambient(), 1);
  if (plus.rows() != 1) throw std::logic_error("eigen_data: star-plus eigen-functional is not unique");
  const std::size_t mu = s.p1().size();
  out.plus_value.assign(mu, Integer(0));
  bool found = false;
  for (std::size_t i = 0; i < mu; ++i) {
    const auto& x = s.symbol_coordinates(i);
    Integer v = 0;
    for (Eigen::Index j = 0; j < k; ++j)
      if (x[static_cast<std::size_t>(j)] != 0) v += plus(0, j) * x[static_cast<std::size_t>(j)];
    out.plus_value[i] = v;
    if (!found && v != 0) {
      out.base_symbol = i;
      found = true;
    }
  }
  if (!found) throw std::logic_error("eigen_data: eigen-functional vanishes on all symbols");
  return out;
}

std::int64_t newform_ap(const ModSymSpace& s, const EigenData& e, std::int64_t p) {
  const auto family = (s.level() % p != 0) ? heilbronn_cremona(p) : heilbronn_merel(p);
  const auto [c, d] = s.p1()[e.base_symbol];
  Integer sum = 0;
  for (const auto& h : family) {
    const std::int64_t j = s.p1().index(c * h.a + d * h.c, c * h.b + d * h.d);
    if (j >= 0) sum += e.plus_value[static_cast<std::size_t>(j)];
  }
  const Integer& base = e.plus_value[e.base_symbol];
  if (!mpz_divisible_p(sum.get_mpz_t(), base.get_mpz_t()))
    throw std::logic_error("newform_ap: non-integral eigenvalue at p = " + std::to_string(p));
  return to_int64(Integer(sum / base));
}

void extend_ap(const ModSymSpace& s, const EigenData& e, RationalNewform& f, std::int64_t bound) {
  for (std::int64_t p : primes_up_to(bound))
    if (!f.ap.count(p)) f.ap[p] = newform_ap(s, e, p);
}

Lattice hecke_complement(const ModSymSpace& s, const EigenData& e) {
  const IntMatrix restricted = s.cuspidal_lattice().basis() * e.functionals;
  return Lattice::from_generators(left_kernel(restricted), s.cuspidal_rank());
}

namespace {

// The Hecke algebra T inside End(L), represented faithfully by t -> (v_1 t, ..., v_m t).
struct HeckeAlgebra {
  IntMatrix gens;                  // m x k, vectors v_i in ambient coordinates
  std::vector<IntMatrix> images;   // images[n] = gens * T_n, n = 1..B
  IntMatrix basis;                 // HNF basis of T, flattened images
  IntMatrix coords;                // B x g: T_n in the basis
};

IntRow flatten(const IntMatrix& m) {
  IntRow out(m.size());
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(at++) = m(i, j);
  return out;
}

std::vector<IntMatrix> hecke_images(const ModSymSpace& s, const IntMatrix& gens, std::int64_t bound) {
  std::map<std::int64_t, IntMatrix> tp;
  for (std::int64_t p : primes_up_to(bound)) tp[p] = s.hecke_ambient(p);
  std::vector<IntMatrix> w(static_cast<std::size_t>(bound + 1));
  if (bound >= 1) w[1] = gens;
  for (std::int64_t n = 2; n <= bound; ++n) {
    const std::int64_t p = factor(n).back().first;
    const std::int64_t m = n / p;
    IntMatrix next = w[static_cast<std::size_t>(m)] * tp.at(p);
    if (m % p == 0 && s.level() % p != 0) next -= Integer(p) * w[static_cast<std::size_t>(m / p)];
    w[static_cast<std::size_t>(n)] = std::move(next);
  }
  return w;
}

HeckeAlgebra hecke_algebra(const ModSymSpace& s, std::int64_t bound) {
  const int g = s.genus();
  const IntMatrix& lb = s.cuspidal_lattice().basis();
  HeckeAlgebra out;
  // Deterministic "generic" vectors: fixed integer combinations of the L basis.
  for (Eigen::Index m = 1; m <= lb.rows(); ++m) {
    IntMatrix gens(m, lb.cols());
    for (Eigen::Index i = 0; i < m; ++i) {
      IntRow v = IntRow::Zero(lb.cols());
      for (Eigen::Index j = 0; j < lb.rows(); ++j) v += Integer((j * 7 + i * 13) % 11 + 1 + (i == j ? 5 : 0)) * lb.row(j);
      gens.row(i) = v;
    }
    out.gens = gens;
    out.images = hecke_images(s, gens, bound);
    IntMatrix flat(bound, gens.size());
    for (std::int64_t n = 1; n <= bound; ++n) flat.row(n - 1) = flatten(out.images[static_cast<std::size_t>(n)]);
    out.basis = hnf(flat);
    if (out.basis.rows() == g) {
      out.coords = IntMatrix(bound, g);
      for (std::int64_t n = 1; n <= bound; ++n) out.coords.row(n - 1) = *solve_in_hnf(out.basis, flat.row(n - 1));
      return out;
    }
    if (out.basis.rows() > g) throw std::logic_error("hecke_algebra: rank exceeds genus");
  }
  throw std::logic_error("hecke_algebra: no faithful representation found");
}

}  // namespace

IntegralCuspBasis integral_cusp_basis(const ModSymSpace& s, std::int64_t precision) {
  if (precision < sturm_bound(s.level())) throw std::invalid_argument("integral_cusp_basis: precision below the Sturm bound");
  IntegralCuspBasis out;
  out.level = s.level();
  out.precision = precision;
  if (s.genus() == 0) {
    out.coeff_matrix = IntMatrix(0, precision);
    return out;
  }
  const HeckeAlgebra t = hecke_algebra(s, precision);
  out.coeff_matrix = t.coords.transpose();
  return out;
}

IntegralCuspBasis integral_cusp_basis(std::int64_t level, std::int64_t precision) {
  return integral_cusp_basis(*build_space(level), precision);
}

IntRow isotypic_functional(const ModSymSpace& s, const RationalNewform& f, std::int64_t precision) {
  const HeckeAlgebra t = hecke_algebra(s, precision);
  const Eigen::Index g = t.basis.rows();
  const Eigen::Index m = t.gens.rows(), k = t.gens.cols();
  // y with y * M_p = a_p * y for the multiplication matrices M_p in the basis of T.
  IntMatrix y = IntMatrix::Identity(g, g);
  std::vector<std::int64_t> order;
  for (const auto& [p, a] : f.ap)
    if (s.level() % p != 0) order.push_back(p);
  for (const auto& [p, a] : f.ap)
    if (s.level() % p == 0) order.push_back(p);
  for (std::int64_t p : order) {
    if (y.rows() <= 1) break;
    const IntMatrix tp = s.hecke_ambient(p);
    IntMatrix mp(g, g);
    for (Eigen::Index j = 0; j < g; ++j) {
      IntMatrix block(m, k);
      for (Eigen::Index i = 0; i < m; ++i) block.row(i) = t.basis.block(j, i * k, 1, k);
      mp.row(j) = *solve_in_hnf(t.basis, flatten(IntMatrix(block * tp)));
    }
    for (Eigen::Index i = 0; i < g; ++i) mp(i, i) -= f.ap.at(p);
    y = IntMatrix(left_kernel(IntMatrix(y * mp)) * y);
  }
  if (y.rows() != 1) throw std::logic_error("isotypic_functional: f-eigenspace in T is not one-dimensional");
  // Express y on q-expansion coefficients: y = e * coords, with coords spanning Z^g.
  const HnfTransform ht = hnf_with_transform(t.coords);
  const auto z = solve_in_hnf(IntMatrix(ht.h.topRows(ht.rank)), IntRow(y.row(0)));
  if (!z) throw std::logic_error("isotypic_functional: Hecke operators do not span T");
  return *z * ht.u.topRows(ht.rank);
}

Integer congruence_number(const IntegralCuspBasis& basis, const RationalNewform& f, const IntRow& functional) {
  const IntMatrix& c = basis.coeff_matrix;
  const Eigen::Index g = c.rows(), b = c.cols();
  if (functional.size() > b) throw std::invalid_argument("congruence_number: functional longer than precision");
  IntRow a(b);
  for (Eigen::Index n = 1; n <= b; ++n) a(n - 1) = extend_an(f, n);
  const HnfTransform ht = hnf_with_transform(c);
  const auto y = solve_in_hnf(IntMatrix(ht.h.topRows(ht.rank)), a);
  if (!y) throw std::logic_error("congruence_number: newform is not in the integral span");
  IntRow phi = *y * ht.u.topRows(ht.rank);
  Integer content = 0;
  for (Eigen::Index j = 0; j < g; ++j) content = gcd(content, phi(j));
  phi /= content;

  const IntMatrix psi = c.leftCols(functional.size()) * functional.transpose();
  const Lattice complement = Lattice::from_generators(left_kernel(psi), g);
  const Lattice line = Lattice::from_generators(IntMatrix(phi), g);
  const QuotientOrder q = quotient_order(Lattice::standard(g), lattice_sum(line, complement));
  if (q.infinite()) throw std::logic_error("congruence_number: f and its complement do not span");
  return *q.value;
}

Integer congruence_number(const ModSymSpace& s, const RationalNewform& f) {
  const std::int64_t b = sturm_bound(s.level()) + 10;
  RationalNewform full = f;
  if (full.ap.empty() || full.ap.rbegin()->first < primes_up_to(b).back()) extend_ap(s, eigen_data(s, f), full, b);
  return congruence_number(integral_cusp_basis(s, b), full, isotypic_functional(s, full, b));
}

Integer congruence_number(std::int64_t level, const RationalNewform& f) { return congruence_number(*build_space(level), f); }

}  // namespace manin
