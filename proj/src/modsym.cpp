#include "manin/modsym.hpp"

#include "manin/hecke_forms.hpp"
#include "manin/newform.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>

namespace manin {

namespace {

using SparseRow = std::vector<std::pair<int, Rational>>;

const Rational* find_entry(const SparseRow& r, int col) {
  auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, int c) { return e.first < c; });
  return (it != r.end() && it->first == col) ? &it->second : nullptr;
}

// a - q * b
SparseRow sub_multiple(const SparseRow& a, const Rational& q, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -q * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second - q * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

// Reduced row echelon form over Q of sparse rows.
class SparseRref {
 public:
  void add(SparseRow r) {
    std::vector<std::pair<std::size_t, Rational>> hits;
    for (const auto& [col, val] : r) {
      auto it = pivot_row_.find(col);
      if (it != pivot_row_.end()) hits.emplace_back(it->second, val);
    }
    for (const auto& [row, val] : hits) r = sub_multiple(r, val, rows_[row]);
    if (r.empty()) return;
    const int pc = r.front().first;
    const Rational inv = 1 / r.front().second;
    for (auto& e : r) e.second *= inv;
    for (auto& other : rows_) {
      if (const Rational* v = find_entry(other, pc)) {
        const Rational q = *v;
        other = sub_multiple(other, q, r);
      }
    }
    pivot_row_[pc] = rows_.size();
    rows_.push_back(std::move(r));
  }

  bool is_pivot(int col) const { return pivot_row_.count(col) != 0; }
  const SparseRow& row_for(int col) const { return rows_[pivot_row_.at(col)]; }

 private:
  std::vector<SparseRow> rows_;
  std::map<int, std::size_t> pivot_row_;
};

IntMatrix exact_divide(const IntMatrix& m, const Integer& d) {
  if (d == 1) return m;
  IntMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!mpz_divisible_p(m(i, j).get_mpz_t(), d.get_mpz_t()))
        throw std::logic_error("modsym: ambient operator is not integral");
      mpz_divexact(out(i, j).get_mpz_t(), m(i, j).get_mpz_t(), d.get_mpz_t());
    }
  return out;
}

IntMatrix sparse_product(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

}  // namespace

ModSymSpace::ModSymSpace(std::int64_t level) : level_(level), genus_(genus_x0(level)), p1_(level) {
  const std::size_t mu = p1_.size();
  auto s_image = [&](std::size_t i) {
    const auto [c, d] = p1_[i];
    return static_cast<std::size_t>(p1_.index(d, -c));
  };
  auto u_image = [&](std::size_t i) {
    const auto [c, d] = p1_[i];
    return static_cast<std::size_t>(p1_.index(d, -c - d));
  };

  // Two-term relations: pair i with iS.
  std::vector<std::size_t> rep(mu);
  std::vector<int> sign(mu, 0);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < mu; ++i) {
    const std::size_t j = s_image(i);
    if (j == i) continue;  // x = -x
    if (i < j) {
      rep[i] = rep[j] = reps.size();
      sign[i] = 1;
      sign[j] = -1;
      reps.push_back(i);
    }
  }

  // Three-term relations on the representatives.
  SparseRref rref;
  std::vector<bool> seen(mu, false);
  for (std::size_t i = 0; i < mu; ++i) {
    if (seen[i]) continue;
    const std::size_t j = u_image(i), k = u_image(j);
    seen[i] = seen[j] = seen[k] = true;
    std::map<int, Rational> acc;
    for (std::size_t x : {i, j, k}) {
      if (j == i && x != i) continue;  // fixed point: single term
      if (sign[x] != 0) acc[static_cast<int>(rep[x])] += sign[x];
    }
    SparseRow row;
    for (auto& [col, v] : acc)
      if (v != 0) row.emplace_back(col, v);
    if (!row.empty()) rref.add(std::move(row));
  }

  std::vector<int> free_index(reps.size(), -1);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (rref.is_pivot(static_cast<int>(r))) continue;
    free_index[r] = static_cast<int>(free_.size());
    free_.push_back(reps[r]);
  }
  const auto k = static_cast<Eigen::Index>(free_.size());

  // Rational image of each representative in free coordinates.
  std::vector<RatRow> rep_vec(reps.size(), RatRow::Zero(k));
  Integer denom = 1;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (free_index[r] >= 0) {
      rep_vec[r](free_index[r]) = 1;
      continue;
    }
    for (const auto& [col, val] : rref.row_for(static_cast<int>(r))) {
      if (col == static_cast<int>(r)) continue;
      rep_vec[r](free_index[static_cast<std::size_t>(col)]) = -val;
      mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), val.get_den_mpz_t());
    }
  }

  std::vector<IntRow> scaled(mu, IntRow::Zero(k));
  for (std::size_t i = 0; i < mu; ++i) {
    if (sign[i] == 0) continue;
    for (Eigen::Index j = 0; j < k; ++j) {
      const Rational& v = rep_vec[rep[i]](j);
      if (v == 0) continue;
      scaled[i](j) = Integer(v * denom) * sign[i];
    }
  }

  denom_ = denom;
  identity_basis_ = denom == 1;
  std::vector<IntRow> coord_rows;
  if (identity_basis_) {
    basis_ = IntMatrix::Identity(k, k);
    coord_rows = scaled;
  } else {
    IntMatrix gens(static_cast<Eigen::Index>(mu), k);
    for (std::size_t i = 0; i < mu; ++i) gens.row(static_cast<Eigen::Index>(i)) = scaled[i];
    basis_ = hnf(gens);
    coord_rows.resize(mu);
    for (std::size_t i = 0; i < mu; ++i) coord_rows[i] = *solve_in_hnf(basis_, scaled[i]);
  }
  coords_.assign(mu, std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < mu; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!coord_rows[i](j).fits_slong_p()) throw std::overflow_error("modsym: symbol coordinate too large");
      coords_[i][static_cast<std::size_t>(j)] = coord_rows[i](j).get_si();
    }

  // Boundary map.
  auto register_cusp = [&](const Cusp& c) {
    for (std::size_t i = 0; i < cusps_.size(); ++i)
      if (cusps_equivalent(c, cusps_[i], level_)) return i;
    cusps_.push_back(c);
    return cusps_.size() - 1;
  };
  std::vector<std::vector<std::pair<std::size_t, int>>> free_boundary(free_.size());
  for (std::size_t f = 0; f < free_.size(); ++f) {
    const Mat2 g = p1_.lift(free_[f]);
    free_boundary[f].emplace_back(register_cusp(Cusp::make(g.a, g.c)), 1);
    free_boundary[f].emplace_back(register_cusp(Cusp::make(g.b, g.d)), -1);
  }
  IntMatrix bfree = IntMatrix::Zero(k, static_cast<Eigen::Index>(cusps_.size()));
  for (std::size_t f = 0; f < free_.size(); ++f)
    for (auto [c, s] : free_boundary[f]) bfree(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(c)) += s;
  boundary_ = identity_basis_ ? bfree : exact_divide(sparse_product(basis_, bfree), denom_);

  cuspidal_ = Lattice::from_generators(left_kernel(boundary_), k);
  if (cuspidal_.rank() != 2 * genus_)
    throw std::logic_error("modsym: cuspidal rank " + std::to_string(cuspidal_.rank()) + " != 2 * genus at level " +
                           std::to_string(level));
}

std::size_t ModSymSpace::cusp_index(const Cusp& c) const {
  for (std::size_t i = 0; i < cusps_.size(); ++i)
    if (cusps_equivalent(c, cusps_[i], level_)) return i;
  throw std::logic_error("modsym: unknown cusp class");
}

IntMatrix ModSymSpace::presentation() const {
  const std::size_t mu = p1_.size();
  std::vector<std::vector<std::pair<std::size_t, int>>> rows;
  for (std::size_t i = 0; i < mu; ++i) {
    const auto [c, d] = p1_[i];
    const auto j = static_cast<std::size_t>(p1_.index(d, -c));
    if (i <= j) rows.push_back({{i, 1}, {j, 1}});
  }
  std::vector<bool> seen(mu, false);
  for (std::size_t i = 0; i < mu; ++i) {
    if (seen[i]) continue;
    const auto [c, d] = p1_[i];
    const auto j = static_cast<std::size_t>(p1_.index(d, -c - d));
    const auto [c2, d2] = p1_[j];
    const auto k = static_cast<std::size_t>(p1_.index(d2, -c2 - d2));
    seen[i] = seen[j] = seen[k] = true;
    rows.push_back({{i, 1}, {j, 1}, {k, 1}});
  }
  IntMatrix out = IntMatrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(mu));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (auto [col, v] : rows[r]) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) += v;
  return out;
}

IntRow ModSymSpace::manin_symbol(std::int64_t c, std::int64_t d) const {
  const std::int64_t i = p1_.index(c, d);
  if (i < 0) throw std::invalid_argument("manin_symbol: gcd(c, d, N) != 1");
  const auto& x = coords_[static_cast<std::size_t>(i)];
  IntRow out(ambient_rank());
  for (Eigen::Index j = 0; j < out.size(); ++j) out(j) = x[static_cast<std::size_t>(j)];
  return out;
}

IntRow ModSymSpace::images_sum(const std::vector<std::size_t>& idx) const {
  std::vector<std::int64_t> acc(free_.size(), 0);
  for (auto i : idx) {
    const auto& x = coords_[i];
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += x[j];
  }
  IntRow out(ambient_rank());
  for (Eigen::Index j = 0; j < out.size(); ++j) out(j) = acc[static_cast<std::size_t>(j)];
  return out;
}

IntRow ModSymSpace::modular_symbol(const Cusp& alpha, const Cusp& beta) const {
  // {0, x} via continued-fraction convergents of x.
  auto from_zero = [&](const Cusp& x) {
    std::vector<std::size_t> idx;
    auto push = [&](std::int64_t c, std::int64_t d) { idx.push_back(static_cast<std::size_t>(p1_.index(c, d))); };
    push(0, 1);
    if (x.is_infinity()) return images_sum(idx);
    std::int64_t a = x.num, b = x.den;
    std::int64_t q_prev = 0, q_prev2 = 1;  // q_{j-1}, q_{j-2}
    int j = 0;
    while (b != 0) {
      std::int64_t t = a / b;
      if ((a % b != 0) && ((a < 0) != (b < 0))) --t;
      const std::int64_t r = a - t * b;
      a = b;
      b = r;
      const std::int64_t q = t * q_prev + q_prev2;
      push((j % 2 == 0 ? -1 : 1) * q, q_prev);  // sign (-1)^{j-1}
      q_prev2 = q_prev;
      q_prev = q;
      ++j;
    }
    return images_sum(idx);
  };
  IntRow out = from_zero(beta);
  out -= from_zero(alpha);
  return out;
}

IntMatrix ModSymSpace::ambient_operator(const std::function<IntRow(const Mat2&)>& image) const {
  const auto k = ambient_rank();
  IntMatrix y;
  for (Eigen::Index f = 0; f < k; ++f) {
    IntRow r = image(p1_.lift(free_[static_cast<std::size_t>(f)]));
    if (f == 0) y = IntMatrix::Zero(k, r.size());
    y.row(f) = r;
  }
  if (k == 0) return IntMatrix(0, 0);
  return identity_basis_ ? y : exact_divide(sparse_product(basis_, y), denom_);
}

IntMatrix ModSymSpace::ambient_from_family(const std::vector<Mat2>& family) const {
  const auto k = ambient_rank();
  IntMatrix y(k, k);
  std::vector<std::size_t> idx;
  for (Eigen::Index f = 0; f < k; ++f) {
    const auto [c, d] = p1_[free_[static_cast<std::size_t>(f)]];
    idx.clear();
    for (const auto& h : family) {
      const std::int64_t i = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
      if (i >= 0) idx.push_back(static_cast<std::size_t>(i));
    }
    y.row(f) = images_sum(idx);
  }
  return identity_basis_ ? y : exact_divide(sparse_product(basis_, y), denom_);
}

IntRow ModSymSpace::hecke_on_symbol(std::size_t i, std::int64_t p) const {
  const auto family = (is_prime(p) && level_ % p != 0) ? heilbronn_cremona(p) : heilbronn_merel(p);
  const auto [c, d] = p1_[i];
  std::vector<std::size_t> idx;
  for (const auto& h : family) {
    const std::int64_t j = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
    if (j >= 0) idx.push_back(static_cast<std::size_t>(j));
  }
  return images_sum(idx);
}

IntMatrix ModSymSpace::hecke_ambient(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("hecke: index must be positive");
  if (n == 1) return IntMatrix::Identity(ambient_rank(), ambient_rank());
  if (is_prime(n) && level_ % n != 0) return ambient_from_family(heilbronn_cremona(n));
  return ambient_from_family(heilbronn_merel(n));
}

IntMatrix ModSymSpace::star_ambient() const { return ambient_from_family({Mat2{-1, 0, 0, 1}}); }

IntMatrix ModSymSpace::atkin_lehner_ambient(std::int64_t q) const {
  if (q < 1 || level_ % q != 0 || gcd64(q, level_ / q) != 1)
    throw std::invalid_argument("atkin_lehner: " + std::to_string(q) + " does not exactly divide the level");
  std::int64_t s = 0, t = 0;
  xgcd64(q, level_ / q, s, t);  // s q + t (N/q) = 1
  const Mat2 w{q * s, -t, level_, q};
  return ambient_operator([&](const Mat2& g) {
    return modular_symbol(Cusp::make(g.b, g.d).apply(w), Cusp::make(g.a, g.c).apply(w));
  });
}

IntMatrix ModSymSpace::to_cuspidal(const IntMatrix& ambient_op) const {
  if (cuspidal_.rank() == 0) return IntMatrix(0, 0);
  return cuspidal_.coordinates(IntMatrix(cuspidal_.basis() * ambient_op));
}

IntMatrix ModSymSpace::cuspidal_to_ambient(const IntMatrix& rows) const {
  if (rows.rows() == 0) return IntMatrix(0, ambient_rank());
  return rows * cuspidal_.basis();
}

std::shared_ptr<const ModSymSpace> build_space(std::int64_t level) {
  static std::mutex mutex;
  static std::map<std::int64_t, std::shared_future<std::shared_ptr<const ModSymSpace>>> cache;
  std::shared_future<std::shared_ptr<const ModSymSpace>> fut;
  std::promise<std::shared_ptr<const ModSymSpace>> promise;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(level);
    if (it == cache.end()) {
      fut = promise.get_future().share();
      cache.emplace(level, fut);
      owner = true;
    } else {
      fut = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(std::make_shared<const ModSymSpace>(level));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard<std::mutex> lock(mutex);
      cache.erase(level);
    }
  }
  return fut.get();
}

HeckeOperator hecke_operator(const ModSymSpace& s, std::int64_t m) {
  return {m, s.to_cuspidal(s.hecke_ambient(m))};
}

IntMatrix star_involution(const ModSymSpace& s) { return s.to_cuspidal(s.star_ambient()); }

IntMatrix atkin_lehner(const ModSymSpace& s, std::int64_t q_power) {
  return s.to_cuspidal(s.atkin_lehner_ambient(q_power));
}

namespace {

void check_degeneracy_args(const ModSymSpace& s, std::int64_t m, std::int64_t d) {
  const std::int64_t n = s.level();
  if (m < 1 || n % m != 0) throw std::invalid_argument("degeneracy: M must divide N");
  if (d < 1 || (n / m) % d != 0) throw std::invalid_argument("degeneracy: d must divide N/M");
}

}  // namespace

IntMatrix degeneracy_lower(const ModSymSpace& s, std::int64_t m, std::int64_t d) {
  check_degeneracy_args(s, m, d);
  if (m == s.level()) return IntMatrix::Identity(s.cuspidal_rank(), s.cuspidal_rank());
  const auto low = build_space(m);
  if (s.cuspidal_rank() == 0 || low->cuspidal_rank() == 0)
    return IntMatrix::Zero(s.cuspidal_rank(), low->cuspidal_rank());
  const IntMatrix amb = s.ambient_operator([&](const Mat2& g) {
    return low->modular_symbol(Cusp::make(d * g.b, g.d), Cusp::make(d * g.a, g.c));
  });
  return low->cuspidal_lattice().coordinates(IntMatrix(s.cuspidal_lattice().basis() * amb));
}

IntMatrix degeneracy_raise(const ModSymSpace& s, std::int64_t m, std::int64_t d) {
  check_degeneracy_args(s, m, d);
  if (m == s.level()) return IntMatrix::Identity(s.cuspidal_rank(), s.cuspidal_rank());
  const auto low = build_space(m);
  if (s.cuspidal_rank() == 0 || low->cuspidal_rank() == 0)
    return IntMatrix::Zero(low->cuspidal_rank(), s.cuspidal_rank());

  // Right cosets of Gamma0(N/d) cap Gamma^0(d) in Gamma0(M).
  const std::int64_t nd = s.level() / d;
  const P1List bottom(nd), top(d);
  const auto want = static_cast<std::size_t>(gamma0_index(s.level()) / gamma0_index(m));
  std::set<std::pair<std::int64_t, std::int64_t>> keys;
  std::vector<Mat2> reps;
  // Bottom rows (c, e) with M | c; the coset is fixed by (c : e) in P1(N/d) and (a : b) in P1(d).
  const std::int64_t span = s.level() * d;
  for (std::int64_t c = 0; c < span && reps.size() < want; c += m)
    for (std::int64_t e = 0; e < span && reps.size() < want; ++e) {
      std::int64_t x = 0, y = 0;
      if (xgcd64(e, c, x, y) != 1) continue;
      const Mat2 g0{x, -y, c, e};  // x e + y c = 1
      for (std::int64_t j = 0; j < d && reps.size() < want; ++j) {
        const Mat2 h = Mat2{1, j, 0, 1} * g0;
        if (keys.emplace(bottom.index(h.c, h.d), top.index(h.a, h.b)).second) reps.push_back(h);
      }
    }
  if (reps.size() != want) throw std::logic_error("degeneracy_raise: incomplete coset enumeration");

  const IntMatrix amb = low->ambient_operator([&](const Mat2& g) {
    IntRow acc = IntRow::Zero(s.ambient_rank());
    for (const auto& h : reps) {
      const Mat2 hg = h * g;
      acc += s.modular_symbol(Cusp::make(hg.b, d * hg.d), Cusp::make(hg.a, d * hg.c));
    }
    return acc;
  });
  return s.cuspidal_lattice().coordinates(IntMatrix(low->cuspidal_lattice().basis() * amb));
}

Lattice new_subspace(const ModSymSpace& s) {
  const Eigen::Index r = s.cuspidal_rank();
  std::vector<IntMatrix> maps;
  for (std::int64_t p : prime_divisors(s.level())) {
    const std::int64_t m = s.level() / p;
    if (genus_x0(m) == 0) continue;
    maps.push_back(degeneracy_lower(s, m, 1));
    maps.push_back(degeneracy_lower(s, m, p));
  }
  if (maps.empty() || r == 0) return Lattice::standard(r);
  Eigen::Index cols = 0;
  for (const auto& mm : maps) cols += mm.cols();
  IntMatrix stacked(r, cols);
  Eigen::Index at = 0;
  for (const auto& mm : maps) {
    stacked.middleCols(at, mm.cols()) = mm;
    at += mm.cols();
  }
  return Lattice::from_generators(left_kernel(stacked), r);
}

namespace {

constexpr std::int64_t kModPrime = 2147483629;  // prime below 2^31

std::int64_t mod_rank(const IntMatrix& m) {
  const auto rows = m.rows(), cols = m.cols();
  std::vector<std::vector<std::int64_t>> a(static_cast<std::size_t>(rows), std::vector<std::int64_t>(static_cast<std::size_t>(cols)));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      Integer r;
      mpz_fdiv_r_ui(r.get_mpz_t(), m(i, j).get_mpz_t(), static_cast<unsigned long>(kModPrime));
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r.get_si();
    }
  std::int64_t rank = 0;
  for (std::size_t col = 0; col < static_cast<std::size_t>(cols) && rank < rows; ++col) {
    auto piv = static_cast<std::size_t>(rank);
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[static_cast<std::size_t>(rank)]);
    auto& pr = a[static_cast<std::size_t>(rank)];
    const std::int64_t inv = inverse_mod(pr[col], kModPrime);
    for (std::size_t i = static_cast<std::size_t>(rank) + 1; i < a.size(); ++i) {
      if (a[i][col] == 0) continue;
      const std::int64_t f = static_cast<std::int64_t>((static_cast<__int128>(a[i][col]) * inv) % kModPrime);
      for (std::size_t j = col; j < pr.size(); ++j)
        a[i][j] = mod64(static_cast<std::int64_t>((a[i][j] - static_cast<__int128>(f) * pr[j]) % kModPrime), kModPrime);
    }
    ++rank;
  }
  return rank;
}

struct Candidate {
  Lattice space;  // ambient coordinates
  std::map<std::int64_t, std::int64_t> ap;
};

}  // namespace

std::vector<RationalNewform> rational_eigenspaces(const ModSymSpace& s) {
  const Lattice fresh = new_subspace(s);
  std::vector<RationalNewform> out;
  if (fresh.rank() == 0) return out;
  const Eigen::Index k = s.ambient_rank();
  std::vector<Candidate> cands{{Lattice::from_generators(s.cuspidal_to_ambient(fresh.basis()), k), {}}};
  for (std::int64_t p : primes_up_to(sturm_bound(s.level()))) {
    const IntMatrix t = s.hecke_ambient(p);
    const bool bad = s.level() % p == 0;
    const auto bound = bad ? std::int64_t{1} : static_cast<std::int64_t>(std::floor(2 * std::sqrt(static_cast<double>(p))));
    std::vector<Candidate> next;
    for (auto& cand : cands) {
      const IntMatrix& b = cand.space.basis();
      const IntMatrix tw = cand.space.coordinates(IntMatrix(b * t));
      const Eigen::Index r = tw.rows();
      if (tw == IntMatrix(tw(0, 0) * IntMatrix::Identity(r, r))) {
        const Integer a = tw(0, 0);
        if (bad ? abs(a) <= 1 : a * a <= 4 * p) {
          cand.ap[p] = to_int64(a);
          next.push_back(std::move(cand));
        }
        continue;
      }
      for (std::int64_t a = -bound; a <= bound; ++a) {
        IntMatrix shifted = tw;
        for (Eigen::Index i = 0; i < r; ++i) shifted(i, i) -= a;
        if (mod_rank(shifted) == r) continue;
        const IntMatrix ker = left_kernel(shifted);
        if (ker.rows() == 0) continue;
        Candidate c{Lattice::from_generators(IntMatrix(ker * b), k), cand.ap};
        c.ap[p] = a;
        next.push_back(std::move(c));
      }
    }
    cands = std::move(next);
    if (cands.empty()) return out;
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    return std::lexicographical_compare(x.ap.begin(), x.ap.end(), y.ap.begin(), y.ap.end(),
                                        [](const auto& u, const auto& v) { return u.second < v.second; });
  });

  std::map<std::int64_t, IntMatrix> w_ops;
  for (auto [p, e] : factor(s.level())) {
    std::int64_t q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    w_ops[q] = s.atkin_lehner_ambient(q);
  }
  for (auto& cand : cands) {
    if (cand.space.rank() != 2)
      throw std::logic_error("rational_eigenspaces: eigenspace of rank " + std::to_string(cand.space.rank()) +
                             " at the Sturm bound");
    RationalNewform f;
    f.level = s.level();
    f.index = static_cast<int>(out.size());
    f.ap = cand.ap;
    f.eigenspace = Lattice::from_generators(s.cuspidal_lattice().coordinates(cand.space.basis()), s.cuspidal_rank());
    const IntRow v = cand.space.basis().row(0);
    for (const auto& [q, w] : w_ops) {
      const IntRow wv = v * w;
      if (wv == v) f.sign_w[q] = 1;
      else if (wv == IntRow(-v)) f.sign_w[q] = -1;
      else throw std::logic_error("rational_eigenspaces: Atkin-Lehner does not act by a sign");
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::string RationalNewform::letter() const {
  std::string s;
  int i = index;
  do {
    s.insert(s.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  } while (i > 0);
  return s;
}

}  // namespace manin
