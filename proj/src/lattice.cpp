#include "manin/lattice.hpp"

#include <algorithm>
#include <vector>

namespace manin {

namespace {

using Row = std::vector<Integer>;

Row to_row(const IntMatrix& m, Eigen::Index i) {
  Row r(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
  return r;
}

IntMatrix from_rows(const std::vector<Row>& rows, Eigen::Index cols) {
  IntMatrix out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return out;
}

// a -= q * b, starting at column `from`.
void axpy(Row& a, const Integer& q, const Row& b, std::size_t from = 0) {
  for (std::size_t j = from; j < a.size(); ++j)
    if (b[j] != 0) a[j] -= q * b[j];
}

void negate(Row& a) {
  for (auto& x : a) x = -x;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Echelon basis grown one generator at a time.
class EchelonBuilder {
 public:
  explicit EchelonBuilder(std::size_t cols) : cols_(cols) {}

  void insert(Row v) {
    std::size_t i = 0;
    std::size_t j = 0;
    for (;;) {
      while (j < cols_ && v[j] == 0) ++j;
      if (j == cols_) return;
      while (i < rows_.size() && pivots_[i] < j) ++i;
      if (i == rows_.size() || pivots_[i] > j) {
        if (v[j] < 0) negate(v);
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(i), std::move(v));
        pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(i), j);
        return;
      }
      Row& b = rows_[i];
      if (mpz_divisible_p(v[j].get_mpz_t(), b[j].get_mpz_t())) {
        const Integer q = v[j] / b[j];
        axpy(v, q, b, j);
      } else {
        Integer g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), b[j].get_mpz_t(), v[j].get_mpz_t());
        const Integer vb = v[j] / g, bb = b[j] / g;
        Row nb(cols_), nv(cols_);
        for (std::size_t k = j; k < cols_; ++k) {
          nb[k] = s * b[k] + t * v[k];
          nv[k] = vb * b[k] - bb * v[k];
        }
        b = std::move(nb);
        v = std::move(nv);
      }
      ++i;
      ++j;
    }
  }

  IntMatrix finish() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t p = pivots_[i];
      for (std::size_t r = 0; r < i; ++r) {
        if (rows_[r][p] == 0) continue;
        const Integer q = floor_div(rows_[r][p], rows_[i][p]);
        if (q != 0) axpy(rows_[r], q, rows_[i], p);
      }
    }
    return from_rows(rows_, static_cast<Eigen::Index>(cols_));
  }

 private:
  std::size_t cols_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace

IntMatrix hnf(const IntMatrix& m) {
  EchelonBuilder builder(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) builder.insert(to_row(m, i));
  return builder.finish();
}

HnfTransform hnf_with_transform(const IntMatrix& m) {
  const std::size_t r = static_cast<std::size_t>(m.rows());
  const std::size_t c = static_cast<std::size_t>(m.cols());
  std::vector<Row> h(r), u(r, Row(r, Integer(0)));
  for (std::size_t i = 0; i < r; ++i) {
    h[i] = to_row(m, static_cast<Eigen::Index>(i));
    u[i][i] = 1;
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    // Euclid across rows: repeatedly pick the smallest nonzero entry as pivot.
    for (;;) {
      std::size_t best = r;
      for (std::size_t i = row; i < r; ++i) {
        if (h[i][col] == 0) continue;
        if (best == r || mpz_cmpabs(h[i][col].get_mpz_t(), h[best][col].get_mpz_t()) < 0) best = i;
      }
      if (best == r) break;
      std::swap(h[row], h[best]);
      std::swap(u[row], u[best]);
      bool clean = true;
      for (std::size_t i = row + 1; i < r; ++i) {
        if (h[i][col] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), h[i][col].get_mpz_t(), h[row][col].get_mpz_t());
        axpy(h[i], q, h[row], col);
        axpy(u[i], q, u[row]);
        if (h[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (h[row][col] == 0) continue;
    if (h[row][col] < 0) {
      negate(h[row]);
      negate(u[row]);
    }
    for (std::size_t i = 0; i < row; ++i) {
      if (h[i][col] == 0) continue;
      const Integer q = floor_div(h[i][col], h[row][col]);
      if (q == 0) continue;
      axpy(h[i], q, h[row], col);
      axpy(u[i], q, u[row]);
    }
    pivots.push_back(col);
    ++row;
  }
  HnfTransform out;
  out.h = from_rows(h, static_cast<Eigen::Index>(c));
  out.u = from_rows(u, static_cast<Eigen::Index>(r));
  out.rank = static_cast<Eigen::Index>(row);
  return out;
}

namespace {

struct SmithWork {
  std::vector<Row> d;
  std::vector<Row> u;  // left transform rows
  std::vector<Row> v;  // right transform, stored as rows of v^T
  bool track = true;

  void swap_rows(std::size_t a, std::size_t b) {
    std::swap(d[a], d[b]);
    if (track) std::swap(u[a], u[b]);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (auto& row : d) std::swap(row[a], row[b]);
    if (track) std::swap(v[a], v[b]);
  }
  // row a -= q * row b
  void row_op(std::size_t a, const Integer& q, std::size_t b) {
    axpy(d[a], q, d[b]);
    if (track) axpy(u[a], q, u[b]);
  }
  // col a -= q * col b
  void col_op(std::size_t a, const Integer& q, std::size_t b) {
    for (auto& row : d) row[a] -= q * row[b];
    if (track) axpy(v[a], q, v[b]);
  }
};

void smith_in_place(SmithWork& w, std::size_t rows, std::size_t cols) {
  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (w.d[i][j] != 0 && (bi == rows || mpz_cmpabs(w.d[i][j].get_mpz_t(), w.d[bi][bj].get_mpz_t()) < 0)) {
            bi = i;
            bj = j;
          }
      if (bi == rows) return;
      if (bi != t) w.swap_rows(t, bi);
      if (bj != t) w.swap_cols(t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (w.d[i][t] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), w.d[i][t].get_mpz_t(), w.d[t][t].get_mpz_t());
        w.row_op(i, q, t);
        if (w.d[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (w.d[t][j] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), w.d[t][j].get_mpz_t(), w.d[t][t].get_mpz_t());
        w.col_op(j, q, t);
        if (w.d[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold in any row whose entries are not multiples of the pivot.
      std::size_t offender = rows;
      for (std::size_t i = t + 1; i < rows && offender == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(w.d[i][j].get_mpz_t(), w.d[t][t].get_mpz_t())) {
            offender = i;
            break;
          }
      if (offender == rows) break;
      w.row_op(t, Integer(-1), offender);
    }
    if (w.d[t][t] < 0) {
      negate(w.d[t]);
      if (w.track) negate(w.u[t]);
    }
  }
}

}  // namespace

SmithForm snf(const IntMatrix& m) {
  const std::size_t r = static_cast<std::size_t>(m.rows());
  const std::size_t c = static_cast<std::size_t>(m.cols());
  SmithWork w;
  w.d.resize(r);
  w.u.assign(r, Row(r, Integer(0)));
  w.v.assign(c, Row(c, Integer(0)));
  for (std::size_t i = 0; i < r; ++i) {
    w.d[i] = to_row(m, static_cast<Eigen::Index>(i));
    w.u[i][i] = 1;
  }
  for (std::size_t j = 0; j < c; ++j) w.v[j][j] = 1;
  smith_in_place(w, r, c);
  SmithForm out;
  out.d = from_rows(w.d, static_cast<Eigen::Index>(c));
  out.u = from_rows(w.u, static_cast<Eigen::Index>(r));
  out.v = from_rows(w.v, static_cast<Eigen::Index>(c)).transpose();
  return out;
}

std::vector<Integer> elementary_divisors(const IntMatrix& m) {
  const IntMatrix h = hnf(m);
  SmithWork w;
  w.track = false;
  const std::size_t r = static_cast<std::size_t>(h.rows());
  const std::size_t c = static_cast<std::size_t>(h.cols());
  w.d.resize(r);
  for (std::size_t i = 0; i < r; ++i) w.d[i] = to_row(h, static_cast<Eigen::Index>(i));
  smith_in_place(w, r, c);
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(r, c); ++i)
    if (w.d[i][i] != 0) out.push_back(w.d[i][i]);
  return out;
}

IntMatrix left_kernel(const IntMatrix& m) {
  const HnfTransform t = hnf_with_transform(m);
  const Eigen::Index k = m.rows() - t.rank;
  if (k == 0) return IntMatrix(0, m.rows());
  return hnf(t.u.bottomRows(k));
}

IntMatrix right_kernel(const IntMatrix& m) { return left_kernel(m.transpose()); }

Eigen::Index rank(const IntMatrix& m) { return hnf(m).rows(); }

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1, prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        Integer x = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = x;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::optional<IntRow> solve_in_hnf(const IntMatrix& basis, const IntRow& v) {
  if (v.cols() != basis.cols()) throw std::invalid_argument("solve_in_hnf: dimension mismatch");
  IntRow rest = v;
  IntRow y(basis.rows());
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < basis.rows(); ++i) {
    while (col < basis.cols() && basis(i, col) == 0) {
      if (rest(col) != 0) return std::nullopt;
      ++col;
    }
    if (col == basis.cols()) break;
    if (!mpz_divisible_p(rest(col).get_mpz_t(), basis(i, col).get_mpz_t())) return std::nullopt;
    y(i) = rest(col) / basis(i, col);
    if (y(i) != 0)
      for (Eigen::Index j = col; j < basis.cols(); ++j)
        if (basis(i, j) != 0) rest(j) -= y(i) * basis(i, j);
    ++col;
  }
  for (Eigen::Index j = 0; j < rest.cols(); ++j)
    if (rest(j) != 0) return std::nullopt;
  return y;
}

Lattice::Lattice(Eigen::Index ambient_rank) : ambient_rank_(ambient_rank), basis_(0, ambient_rank) {}

Lattice Lattice::from_generators(const IntMatrix& generators) {
  return from_generators(generators, generators.cols());
}

Lattice Lattice::from_generators(const IntMatrix& generators, Eigen::Index ambient_rank) {
  if (generators.cols() != ambient_rank && generators.rows() != 0)
    throw InvalidLatticePair("generator width does not match ambient rank");
  Lattice l(ambient_rank);
  if (generators.rows() != 0) l.basis_ = hnf(generators);
  return l;
}

Lattice Lattice::standard(Eigen::Index ambient_rank) {
  Lattice l(ambient_rank);
  l.basis_ = IntMatrix::Identity(ambient_rank, ambient_rank);
  return l;
}

bool Lattice::contains(const IntRow& v) const { return coordinates(v).has_value(); }

bool Lattice::contains(const Lattice& other) const {
  if (other.ambient_rank_ != ambient_rank_) return false;
  for (Eigen::Index i = 0; i < other.rank(); ++i)
    if (!contains(IntRow(other.basis_.row(i)))) return false;
  return true;
}

std::optional<IntRow> Lattice::coordinates(const IntRow& v) const { return solve_in_hnf(basis_, v); }

IntMatrix Lattice::coordinates(const IntMatrix& m) const {
  IntMatrix out(m.rows(), rank());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto y = coordinates(IntRow(m.row(i)));
    if (!y) throw InvalidLatticePair("vector is not in the lattice");
    out.row(i) = *y;
  }
  return out;
}

bool Lattice::operator==(const Lattice& other) const {
  return ambient_rank_ == other.ambient_rank_ && basis_.rows() == other.basis_.rows() && basis_ == other.basis_;
}

Lattice saturate_rows(const IntMatrix& m, Eigen::Index ambient_rank) {
  if (m.rows() == 0) return Lattice(ambient_rank);
  // With R a row basis and C a basis of the lattice spanned by R's columns,
  // R = C^T X and the rows of X are a saturated basis of the same span.
  const IntMatrix r = hnf(m);
  const Eigen::Index k = r.rows();
  if (k == 0) return Lattice(ambient_rank);
  const IntMatrix c = hnf(IntMatrix(r.transpose()));
  // Forward substitution with the lower-triangular C^T (pivots on C's diagonal
  // since C is a full-rank k x k HNF).
  IntMatrix x(k, r.cols());
  for (Eigen::Index i = 0; i < k; ++i) {
    IntRow acc = r.row(i);
    for (Eigen::Index j = 0; j < i; ++j)
      if (c(j, i) != 0) acc -= c(j, i) * x.row(j);
    for (Eigen::Index t = 0; t < acc.size(); ++t) {
      if (!mpz_divisible_p(acc(t).get_mpz_t(), c(i, i).get_mpz_t()))
        throw std::logic_error("saturate_rows: inexact division");
      mpz_divexact(acc(t).get_mpz_t(), acc(t).get_mpz_t(), c(i, i).get_mpz_t());
    }
    x.row(i) = acc;
  }
  return Lattice::from_generators(x, ambient_rank);
}

Lattice saturate(const Lattice& l) { return saturate_rows(l.basis(), l.ambient_rank()); }

QuotientOrder quotient_order(const Lattice& sup, const Lattice& sub) {
  if (sup.ambient_rank() != sub.ambient_rank()) throw InvalidLatticePair("quotient_order: ambient rank mismatch");
  IntMatrix coords(sub.rank(), sup.rank());
  for (Eigen::Index i = 0; i < sub.rank(); ++i) {
    auto y = sup.coordinates(IntRow(sub.basis().row(i)));
    if (!y) throw InvalidLatticePair("quotient_order: sub is not contained in sup");
    coords.row(i) = *y;
  }
  if (sub.rank() < sup.rank()) return {};
  return {Integer(abs(determinant(coords)))};
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  if (a.ambient_rank() != b.ambient_rank()) throw InvalidLatticePair("lattice_sum: ambient rank mismatch");
  IntMatrix stacked(a.rank() + b.rank(), a.ambient_rank());
  stacked << a.basis(), b.basis();
  return Lattice::from_generators(stacked, a.ambient_rank());
}

Lattice lattice_intersect(const Lattice& a, const Lattice& b) {
  if (a.ambient_rank() != b.ambient_rank()) throw InvalidLatticePair("lattice_intersect: ambient rank mismatch");
  if (a.rank() == 0 || b.rank() == 0) return Lattice(a.ambient_rank());
  IntMatrix stacked(a.rank() + b.rank(), a.ambient_rank());
  stacked << a.basis(), b.basis();
  const IntMatrix k = left_kernel(stacked);
  if (k.rows() == 0) return Lattice(a.ambient_rank());
  const IntMatrix gens = k.leftCols(a.rank()) * a.basis();
  return Lattice::from_generators(gens, a.ambient_rank());
}

}  // namespace manin
