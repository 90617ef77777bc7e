#pragma once

// Exact integer lattices: Hermite and Smith normal forms, kernels, saturation
// and quotient orders. Vectors are rows; a lattice is the Z-span of the rows
// of its basis matrix.

#include "manin/integer.hpp"

#include <optional>
#include <stdexcept>

namespace manin {

class InvalidLatticePair : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row Hermite normal form: same Z-row-span as m, zero rows removed, pivots
/// positive and entries above each pivot reduced into [0, pivot).
IntMatrix hnf(const IntMatrix& m);

struct HnfTransform {
  IntMatrix h;  ///< full HNF including trailing zero rows (rows(h) == rows(m))
  IntMatrix u;  ///< unimodular with u * m == h
  Eigen::Index rank = 0;
};
HnfTransform hnf_with_transform(const IntMatrix& m);

struct SmithForm {
  IntMatrix d;  ///< diagonal, d(i,i) | d(i+1,i+1), all >= 0
  IntMatrix u;  ///< unimodular, u * m * v == d
  IntMatrix v;  ///< unimodular
};
SmithForm snf(const IntMatrix& m);

/// Nonzero Smith invariants of m in divisibility order (no transforms kept).
std::vector<Integer> elementary_divisors(const IntMatrix& m);

/// Saturated basis (rows) of { x in Z^rows : x * m == 0 }.
IntMatrix left_kernel(const IntMatrix& m);
/// Saturated basis (rows) of { x in Z^cols : m * x^T == 0 }.
IntMatrix right_kernel(const IntMatrix& m);

Eigen::Index rank(const IntMatrix& m);
Integer determinant(const IntMatrix& m);

/// Solve y * basis == v for integer y, where basis is in HNF (as returned by
/// hnf). Returns nullopt if v is not in the row lattice.
std::optional<IntRow> solve_in_hnf(const IntMatrix& basis, const IntRow& v);

/// Finite-rank free sublattice of Z^ambient_rank, kept in HNF.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(Eigen::Index ambient_rank);
  /// Z-span of the given generator rows.
  static Lattice from_generators(const IntMatrix& generators);
  static Lattice from_generators(const IntMatrix& generators, Eigen::Index ambient_rank);
  static Lattice standard(Eigen::Index ambient_rank);

  Eigen::Index ambient_rank() const { return ambient_rank_; }
  Eigen::Index rank() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }

  bool contains(const IntRow& v) const;
  bool contains(const Lattice& other) const;
  std::optional<IntRow> coordinates(const IntRow& v) const;
  /// Coordinates of every row of m; throws InvalidLatticePair if any row is outside.
  IntMatrix coordinates(const IntMatrix& m) const;

  bool operator==(const Lattice& other) const;

 private:
  Eigen::Index ambient_rank_ = 0;
  IntMatrix basis_;
};

/// Smallest lattice containing l with torsion-free quotient in the ambient Z^n.
Lattice saturate(const Lattice& l);

/// Intersection of the ambient integer lattice with the rational row space of m.
Lattice saturate_rows(const IntMatrix& m, Eigen::Index ambient_rank);

/// Order of sup/sub; nullopt means infinite (rank drop).
struct QuotientOrder {
  std::optional<Integer> value;
  bool infinite() const { return !value.has_value(); }
};

/// Throws InvalidLatticePair if sub is not contained in sup.
QuotientOrder quotient_order(const Lattice& sup, const Lattice& sub);

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersect(const Lattice& a, const Lattice& b);

}  // namespace manin
