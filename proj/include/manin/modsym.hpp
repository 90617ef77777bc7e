#pragma once

// Weight-2 modular symbols for Gamma0(N) with integral structure.
//
// The ambient lattice A is the Z-span of the images of all Manin symbols in
// the quotient by the 2- and 3-term relations (modulo torsion). Operators act
// on row vectors from the right. The cuspidal lattice L is the kernel of the
// boundary map on A; "L coordinates" are coordinates in L's HNF basis.

#include "manin/integer.hpp"
#include "manin/lattice.hpp"
#include "manin/p1.hpp"

#include <functional>
#include <map>
#include <memory>

namespace manin {

class ModSymSpace {
 public:
  explicit ModSymSpace(std::int64_t level);

  std::int64_t level() const { return level_; }
  int genus() const { return genus_; }
  const P1List& p1() const { return p1_; }
  Eigen::Index ambient_rank() const { return static_cast<Eigen::Index>(free_.size()); }

  /// Relation rows (2-term then 3-term) over the generator list.
  IntMatrix presentation() const;

  /// Ambient coordinates of the Manin symbol (c : d).
  IntRow manin_symbol(std::int64_t c, std::int64_t d) const;
  /// Ambient coordinates of the modular symbol {alpha, beta}.
  IntRow modular_symbol(const Cusp& alpha, const Cusp& beta) const;

  const std::vector<Cusp>& cusps() const { return cusps_; }
  std::size_t cusp_index(const Cusp& c) const;
  /// Boundary map on the ambient basis (rows) to the free module on cusp classes.
  const IntMatrix& boundary_matrix() const { return boundary_; }

  /// L inside A.
  const Lattice& cuspidal_lattice() const { return cuspidal_; }
  Eigen::Index cuspidal_rank() const { return cuspidal_.rank(); }

  /// Ambient operator determined by the images of the free generators; the
  /// callback receives the SL2(Z) lift of each generator.
  IntMatrix ambient_operator(const std::function<IntRow(const Mat2&)>& image) const;
  /// Ambient operator induced by right multiplication of Manin symbols by a matrix family.
  IntMatrix ambient_from_family(const std::vector<Mat2>& family) const;

  IntMatrix hecke_ambient(std::int64_t n) const;
  IntMatrix star_ambient() const;
  IntMatrix atkin_lehner_ambient(std::int64_t q) const;

  /// Restrict an ambient operator to L, in L coordinates.
  IntMatrix to_cuspidal(const IntMatrix& ambient_op) const;
  /// Rows in L coordinates to rows in ambient coordinates.
  IntMatrix cuspidal_to_ambient(const IntMatrix& rows) const;

  /// T_p applied to the generator with P1 index i, as an ambient row.
  IntRow hecke_on_symbol(std::size_t i, std::int64_t p) const;
  /// Ambient coordinates of generator i, as machine integers.
  const std::vector<std::int64_t>& symbol_coordinates(std::size_t i) const { return coords_[i]; }

 private:
  IntRow images_sum(const std::vector<std::size_t>& p1_indices) const;
  std::int64_t level_;
  int genus_;
  P1List p1_;
  std::vector<std::size_t> free_;  // P1 index of each free generator
  bool identity_basis_ = true;     // ambient basis equals the free generators
  Integer denom_ = 1;              // ambient basis rows are basis_/denom_ in free coordinates
  IntMatrix basis_;
  std::vector<std::vector<std::int64_t>> coords_;
  std::vector<Cusp> cusps_;
  IntMatrix boundary_;
  Lattice cuspidal_;
};

/// Shared, cached construction; safe to call concurrently.
std::shared_ptr<const ModSymSpace> build_space(std::int64_t level);

struct HeckeOperator {
  std::int64_t index = 1;
  IntMatrix matrix;  ///< on L coordinates
};

HeckeOperator hecke_operator(const ModSymSpace& s, std::int64_t m);
/// Star involution (c : d) -> (-c : d) on L coordinates.
IntMatrix star_involution(const ModSymSpace& s);
/// Atkin-Lehner involution W_q on L coordinates; q must exactly divide N.
IntMatrix atkin_lehner(const ModSymSpace& s, std::int64_t q_power);

/// Level-lowering map L_N -> L_M induced by tau -> d tau.
IntMatrix degeneracy_lower(const ModSymSpace& s, std::int64_t m, std::int64_t d);
/// Level-raising map L_M -> L_N, the transfer of degeneracy_lower.
IntMatrix degeneracy_raise(const ModSymSpace& s, std::int64_t m, std::int64_t d);

/// Saturated new sublattice of L, in L coordinates.
Lattice new_subspace(const ModSymSpace& s);

struct RationalNewform;
std::vector<RationalNewform> rational_eigenspaces(const ModSymSpace& s);

}  // namespace manin
