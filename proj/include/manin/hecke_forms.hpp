#pragma once

#include "manin/modsym.hpp"
#include "manin/newform.hpp"

#include <vector>

namespace manin {

/// ceil(mu(N) / 6).
std::int64_t sturm_bound(std::int64_t level);

/// a_n from the stored a_p by multiplicativity and the Hecke recursion.
/// Throws std::out_of_range if a needed a_p is missing.
Integer extend_an(const RationalNewform& f, std::int64_t n);
/// a_1, ..., a_n (index 0 holds a_0 = 0).
std::vector<Integer> an_list(const RationalNewform& f, std::int64_t n);

/// Hecke eigen-data of f on the ambient modular symbols.
struct EigenData {
  IntMatrix functionals;            ///< k x 2, saturated: columns span the f-eigen dual on A
  std::vector<Integer> plus_value;  ///< star-plus eigen-functional on every Manin symbol
  std::size_t base_symbol = 0;      ///< symbol with nonzero plus_value
};
EigenData eigen_data(const ModSymSpace& s, const RationalNewform& f);

/// a_p of f for any prime p, from the eigen-functional.
std::int64_t newform_ap(const ModSymSpace& s, const EigenData& e, std::int64_t p);
/// Fill f.ap for all primes up to bound.
void extend_ap(const ModSymSpace& s, const EigenData& e, RationalNewform& f, std::int64_t bound);

/// L_perp = saturate(L cap V_f^perp) in L coordinates.
Lattice hecke_complement(const ModSymSpace& s, const EigenData& e);

struct IntegralCuspBasis {
  std::int64_t level = 0;
  std::int64_t precision = 0;
  IntMatrix coeff_matrix;  ///< rows: Z-basis of S2(Gamma0(N), Z); columns a_1..a_B
};

IntegralCuspBasis integral_cusp_basis(std::int64_t level, std::int64_t precision);
/// Same, reusing a built space.
IntegralCuspBasis integral_cusp_basis(const ModSymSpace& s, std::int64_t precision);

/// The f-isotypic functional as integer weights on a_1..a_B: it vanishes
/// exactly on the Hecke complement of f in S2(Gamma0(N), Q).
IntRow isotypic_functional(const ModSymSpace& s, const RationalNewform& f, std::int64_t precision);

/// r_f = #(S / (S cap Qf + S cap (Qf)^perp)), for any Z-basis of S.
Integer congruence_number(const IntegralCuspBasis& basis, const RationalNewform& f, const IntRow& functional);
Integer congruence_number(const ModSymSpace& s, const RationalNewform& f);
Integer congruence_number(std::int64_t level, const RationalNewform& f);

}  // namespace manin
