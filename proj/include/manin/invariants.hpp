#pragma once

#include "manin/hecke_forms.hpp"

namespace manin {

class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DivisibilityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct DegreeResult {
  std::int64_t level = 0;
  std::string newform_id;
  Integer degree = 0;
  Integer index_used = 0;  ///< #(L / (L_f + L_perp)) = degree^2
};

DegreeResult modular_degree(const ModSymSpace& s, const RationalNewform& f, const EigenData& e);
DegreeResult modular_degree(const ModSymSpace& s, const RationalNewform& f);

/// Matrix of L_f -> L / L_perp in bases of L_f and of the quotient; equals
/// degree times a unimodular matrix.
IntMatrix degree_composite(const ModSymSpace& s, const Lattice& l_f, const EigenData& e);

struct GapReport {
  int gap = 0;                ///< ord_2(r_f) - ord_2(deg)
  Integer ratio = 1;          ///< r_f / deg
  Factorization ratio_factors;
};

GapReport degree_congruence_gap(const DegreeResult& deg, const Integer& r_f);

}  // namespace manin
