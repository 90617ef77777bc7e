#include "manin/invariants.hpp"

namespace manin {

IntMatrix degree_composite(const ModSymSpace& s, const Lattice& l_f, const EigenData& e) {
  // Rows of k are saturated functionals with common kernel L_perp, so v -> v k^T
  // identifies L / L_perp with Z^2.
  const IntMatrix restricted = s.cuspidal_lattice().basis() * e.functionals;
  const Lattice k = saturate_rows(IntMatrix(restricted.transpose()), restricted.rows());
  if (k.rank() != 2) throw ConsistencyError("degree_composite: f-eigen functionals do not have rank 2");
  return l_f.basis() * k.basis().transpose();
}

DegreeResult modular_degree(const ModSymSpace& s, const RationalNewform& f, const EigenData& e) {
  // #(L / (L_f + L_perp)) = #(Z^2 / image of L_f in L / L_perp).
  const IntMatrix composite = degree_composite(s, f.eigenspace, e);
  const QuotientOrder q = quotient_order(Lattice::standard(2), Lattice::from_generators(composite, 2));
  if (q.infinite()) throw ConsistencyError("modular_degree: L_f + L_perp has infinite index");
  DegreeResult out;
  out.level = s.level();
  out.newform_id = f.id();
  out.index_used = *q.value;
  Integer root;
  if (!is_perfect_square(out.index_used, &root))
    throw ConsistencyError("modular_degree: index " + out.index_used.get_str() + " is not a perfect square");
  out.degree = root;
  const auto divisors = elementary_divisors(composite);
  if (divisors.size() != 2 || divisors[0] != root || divisors[1] != root)
    throw ConsistencyError("modular_degree: composite map is not multiplication by the degree");
  return out;
}

DegreeResult modular_degree(const ModSymSpace& s, const RationalNewform& f) { return modular_degree(s, f, eigen_data(s, f)); }

GapReport degree_congruence_gap(const DegreeResult& deg, const Integer& r_f) {
  if (deg.degree == 0 || r_f % deg.degree != 0)
    throw DivisibilityViolation("degree " + deg.degree.get_str() + " does not divide r_f = " + r_f.get_str());
  GapReport out;
  out.ratio = r_f / deg.degree;
  out.gap = valuation(r_f, 2) - valuation(deg.degree, 2);
  out.ratio_factors = factor(out.ratio);
  return out;
}

}  // namespace manin
