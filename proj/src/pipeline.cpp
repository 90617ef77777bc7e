#include "manin/pipeline.hpp"

#include "manin/parallel.hpp"

namespace manin {

LevelAnalysis analyze_level(std::int64_t level, bool with_congruence, unsigned workers) {
  const auto s = build_space(level);
  LevelAnalysis out;
  out.level = level;
  out.genus = s->genus();
  out.sturm = sturm_bound(level);
  const auto forms = rational_eigenspaces(*s);
  out.forms = parallel_map<NewformAnalysis>(forms.size(), workers, [&](std::size_t i) {
    NewformAnalysis a;
    a.form = forms[i];
    const EigenData e = eigen_data(*s, a.form);
    a.degree = modular_degree(*s, a.form, e);
    if (with_congruence) {
      a.r_f = congruence_number(*s, a.form);
      a.gap = degree_congruence_gap(a.degree, *a.r_f);
    }
    return a;
  });
  return out;
}

CurveAnalysis analyze_curve(const CurveRecord& c, bool with_congruence) {
  const auto s = build_space(c.conductor);
  const auto forms = rational_eigenspaces(*s);
  CurveAnalysis out;
  out.record = c;
  out.form = match_curve_to_newform(c.model, c.conductor, forms);
  const EigenData e = eigen_data(*s, out.form);
  out.degree = modular_degree(*s, out.form, e);
  out.computed.degree = out.degree.degree;
  out.computed.two_torsion_rank = two_torsion_rank(c.model);
  if (with_congruence) out.computed.r_f = congruence_number(*s, out.form);
  if (c.degree && c.is_optimal.value_or(false) && *c.degree != out.degree.degree)
    throw ConsistencyError("computed modular degree " + out.degree.degree.get_str() + " differs from ingested " +
                           c.degree->get_str() + " for " + c.display_label());
  return out;
}

NumericManin numeric_manin(const CurveRecord& c, long double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  const auto s = build_space(c.conductor);
  const auto forms = rational_eigenspaces(*s);
  const RationalNewform f = match_curve_to_newform(c.model, c.conductor, forms);
  const EigenData e = eigen_data(*s, f);
  NumericManin out;
  out.curve = elliptic_period_lattice(c.model, tol);
  out.form = newform_period_lattice(*s, f, e, tol);
  out.constant = manin_constant_numeric(out.curve, out.form.lattice, tol);
  return out;
}

}  // namespace manin
