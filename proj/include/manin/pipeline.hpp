#pragma once

#include "manin/certify.hpp"
#include "manin/invariants.hpp"
#include "manin/periods.hpp"

namespace manin {

struct NewformAnalysis {
  RationalNewform form;
  DegreeResult degree;
  std::optional<Integer> r_f;
  std::optional<GapReport> gap;
};

struct LevelAnalysis {
  std::int64_t level = 0;
  int genus = 0;
  std::int64_t sturm = 0;
  std::vector<NewformAnalysis> forms;
};

/// Rational newforms at level N with degree and, if requested, r_f and the 2-adic gap.
LevelAnalysis analyze_level(std::int64_t level, bool with_congruence, unsigned workers = 1);

struct CurveAnalysis {
  CurveRecord record;
  RationalNewform form;
  DegreeResult degree;
  ComputedInputs computed;
};

/// Match the curve to its newform and compute degree, E(Q)[2] and optionally r_f.
CurveAnalysis analyze_curve(const CurveRecord& c, bool with_congruence);

struct NumericManin {
  PeriodLattice curve;
  NewformPeriods form;
  ManinConstantNumeric constant;
};

NumericManin numeric_manin(const CurveRecord& c, long double tol);

}  // namespace manin
