#pragma once

#include "manin/elliptic.hpp"
#include "manin/hecke_forms.hpp"

#include <complex>

namespace manin {

using Complex = std::complex<long double>;

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PeriodLattice {
  Complex omega1;  ///< positive real generator of the real sublattice
  Complex omega2;  ///< i*y (rectangular) or omega1/2 + i*y (non-rectangular), y > 0
  bool rectangular = true;
  long double precision = 0;

  long double covolume() const { return std::abs(omega1.real() * omega2.imag() - omega1.imag() * omega2.real()); }
};

/// Normalize any basis of a conjugation-stable lattice to the (real, upper) form above.
PeriodLattice normalize_lattice(Complex w1, Complex w2, long double precision);

/// (g2, g3) of the lattice from Eisenstein series.
std::pair<Complex, Complex> lattice_invariants(const PeriodLattice& l);

PeriodLattice elliptic_period_lattice(const MinimalModel& m, long double tol);

struct NewformPeriods {
  PeriodLattice lattice;
  std::int64_t terms = 0;     ///< q-series terms used
  long double min_imag = 0;   ///< smallest imaginary part of an evaluation point
};

/// Default hard cap on q-series terms.
inline constexpr std::int64_t kMaxSeriesTerms = 2'000'000;

/// Periods of 2 pi i f(tau) dtau over generators of L / (L cap V_f^perp).
/// `terms_scale` multiplies the term count (used for the convergence check).
NewformPeriods newform_period_lattice(const ModSymSpace& s, const RationalNewform& f, const EigenData& e, long double tol,
                                      double terms_scale = 1.0, std::int64_t term_cap = kMaxSeriesTerms);

NewformPeriods newform_period_lattice(const ModSymSpace& s, const RationalNewform& f, long double tol);

struct ManinConstantNumeric {
  Integer value = 0;        ///< nearest integer, |c_pi|
  long double ratio = 0;    ///< sqrt(covol(E) / covol(f))
  long double residual = 0; ///< max deviation from an exact integral homothety
};

class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |c| with Lambda_E = c Lambda_f; throws InconsistencyError if not integral within tol.
ManinConstantNumeric manin_constant_numeric(const PeriodLattice& e, const PeriodLattice& f, long double tol);

}  // namespace manin
