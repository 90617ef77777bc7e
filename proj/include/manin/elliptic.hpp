#pragma once

#include "manin/integer.hpp"
#include "manin/newform.hpp"

#include <array>
#include <vector>

namespace manin {

struct WeierstrassModel {
  std::array<Rational, 5> a{};  ///< a1, a2, a3, a4, a6

  static WeierstrassModel from_integers(const std::array<std::int64_t, 5>& ainvs);
  Rational discriminant() const;
  Rational c4() const;
  Rational c6() const;
};

struct MinimalModel {
  std::array<Integer, 5> a{};  ///< a1, a2, a3, a4, a6 in reduced form
  Integer c4, c6, delta;

  Integer b2() const { return a[0] * a[0] + 4 * a[1]; }
  Integer b4() const { return 2 * a[3] + a[0] * a[2]; }
  Integer b6() const { return a[2] * a[2] + 4 * a[4]; }
  Integer b8() const;
  std::string ainvs_string() const;  ///< "[a1,a2,a3,a4,a6]"
};

class SingularCurve : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Global minimal model in reduced form (a1, a3 in {0,1}, a2 in {-1,0,1}).
MinimalModel minimal_model(const WeierstrassModel& w);

/// Kraus' conditions: (c4, c6) are the invariants of an integral model locally at p = 2 / p = 3.
bool kraus_at_2(const Integer& c4, const Integer& c6);
bool kraus_at_3(const Integer& c6);

/// 0, 1 or 2 according to the number (0, 1 or 3) of rational roots of 4x^3 + b2 x^2 + 2 b4 x + b6.
int two_torsion_rank(const MinimalModel& m);
/// Integer roots of a monic integer cubic x^3 + b x^2 + c x + d, found by exact sign bisection.
std::vector<Integer> integer_roots_monic_cubic(const Integer& b, const Integer& c, const Integer& d);

/// p + 1 - #E(F_p) for a prime of good reduction.
std::int64_t ap_via_counting(const MinimalModel& m, std::int64_t p);

/// The candidate whose a_p agree with point counts at every good p it carries.
RationalNewform match_curve_to_newform(const MinimalModel& m, std::int64_t conductor,
                                              const std::vector<RationalNewform>& candidates);

}  // namespace manin
