#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace manin {

/// 2x2 integer matrix [[a, b], [c, d]].
struct Mat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

/// Element of P^1(Q) as a reduced fraction num/den with den >= 0; infinity is 1/0.
struct Cusp {
  std::int64_t num = 1;
  std::int64_t den = 0;

  static Cusp make(std::int64_t num, std::int64_t den);
  static Cusp infinity() { return {1, 0}; }
  bool is_infinity() const { return den == 0; }
  /// Image under the Moebius action of m.
  Cusp apply(const Mat2& m) const;
  bool operator==(const Cusp&) const = default;
};

/// Gamma0(N)-equivalence of cusps.
bool cusps_equivalent(const Cusp& x, const Cusp& y, std::int64_t level);

/// The projective line over Z/N, enumerated as canonical representatives of
/// pairs (c : d) with gcd(c, d, N) = 1 modulo scaling by units.
class P1List {
 public:
  explicit P1List(std::int64_t level);

  std::int64_t level() const { return level_; }
  std::size_t size() const { return elements_.size(); }
  const std::pair<std::int64_t, std::int64_t>& operator[](std::size_t i) const { return elements_[i]; }

  /// Index of the class of (c : d), or -1 when gcd(c, d, N) != 1.
  std::int64_t index(std::int64_t c, std::int64_t d) const;

  /// A matrix in SL2(Z) whose bottom row reduces to element i.
  Mat2 lift(std::size_t i) const;

 private:
  std::int64_t level_;
  std::vector<std::pair<std::int64_t, std::int64_t>> elements_;
  std::vector<std::int32_t> table_;  // (c * N + d) -> index or -1
};

/// Lift (c, d) with gcd(c, d, N) = 1 to an SL2(Z) matrix with bottom row congruent mod N.
Mat2 lift_to_sl2z(std::int64_t c, std::int64_t d, std::int64_t level);

/// Heilbronn matrices of determinant p (p prime), continued-fraction family.
std::vector<Mat2> heilbronn_cremona(std::int64_t p);
/// Heilbronn matrices of determinant n (any n >= 1).
std::vector<Mat2> heilbronn_merel(std::int64_t n);

}  // namespace manin
