#include "manin/elliptic.hpp"

#include <algorithm>
#include <stdexcept>

namespace manin {

namespace {

struct BInvariants {
  Rational b2, b4, b6, b8, c4, c6, delta;
};

template <typename T>
BInvariants b_invariants(const std::array<T, 5>& a) {
  BInvariants r;
  const Rational a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
  r.b2 = a1 * a1 + 4 * a2;
  r.b4 = 2 * a4 + a1 * a3;
  r.b6 = a3 * a3 + 4 * a6;
  r.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  r.c4 = r.b2 * r.b2 - 24 * r.b4;
  r.c6 = -r.b2 * r.b2 * r.b2 + 36 * r.b2 * r.b4 - 216 * r.b6;
  r.delta = -r.b2 * r.b2 * r.b8 - 8 * r.b4 * r.b4 * r.b4 - 27 * r.b6 * r.b6 + 9 * r.b2 * r.b4 * r.b6;
  return r;
}

Integer mod_floor(const Integer& a, long m) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
  return r;
}

Integer exact(const Integer& num, long den) {
  if (mod_floor(num, den) != 0) throw std::logic_error("minimal_model: inexact division in reconstruction");
  return num / den;
}

}  // namespace

WeierstrassModel WeierstrassModel::from_integers(const std::array<std::int64_t, 5>& ainvs) {
  WeierstrassModel w;
  for (int i = 0; i < 5; ++i) w.a[static_cast<std::size_t>(i)] = Rational(static_cast<long>(ainvs[static_cast<std::size_t>(i)]));
  return w;
}

Rational WeierstrassModel::discriminant() const { return b_invariants(a).delta; }
Rational WeierstrassModel::c4() const { return b_invariants(a).c4; }
Rational WeierstrassModel::c6() const { return b_invariants(a).c6; }

Integer MinimalModel::b8() const {
  return a[0] * a[0] * a[4] + 4 * a[1] * a[4] - a[0] * a[2] * a[3] + a[1] * a[2] * a[2] - a[3] * a[3];
}

std::string MinimalModel::ainvs_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < 5; ++i) s += (i ? "," : "") + a[i].get_str();
  return s + "]";
}

bool kraus_at_3(const Integer& c6) {
  const Integer r = mod_floor(c6, 27);
  return r != 9 && r != 18;
}

bool kraus_at_2(const Integer& c4, const Integer& c6) {
  if (mod_floor(c6, 4) == 3) return true;
  if (mod_floor(c4, 16) != 0) return false;
  const Integer r = mod_floor(c6, 32);
  return r == 0 || r == 8;
}

MinimalModel minimal_model(const WeierstrassModel& w) {
  const BInvariants inv = b_invariants(w.a);
  if (inv.delta == 0) throw SingularCurve("minimal_model: singular Weierstrass equation");

  // Integral model: scale by the common denominator of the a-invariants.
  Integer d = 1;
  for (const auto& x : w.a) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
  Integer d2 = d * d, d4 = d2 * d2, d6 = d4 * d2;
  Integer c4 = Rational(inv.c4 * d4).get_num();
  Integer c6 = Rational(inv.c6 * d6).get_num();

  // Remove every u with u^4 | c4, u^6 | c6 that Kraus' conditions permit; any such
  // prime satisfies p^12 | 1728 delta.
  const Integer delta = (c4 * c4 * c4 - c6 * c6) / 1728;
  Integer limit;
  mpz_root(limit.get_mpz_t(), Integer(abs(delta) * 1728).get_mpz_t(), 12);
  for (std::int64_t p : primes_up_to(limit.get_si() + 1)) {
    const Integer p4 = Integer(p) * p * p * p, p6 = p4 * p * p;
    for (;;) {
      if (c4 % p4 != 0 || c6 % p6 != 0) break;
      const Integer n4 = c4 / p4, n6 = c6 / p6;
      if ((n4 * n4 * n4 - n6 * n6) % 1728 != 0) break;
      if (p == 2 && !kraus_at_2(n4, n6)) break;
      if (p == 3 && !kraus_at_3(n6)) break;
      c4 = n4;
      c6 = n6;
    }
  }

  MinimalModel m;
  Integer b2 = mod_floor(-c6, 12);
  if (b2 > 6) b2 -= 12;
  const Integer b4 = exact(b2 * b2 - c4, 24);
  const Integer b6 = exact(-b2 * b2 * b2 + 36 * b2 * b4 - c6, 216);
  m.a[0] = mod_floor(b2, 2);
  m.a[2] = mod_floor(b6, 2);
  m.a[1] = exact(b2 - m.a[0], 4);
  m.a[3] = exact(b4 - m.a[0] * m.a[2], 2);
  m.a[4] = exact(b6 - m.a[2], 4);
  m.c4 = c4;
  m.c6 = c6;
  m.delta = (c4 * c4 * c4 - c6 * c6) / 1728;
  const BInvariants check = b_invariants(m.a);
  if (check.c4 != c4 || check.c6 != c6 || check.delta != m.delta)
    throw std::logic_error("minimal_model: reconstructed model does not reproduce c4, c6");
  return m;
}

std::vector<Integer> integer_roots_monic_cubic(const Integer& b, const Integer& c, const Integer& d) {
  auto f = [&](const Integer& x) -> Integer { return ((x + b) * x + c) * x + d; };
  // Critical points of f: 3x^2 + 2bx + c = 0; split the line into monotone pieces.
  std::vector<Integer> cuts;
  const Integer disc = b * b - 3 * c;
  if (disc > 0) {
    Integer s = sqrt(disc);
    cuts.push_back(Integer((-b - s) / 3) - 2);
    cuts.push_back(Integer((-b + s) / 3) + 2);
  }
  // Cauchy bound on the roots.
  Integer bound = 1 + abs(b) + abs(c) + abs(d);
  std::vector<Integer> edges{Integer(-bound)};
  for (auto& x : cuts) edges.push_back(x);
  edges.push_back(bound);
  std::vector<Integer> roots;
  auto add = [&](const Integer& x) {
    if (f(x) != 0) return;
    for (const auto& r : roots)
      if (r == x) return;
    roots.push_back(x);
  };
  // Scan the short windows around the critical points exhaustively.
  for (const auto& x : cuts)
    for (Integer t = x - 6; t <= x + 6; ++t) add(t);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Integer lo = edges[i], hi = edges[i + 1];
    if (lo > hi) continue;
    const int slo = sgn(f(lo)), shi = sgn(f(hi));
    if (slo == 0) add(lo);
    if (shi == 0) add(hi);
    if (slo == 0 || shi == 0 || slo == shi) continue;
    while (hi - lo > 1) {
      const Integer mid = (lo + hi) / 2;
      const int sm = sgn(f(mid));
      if (sm == 0) {
        lo = hi = mid;
        break;
      }
      if (sm == slo) lo = mid;
      else hi = mid;
    }
    add(lo);
    add(hi);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

int two_torsion_rank(const MinimalModel& m) {
  // X = 4x turns 4x^3 + b2 x^2 + 2 b4 x + b6 into (X^3 + b2 X^2 + 8 b4 X + 16 b6) / 16.
  const auto roots = integer_roots_monic_cubic(m.b2(), 8 * m.b4(), 16 * m.b6());
  if (roots.empty()) return 0;
  return roots.size() == 1 ? 1 : 2;
}

std::int64_t ap_via_counting(const MinimalModel& m, std::int64_t p) {
  if (p < 2 || !is_prime(p)) throw std::invalid_argument("ap_via_counting: p must be prime");
  if (m.delta % p == 0) throw std::invalid_argument("ap_via_counting: bad reduction at " + std::to_string(p));
  std::array<std::int64_t, 5> a{};
  for (std::size_t i = 0; i < 5; ++i) a[i] = mod_floor(m.a[i], p).get_si();
  if (p == 2) {
    std::int64_t count = 1;
    for (std::int64_t x = 0; x < 2; ++x)
      for (std::int64_t y = 0; y < 2; ++y) {
        const std::int64_t lhs = y * y + a[0] * x * y + a[2] * y;
        const std::int64_t rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
        if ((lhs - rhs) % 2 == 0) ++count;
      }
    return p + 1 - count;
  }
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
  const std::int64_t b2 = mod64(a[0] * a[0] + 4 * a[1], p), b4 = mod64(2 * a[3] + a[0] * a[2], p),
                     b6 = mod64(a[2] * a[2] + 4 * a[4], p);
  std::vector<signed char> chi(static_cast<std::size_t>(p), -1);
  chi[0] = 0;
  for (std::int64_t y = 1; y < p; ++y) chi[static_cast<std::size_t>((y * y) % p)] = 1;
  std::int64_t sum = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t v = ((((4 * x + b2) % p) * x % p + 2 * b4) % p * x % p + b6) % p;
    sum += chi[static_cast<std::size_t>(v)];
  }
  return -sum;
}

RationalNewform match_curve_to_newform(const MinimalModel& m, std::int64_t conductor,
                                              const std::vector<RationalNewform>& candidates) {
  const RationalNewform* found = nullptr;
  for (const auto& f : candidates) {
    if (f.level != conductor)
      throw std::invalid_argument("match_curve_to_newform: candidate level " + std::to_string(f.level) +
                                  " differs from conductor " + std::to_string(conductor));
    bool ok = true;
    for (const auto& [p, ap] : f.ap) {
      if (conductor % p == 0) continue;
      if (ap_via_counting(m, p) != ap) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (found) throw std::logic_error("match_curve_to_newform: several newforms match");
    found = &f;
  }
  if (!found) throw std::logic_error("match_curve_to_newform: no newform matches the curve");
  return *found;
}

}  // namespace manin
