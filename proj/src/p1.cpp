#include "manin/p1.hpp"

#include "manin/integer.hpp"

#include <cmath>
#include <stdexcept>

namespace manin {

Cusp Cusp::make(std::int64_t num, std::int64_t den) {
  if (num == 0 && den == 0) throw std::domain_error("cusp 0/0");
  if (den == 0) return infinity();
  const std::int64_t g = gcd64(num, den);
  num /= g;
  den /= g;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return {num, den};
}

Cusp Cusp::apply(const Mat2& m) const { return make(m.a * num + m.b * den, m.c * num + m.d * den); }

bool cusps_equivalent(const Cusp& x, const Cusp& y, std::int64_t level) {
  // s_i with p_i s_i == 1 (mod q_i); for q = 0 the cusp is 1/0 and s = 1.
  auto s_of = [](const Cusp& z) { return z.den == 0 ? std::int64_t{1} : inverse_mod(z.num, z.den); };
  const std::int64_t m = gcd64(x.den * y.den, level);
  if (m == 1) return true;
  const __int128 lhs = static_cast<__int128>(s_of(x)) * y.den - static_cast<__int128>(s_of(y)) * x.den;
  return lhs % m == 0;
}

P1List::P1List(std::int64_t level) : level_(level) {
  if (level < 1) throw std::domain_error("P1List: level must be positive");
  const std::int64_t n = level;
  table_.assign(static_cast<std::size_t>(n * n), -1);
  std::vector<std::int64_t> units;
  for (std::int64_t u = 1; u <= n; ++u)
    if (gcd64(u, n) == 1) units.push_back(u % n);
  for (std::int64_t c = 0; c < n; ++c) {
    for (std::int64_t d = 0; d < n; ++d) {
      if (table_[static_cast<std::size_t>(c * n + d)] >= 0) continue;
      if (gcd64(gcd64(c, d), n) != 1) continue;
      const auto idx = static_cast<std::int32_t>(elements_.size());
      elements_.emplace_back(c, d);
      for (auto u : units) table_[static_cast<std::size_t>(((u * c) % n) * n + (u * d) % n)] = idx;
    }
  }
  if (static_cast<std::int64_t>(elements_.size()) != gamma0_index(n))
    throw std::logic_error("P1List: element count does not match index of Gamma0(N)");
}

std::int64_t P1List::index(std::int64_t c, std::int64_t d) const {
  const std::int64_t n = level_;
  return table_[static_cast<std::size_t>(mod64(c, n) * n + mod64(d, n))];
}

Mat2 P1List::lift(std::size_t i) const { return lift_to_sl2z(elements_[i].first, elements_[i].second, level_); }

Mat2 lift_to_sl2z(std::int64_t c, std::int64_t d, std::int64_t level) {
  if (level == 1) return {1, 0, 0, 1};
  c = mod64(c, level);
  d = mod64(d, level);
  const std::int64_t cc = c == 0 ? level : c;
  std::int64_t dd = d;
  for (int t = 0;; ++t) {
    if (gcd64(cc, dd) == 1) break;
    dd += level;
    if (t > 100000) throw std::logic_error("lift_to_sl2z: no coprime lift found");
  }
  std::int64_t s = 0, t = 0;
  xgcd64(dd, cc, s, t);  // s*dd + t*cc = 1
  return {s, -t, cc, dd};
}

std::vector<Mat2> heilbronn_cremona(std::int64_t p) {
  if (p == 2) return {{1, 0, 0, 2}, {2, 0, 0, 1}, {2, 1, 0, 1}, {1, 0, 1, 2}};
  std::vector<Mat2> out;
  out.push_back({1, 0, 0, p});
  for (std::int64_t r = -(p - 1) / 2; r <= (p - 1) / 2; ++r) {
    std::int64_t x1 = p, x2 = -r, y1 = 0, y2 = 1, a = -p, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      const std::int64_t q = static_cast<std::int64_t>(std::llround(static_cast<double>(a) / static_cast<double>(b)));
      const std::int64_t c = a - b * q;
      a = -b;
      b = c;
      const std::int64_t x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      const std::int64_t y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

std::vector<Mat2> heilbronn_merel(std::int64_t n) {
  std::vector<Mat2> out;
  for (std::int64_t a = 1; a <= n; ++a) {
    const std::int64_t q = n / a;
    if (q * a == n) {
      const std::int64_t d = q;
      for (std::int64_t b = 0; b < a; ++b) out.push_back({a, b, 0, d});
      for (std::int64_t c = 1; c < d; ++c) out.push_back({a, 0, c, d});
    }
    for (std::int64_t d = q + 1; d <= n; ++d) {
      const std::int64_t bc = a * d - n;
      for (std::int64_t c = bc / a + 1; c < d; ++c)
        if (bc % c == 0) out.push_back({a, bc / c, c, d});
    }
  }
  return out;
}

}  // namespace manin
