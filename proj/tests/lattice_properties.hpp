#pragma once

// Randomized lattice-core property checks shared by the unit tests and the
// acceptance binary. Each returns an empty string on success.

#include "manin/lattice.hpp"

#include <random>
#include <string>

namespace manin::props {

inline IntMatrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

inline IntMatrix random_unimodular(std::mt19937_64& rng, Eigen::Index n) {
  IntMatrix u = IntMatrix::Identity(n, n);
  std::uniform_int_distribution<int> idx(0, static_cast<int>(n) - 1), coef(-3, 3);
  for (int step = 0; step < 3 * n; ++step) {
    const int a = idx(rng), b = idx(rng);
    if (a == b) continue;
    u.row(a) += Integer(coef(rng)) * u.row(b);
  }
  return u;
}

#define MANIN_EXPECT(cond) \
  if (!(cond)) return "trial " + std::to_string(trial) + ": " #cond

inline std::string hnf_idempotence(int trials, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto r = static_cast<Eigen::Index>(1 + trial % 5), c = static_cast<Eigen::Index>(1 + (trial / 5) % 4);
    const auto m = random_matrix(rng, r, c, 9);
    const auto h = hnf(m);
    MANIN_EXPECT(hnf(h) == h);
    const auto l = Lattice::from_generators(h, c);
    for (Eigen::Index i = 0; i < r; ++i) MANIN_EXPECT(l.contains(IntRow(m.row(i))));
  }
  return {};
}

inline std::string snf_recomposition(int trials, std::uint64_t seed = 2) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto r = static_cast<Eigen::Index>(1 + trial % 4), c = static_cast<Eigen::Index>(1 + (trial / 4) % 4);
    const auto m = random_matrix(rng, r, c, 9);
    const auto s = snf(m);
    MANIN_EXPECT(s.u * m * s.v == s.d);
    MANIN_EXPECT(abs(determinant(s.u)) == 1);
    MANIN_EXPECT(abs(determinant(s.v)) == 1);
    const auto n = std::min(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j)
        if (i != j) MANIN_EXPECT(s.d(i, j) == 0);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      MANIN_EXPECT(s.d(i, i) >= 0);
      if (s.d(i, i) != 0) {
        MANIN_EXPECT(s.d(i + 1, i + 1) % s.d(i, i) == 0);
      } else {
        MANIN_EXPECT(s.d(i + 1, i + 1) == 0);
      }
    }
  }
  return {};
}

inline std::string quotient_order_invariance(int trials, std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    IntMatrix sup_gen = random_matrix(rng, n, n, 5);
    while (determinant(sup_gen) == 0) sup_gen = random_matrix(rng, n, n, 5);
    const auto inner = random_matrix(rng, n, n, 4);
    const auto sup = Lattice::from_generators(sup_gen);
    const auto sub = Lattice::from_generators(inner * sup_gen, n);
    const auto q = quotient_order(sup, sub);
    const Integer det = abs(determinant(inner));
    if (det == 0) {
      MANIN_EXPECT(q.infinite());
      continue;
    }
    MANIN_EXPECT(!q.infinite() && *q.value == det);
    const auto sup2 = Lattice::from_generators(random_unimodular(rng, n) * sup.basis(), n);
    const auto sub2 = Lattice::from_generators(random_unimodular(rng, n) * sub.basis(), n);
    MANIN_EXPECT(*quotient_order(sup2, sub2).value == det);
    Integer prod = 1;
    for (const auto& d : elementary_divisors(sup.coordinates(sub.basis()))) prod *= d;
    MANIN_EXPECT(prod == det);
  }
  return {};
}

inline std::string saturation_and_second_isomorphism(int trials, std::uint64_t seed = 4) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const auto a = Lattice::from_generators(random_matrix(rng, 1 + trial % n, n, 6), n);
    const auto sat = saturate(a);
    MANIN_EXPECT(sat.contains(a));
    Integer prod = 1;
    for (const auto& d : elementary_divisors(a.basis())) prod *= d;
    MANIN_EXPECT(*quotient_order(sat, a).value == prod);

    const auto b = Lattice::from_generators(random_matrix(rng, 1 + (trial / 3) % n, n, 6), n);
    const auto s = lattice_sum(a, b);
    const auto i = lattice_intersect(a, b);
    MANIN_EXPECT(s.contains(a) && s.contains(b) && a.contains(i) && b.contains(i));
    const auto lhs = quotient_order(s, b);
    const auto rhs = quotient_order(a, i);
    MANIN_EXPECT(lhs.infinite() == rhs.infinite());
    if (!lhs.infinite()) MANIN_EXPECT(*lhs.value == *rhs.value);
  }
  return {};
}

#undef MANIN_EXPECT

}  // namespace manin::props
