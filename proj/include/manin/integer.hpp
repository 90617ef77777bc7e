#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpq_class;
  using Nested = mpz_class;
  using Literal = mpz_class;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 8,
    MulCost = 16
  };
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = mpq_class;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 16,
    MulCost = 32
  };
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace manin {

using Integer = mpz_class;
using Rational = mpq_class;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using IntRow = RowVector<Integer>;
using RatRow = RowVector<Rational>;

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
using Factorization = std::vector<std::pair<std::int64_t, int>>;

Factorization factor(std::int64_t n);
Factorization factor(const Integer& n);  // trial division; intended for small cofactors
std::vector<std::int64_t> prime_divisors(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t bound);
bool is_prime(std::int64_t n);

/// Exponent of p in n; n must be nonzero.
int valuation(const Integer& n, std::int64_t p);
int valuation(std::int64_t n, std::int64_t p);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
/// Extended gcd: returns g >= 0 with s*a + t*b = g.
std::int64_t xgcd64(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t);
std::int64_t mod64(std::int64_t a, std::int64_t m);
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

/// Index of Gamma0(N) in SL2(Z): N * prod_{p | N} (1 + 1/p).
std::int64_t gamma0_index(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);
/// Genus of X0(N) from the standard formula.
int genus_x0(std::int64_t n);
int cusp_count_x0(std::int64_t n);

bool is_perfect_square(const Integer& n, Integer* root = nullptr);
std::int64_t to_int64(const Integer& n);

/// Common denominator of a rational matrix, and the integer matrix it scales to.
Integer common_denominator(const RatMatrix& m);
IntMatrix clear_denominators(const RatMatrix& m, Integer* denominator = nullptr);
RatMatrix to_rational(const IntMatrix& m);

std::string to_string(const IntMatrix& m);

}  // namespace manin
