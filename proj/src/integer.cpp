#include "manin/integer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace manin {

Factorization factor(std::int64_t n) {
  if (n == 0) throw std::domain_error("factor: zero has no factorization");
  if (n < 0) n = -n;
  Factorization out;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

Factorization factor(const Integer& value) {
  if (value == 0) throw std::domain_error("factor: zero has no factorization");
  Integer n = abs(value);
  Factorization out;
  constexpr std::int64_t kTrialLimit = 10'000'000;
  for (std::int64_t p = 2; p <= kTrialLimit && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    if (!mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) {
    if (!n.fits_slong_p() || mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw std::runtime_error("factor: cofactor too large for trial division");
    out.emplace_back(n.get_si(), 1);
  }
  return out;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (auto [p, e] : factor(n)) out.push_back(p);
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (auto [p, e] : factor(n)) {
    const std::size_t count = out.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < count; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
  std::vector<std::int64_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound + 1), false);
  for (std::int64_t i = 2; i <= bound; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= bound; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

int valuation(const Integer& n, std::int64_t p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  Integer m = n;
  int v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    m /= p;
    ++v;
  }
  return v;
}

int valuation(std::int64_t n, std::int64_t p) { return valuation(Integer(static_cast<long>(n)), p); }

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

std::int64_t xgcd64(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
  std::int64_t old_r = a, r = b, old_s = 1, ss = 0, old_t = 0, tt = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * ss;
    old_s = ss;
    ss = tmp;
    tmp = old_t - q * tt;
    old_t = tt;
    tt = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

std::int64_t mod64(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t s = 0, t = 0;
  if (xgcd64(mod64(a, m), m, s, t) != 1) throw std::domain_error("inverse_mod: not a unit");
  return mod64(s, m);
}

std::int64_t gamma0_index(std::int64_t n) {
  if (n < 1) throw std::domain_error("gamma0_index: level must be positive");
  std::int64_t index = n;
  for (auto p : prime_divisors(n)) index = index / p * (p + 1);
  return index;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (auto p : prime_divisors(n)) phi = phi / p * (p - 1);
  return phi;
}

namespace {

int kronecker_minus_one(std::int64_t p) {
  if (p == 2) return 0;
  return p % 4 == 1 ? 1 : -1;
}

int kronecker_minus_three(std::int64_t p) {
  if (p == 3) return 0;
  return p % 3 == 1 ? 1 : -1;
}

}  // namespace

int cusp_count_x0(std::int64_t n) {
  int count = 0;
  for (auto d : divisors(n)) count += static_cast<int>(euler_phi(gcd64(d, n / d)));
  return count;
}

int genus_x0(std::int64_t n) {
  const std::int64_t mu = gamma0_index(n);
  std::int64_t nu2 = 0, nu3 = 0;
  if (n % 4 != 0) {
    nu2 = 1;
    for (auto p : prime_divisors(n)) nu2 *= 1 + kronecker_minus_one(p);
  }
  if (n % 9 != 0) {
    nu3 = 1;
    for (auto p : prime_divisors(n)) nu3 *= 1 + kronecker_minus_three(p);
  }
  // 12g = 12 + mu - 3 nu2 - 4 nu3 - 6 c
  const std::int64_t twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusp_count_x0(n);
  return static_cast<int>(twelve_g / 12);
}

bool is_perfect_square(const Integer& n, Integer* root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root != nullptr) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
  return true;
}

std::int64_t to_int64(const Integer& n) {
  if (!n.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return n.get_si();
}

Integer common_denominator(const RatMatrix& m) {
  Integer d = 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m(i, j).get_den_mpz_t());
  return d;
}

IntMatrix clear_denominators(const RatMatrix& m, Integer* denominator) {
  const Integer d = common_denominator(m);
  IntMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_num() * (d / m(i, j).get_den());
  if (denominator != nullptr) *denominator = d;
  return out;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace manin
