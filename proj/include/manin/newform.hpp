#pragma once

#include "manin/lattice.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace manin {

/// Weight-2 newform with rational Hecke eigenvalues on Gamma0(N).
struct RationalNewform {
  std::int64_t level = 0;
  int index = 0;                          ///< position in the canonical order at this level
  std::map<std::int64_t, std::int64_t> ap;  ///< primes up to the Sturm bound
  Lattice eigenspace;                     ///< rank 2, saturated, in L coordinates
  std::map<std::int64_t, int> sign_w;     ///< q^e || N -> Atkin-Lehner eigenvalue

  /// Class letter in the canonical order: a, b, ..., z, ba, bb, ...
  std::string letter() const;
  std::string id() const { return std::to_string(level) + "." + letter(); }
};

}  // namespace manin
