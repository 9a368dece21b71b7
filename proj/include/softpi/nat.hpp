#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace softpi {

// Exact unbounded naturals for all size, weight, and bound arithmetic.
using Nat = boost::multiprecision::cpp_int;

inline Nat nat_pow(const Nat& base, unsigned exponent) {
  Nat result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

inline Nat nat_max(const Nat& a, const Nat& b) { return a < b ? b : a; }

}  // namespace softpi
