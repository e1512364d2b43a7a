#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qmint {

// Element of GF(2^n), n <= 16. Bit i of the value is the coefficient of x^i,
// and the same little-endian convention maps elements to n-bit integers.
using FieldElement = std::uint32_t;

namespace detail {

// Degree of a polynomial over GF(2) given as a bit string; -1 for the zero
// polynomial.
inline int poly_degree(std::uint64_t p) { return p == 0 ? -1 : 63 - static_cast<int>(__builtin_clzll(p)); }

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = poly_degree(m);
  int da = poly_degree(a);
  while (da >= dm) {
    a ^= m << (da - dm);
    da = poly_degree(a);
  }
  return a;
}

inline std::uint64_t poly_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

// Brute-force irreducibility over GF(2): trial division by every polynomial
// of degree 1 .. deg(p)/2.
inline bool poly_irreducible(std::uint64_t p) {
  const int d = poly_degree(p);
  if (d < 1) return false;
  for (int dd = 1; dd <= d / 2; ++dd) {
    for (std::uint64_t q = std::uint64_t{1} << dd; q < (std::uint64_t{1} << (dd + 1)); ++q) {
      if (poly_mod(p, q) == 0) return false;
    }
  }
  return true;
}

}  // namespace detail

// GF(2^n) with the lexicographically smallest irreducible modulus of degree n
// (smallest as an integer under the little-endian bit convention).
class Field2n {
 public:
  explicit Field2n(int n) : n_(n) {
    if (n < 1 || n > 16) throw std::invalid_argument("Field2n: require 1 <= n <= 16");
    for (std::uint64_t p = std::uint64_t{1} << n; p < (std::uint64_t{1} << (n + 1)); ++p) {
      if (detail::poly_irreducible(p)) {
        modulus_ = p;
        break;
      }
    }
  }

  int degree() const { return n_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t order() const { return std::uint64_t{1} << n_; }
  FieldElement mask() const { return static_cast<FieldElement>(order() - 1); }

  FieldElement add(FieldElement a, FieldElement b) const { return a ^ b; }

  FieldElement mul(FieldElement a, FieldElement b) const {
    return static_cast<FieldElement>(detail::poly_mod(detail::poly_mul(a, b), modulus_));
  }

  FieldElement pow(FieldElement a, std::uint64_t e) const {
    FieldElement r = 1, base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  FieldElement inv(FieldElement a) const {
    if (a == 0) throw std::domain_error("Field2n::inv: division by zero");
    return pow(a, order() - 2);  // a^(2^n - 2)
  }

  // Horner evaluation of sum_i coeffs[i] x^i.
  FieldElement poly_eval(const std::vector<FieldElement>& coeffs, FieldElement x) const {
    FieldElement acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = add(mul(acc, x), *it);
    return acc;
  }

 private:
  int n_;
  std::uint64_t modulus_ = 0;
};

}  // namespace qmint
