#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "qmint/dense_state.hpp"
#include "qmint/rng.hpp"

namespace qmint {

// Signed n-qubit Pauli operator (-1)^sign P_1 x ... x P_n with n <= 64.
// Qubit k is encoded by (x bit, z bit): 00 = I, 10 = X, 01 = Z, 11 = Y,
// where the Y for bits (1,1) is the Hermitian Pauli matrix, not X Z.
struct SignedPauli {
  int n = 0;
  std::uint64_t x_bits = 0;
  std::uint64_t z_bits = 0;
  bool negative = false;

  static SignedPauli identity(int n) { return {n, 0, 0, false}; }

  static std::uint64_t qubit_mask(int n) { return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

  // Uniform over all 2 * 4^n signed Paulis (identity included).
  static SignedPauli uniform(int n, Rng& rng) {
    const std::uint64_t mask = qubit_mask(n);
    return {n, rng.next_u64() & mask, rng.next_u64() & mask, rng.next_bool()};
  }

  static SignedPauli single_x(int n, int q) { return {n, std::uint64_t{1} << q, 0, false}; }
  static SignedPauli single_z(int n, int q) { return {n, 0, std::uint64_t{1} << q, false}; }
  static SignedPauli single_y(int n, int q) {
    return {n, std::uint64_t{1} << q, std::uint64_t{1} << q, false};
  }

  bool is_identity_part() const { return x_bits == 0 && z_bits == 0; }

  bool operator==(const SignedPauli& other) const = default;

  // Symplectic product: 0 iff the operators commute.
  bool commutes_with(const SignedPauli& other) const {
    if (n != other.n) throw std::invalid_argument("SignedPauli: size mismatch");
    const std::uint64_t acc = (x_bits & other.z_bits) ^ (z_bits & other.x_bits);
    return (std::popcount(acc) & 1) == 0;
  }

  // Product of two commuting signed Paulis. For commuting operands the
  // accumulated power of i is even, so the result is again a real-signed
  // Pauli. The per-qubit exponent of i follows the cyclic rule
  // (X Y = iZ, Y Z = iX, Z X = iY, reversed order negates).
  SignedPauli times(const SignedPauli& other) const {
    if (n != other.n) throw std::invalid_argument("SignedPauli: size mismatch");
    const std::uint64_t x1 = x_bits, z1 = z_bits, x2 = other.x_bits, z2 = other.z_bits;
    const int plus = std::popcount(x1 & ~z1 & x2 & z2)    // X * Y
                     + std::popcount(x1 & z1 & ~x2 & z2)  // Y * Z
                     + std::popcount(~x1 & z1 & x2 & ~z2);  // Z * X
    const int minus = std::popcount(x1 & z1 & x2 & ~z2)     // Y * X
                      + std::popcount(~x1 & z1 & x2 & z2)   // Z * Y
                      + std::popcount(x1 & ~z1 & ~x2 & z2);  // X * Z
    const int phase = ((plus - minus) % 4 + 4) % 4;  // power of i
    if (phase & 1) throw std::logic_error("SignedPauli::times: anticommuting product");
    SignedPauli out;
    out.n = n;
    out.x_bits = x1 ^ x2;
    out.z_bits = z1 ^ z2;
    out.negative = negative ^ other.negative ^ (phase == 2);
    return out;
  }

  SignedPauli negated() const { return {n, x_bits, z_bits, !negative}; }

  // Dense action, usable for n <= 22. Per qubit: X|b> = |1-b>, Z|b> = (-1)^b|b>,
  // Y|b> = i(-1)^b |1-b>, so E|a> = (-1)^sign i^{|Y|} (-1)^{z.a} |a xor x>.
  DenseState apply_to(const DenseState& s) const {
    if (s.num_qubits() != n) throw std::invalid_argument("SignedPauli::apply_to: dimension mismatch");
    const int y_count = std::popcount(x_bits & z_bits) % 4;
    static const cplx i_pow[4] = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
    cplx base = i_pow[y_count];
    if (negative) base = -base;
    std::vector<cplx> amps(s.dim());
    for (std::uint64_t a = 0; a < s.dim(); ++a) {
      const bool flip = std::popcount(z_bits & a) & 1;
      amps[a ^ x_bits] = (flip ? -base : base) * s.amp(a);
    }
    return DenseState::from_amplitudes(n, std::move(amps));
  }
};

}  // namespace qmint
