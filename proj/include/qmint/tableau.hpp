#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qmint/bitmatrix.hpp"
#include "qmint/pauli.hpp"

namespace qmint {

// Outcome of a Pauli measurement on a stabilizer state.
struct PauliMeasurement {
  int outcome = +1;          // +1 or -1
  bool deterministic = false;
};

// n-qubit stabilizer state stored as n signed Pauli generator rows.
// Invariants: rows pairwise commute, their (x|z) vectors are independent
// (rank n over GF(2)), and the generated group does not contain -I (which
// independence already guarantees).
class StabilizerTableau {
 public:
  StabilizerTableau() = default;

  explicit StabilizerTableau(int n, std::vector<SignedPauli> rows) : n_(n), rows_(std::move(rows)) {
    if (!is_valid()) throw std::invalid_argument("StabilizerTableau: invalid generator set");
  }

  // |0...0>, stabilized by Z_0 .. Z_{n-1}.
  static StabilizerTableau zero_state(int n) {
    check_n(n);
    std::vector<SignedPauli> rows;
    rows.reserve(n);
    for (int q = 0; q < n; ++q) rows.push_back(SignedPauli::single_z(n, q));
    StabilizerTableau t;
    t.n_ = n;
    t.rows_ = std::move(rows);
    return t;
  }

  // Uniformly random stabilizer state. Generators are sampled sequentially:
  // each new row is uniform over the signed Paulis that commute with and are
  // independent of the rows so far. The number of valid choices at step k
  // depends only on k, so every ordered generating sequence of every
  // stabilizer group is equally likely, which makes the state uniform.
  static StabilizerTableau random(int n, Rng& rng) { return complete_from_rows(n, {}, rng); }

  // Uniformly random completion of a pairwise-commuting independent seed set
  // to a full n-row tableau.
  static StabilizerTableau complete_from_rows(int n, std::vector<SignedPauli> seed, Rng& rng) {
    check_n(n);
    for (std::size_t i = 0; i < seed.size(); ++i) {
      if (seed[i].n != n) throw std::invalid_argument("complete_from_rows: row size mismatch");
      for (std::size_t j = i + 1; j < seed.size(); ++j)
        if (!seed[i].commutes_with(seed[j]))
          throw std::invalid_argument("complete_from_rows: seed rows must commute");
    }
    std::vector<SignedPauli> rows = std::move(seed);
    // Echelon basis of the unsigned row space, for independence tests.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> basis;  // reduced (x, z) vectors
    auto reduce = [&](std::uint64_t x, std::uint64_t z) {
      for (const auto& [bx, bz] : basis) {
        const int pb = pivot_bit(bx, bz);
        if (pb >= 0 && bit_at(x, z, pb)) {
          x ^= bx;
          z ^= bz;
        }
      }
      return std::pair{x, z};
    };
    for (const auto& r : rows) {
      auto [x, z] = reduce(r.x_bits, r.z_bits);
      if (x == 0 && z == 0) throw std::invalid_argument("complete_from_rows: seed rows must be independent");
      basis.emplace_back(x, z);
    }

    while (static_cast<int>(rows.size()) < n) {
      // Nullspace of the symplectic constraints against the current rows.
      const std::size_t k = rows.size();
      BitMatrix a(k, 2 * static_cast<std::size_t>(n));
      for (std::size_t j = 0; j < k; ++j) {
        for (int b = 0; b < n; ++b) {
          a.set(j, b, (rows[j].z_bits >> b) & 1);       // pairs with candidate x
          a.set(j, n + b, (rows[j].x_bits >> b) & 1);   // pairs with candidate z
        }
      }
      const auto sol = gf2_solve(a, BitVec(k));
      const auto& null_basis = sol->nullspace;  // dimension 2n - k
      while (true) {
        std::uint64_t x = 0, z = 0;
        for (const auto& v : null_basis) {
          if (!rng.next_bool()) continue;
          for (int b = 0; b < n; ++b) {
            if (v.get(b)) x ^= std::uint64_t{1} << b;
            if (v.get(n + b)) z ^= std::uint64_t{1} << b;
          }
        }
        auto [rx, rz] = reduce(x, z);
        if (rx == 0 && rz == 0) continue;  // zero or dependent: resample
        rows.push_back(SignedPauli{n, x, z, rng.next_bool()});
        basis.emplace_back(rx, rz);
        break;
      }
    }
    StabilizerTableau t;
    t.n_ = n;
    t.rows_ = std::move(rows);
    return t;
  }

  int num_qubits() const { return n_; }
  const std::vector<SignedPauli>& rows() const { return rows_; }

  bool is_valid() const {
    if (static_cast<int>(rows_.size()) != n_ || n_ < 1 || n_ > 64) return false;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].n != n_) return false;
      for (std::size_t j = i + 1; j < rows_.size(); ++j)
        if (!rows_[i].commutes_with(rows_[j])) return false;
    }
    return unsigned_rank() == n_;
  }

  // Uniform over the 2^n group elements: random subset product of the rows.
  SignedPauli random_group_element(Rng& rng) const {
    SignedPauli acc = SignedPauli::identity(n_);
    const std::uint64_t subset = rng.next_u64() & SignedPauli::qubit_mask(n_);
    for (int i = 0; i < n_; ++i)
      if ((subset >> i) & 1) acc = acc.times(rows_[i]);
    return acc;
  }

  // If measuring p on this state is deterministic, returns +1 or -1;
  // otherwise nullopt. The state is never modified.
  std::optional<int> deterministic_sign(const SignedPauli& p) const {
    if (p.n != n_) throw std::invalid_argument("deterministic_sign: size mismatch");
    for (const auto& r : rows_)
      if (!p.commutes_with(r)) return std::nullopt;
    // p commutes with the whole group, so its unsigned part lies in the row
    // space; recover the subset product and compare signs.
    BitMatrix a(2 * static_cast<std::size_t>(n_), rows_.size());
    for (std::size_t j = 0; j < rows_.size(); ++j) {
      for (int b = 0; b < n_; ++b) {
        a.set(b, j, (rows_[j].x_bits >> b) & 1);
        a.set(n_ + b, j, (rows_[j].z_bits >> b) & 1);
      }
    }
    BitVec rhs(2 * static_cast<std::size_t>(n_));
    for (int b = 0; b < n_; ++b) {
      rhs.set(b, (p.x_bits >> b) & 1);
      rhs.set(n_ + b, (p.z_bits >> b) & 1);
    }
    const auto sol = gf2_solve(a, rhs);
    if (!sol) throw std::logic_error("deterministic_sign: commuting Pauli outside row space");
    SignedPauli prod = SignedPauli::identity(n_);
    for (std::size_t j = 0; j < rows_.size(); ++j)
      if (sol->particular.get(j)) prod = prod.times(rows_[j]);
    return prod.negative == p.negative ? +1 : -1;
  }

  // Measure the observable p. Deterministic outcomes leave the state
  // unchanged; otherwise the outcome is a fair coin and the tableau is
  // updated so the post-state is stabilized by (outcome-signed) p.
  PauliMeasurement measure_inplace(const SignedPauli& p, Rng& rng) {
    if (p.n != n_) throw std::invalid_argument("measure: size mismatch");
    std::vector<std::size_t> anti;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!rows_[i].commutes_with(p)) anti.push_back(i);
    if (anti.empty()) {
      const auto sign = deterministic_sign(p);
      return {*sign, true};
    }
    const int outcome = rng.next_bool() ? +1 : -1;
    const std::size_t a = anti.front();
    const SignedPauli pivot = rows_[a];
    for (std::size_t idx = 1; idx < anti.size(); ++idx) rows_[anti[idx]] = rows_[anti[idx]].times(pivot);
    rows_[a] = outcome > 0 ? p : p.negated();
    return {outcome, false};
  }

  std::pair<PauliMeasurement, StabilizerTableau> measure(const SignedPauli& p, Rng& rng) const {
    StabilizerTableau post = *this;
    const auto m = post.measure_inplace(p, rng);
    return {m, std::move(post)};
  }

  // Row-reduced echelon form over the (x | z) representation, x block first,
  // signs carried by the row products. Two tableaux generate the same group
  // iff their canonical forms are identical.
  StabilizerTableau canonical() const {
    std::vector<SignedPauli> rows = rows_;
    std::size_t rank = 0;
    for (int col = 0; col < 2 * n_ && rank < rows.size(); ++col) {
      const auto bit = [&](const SignedPauli& r) {
        return col < n_ ? ((r.x_bits >> col) & 1) : ((r.z_bits >> (col - n_)) & 1);
      };
      std::size_t pivot = rows.size();
      for (std::size_t r = rank; r < rows.size(); ++r)
        if (bit(rows[r])) {
          pivot = r;
          break;
        }
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (r != rank && bit(rows[r])) rows[r] = rows[r].times(rows[rank]);
      ++rank;
    }
    StabilizerTableau t;
    t.n_ = n_;
    t.rows_ = std::move(rows);
    return t;
  }

  bool same_state_as(const StabilizerTableau& other) const {
    return canonical().rows_ == other.canonical().rows_;
  }

  // Dense vector carrying the simultaneous +1 eigenstate of all generators.
  // Finds a basis state b with nonzero overlap from the diagonal subgroup,
  // then applies prod_k (I + g_k).
  DenseState to_statevector() const {
    if (n_ > 12) throw std::invalid_argument("to_statevector: n too large");
    // Subset products with zero x part: left nullspace of the x-bit matrix.
    BitMatrix xt(static_cast<std::size_t>(n_), rows_.size());
    for (std::size_t j = 0; j < rows_.size(); ++j)
      for (int b = 0; b < n_; ++b) xt.set(b, j, (rows_[j].x_bits >> b) & 1);
    const auto sub = gf2_solve(xt, BitVec(static_cast<std::size_t>(n_)));
    std::vector<SignedPauli> diagonal;
    for (const auto& subset : sub->nullspace) {
      SignedPauli prod = SignedPauli::identity(n_);
      for (std::size_t j = 0; j < rows_.size(); ++j)
        if (subset.get(j)) prod = prod.times(rows_[j]);
      diagonal.push_back(prod);
    }
    // Solve z.b = sign for every diagonal element so that <b|P|b> > 0.
    BitMatrix zc(diagonal.size(), static_cast<std::size_t>(n_));
    BitVec rhs(diagonal.size());
    for (std::size_t i = 0; i < diagonal.size(); ++i) {
      for (int b = 0; b < n_; ++b) zc.set(i, b, (diagonal[i].z_bits >> b) & 1);
      rhs.set(i, diagonal[i].negative);
    }
    const auto bsol = gf2_solve(zc, rhs);
    if (!bsol) throw std::logic_error("to_statevector: no supported basis state (invalid tableau)");
    std::uint64_t b = 0;
    for (int q = 0; q < n_; ++q)
      if (bsol->particular.get(q)) b |= std::uint64_t{1} << q;

    DenseState v = DenseState::basis(n_, b);
    for (const auto& g : rows_) {
      const DenseState gv = g.apply_to(v);
      std::vector<cplx> amps(v.dim());
      for (std::uint64_t i = 0; i < v.dim(); ++i) amps[i] = v.amp(i) + gv.amp(i);
      v = DenseState::from_amplitudes(n_, std::move(amps));
    }
    return v;
  }

 private:
  static void check_n(int n) {
    if (n < 1 || n > 64) throw std::invalid_argument("StabilizerTableau: require 1 <= n <= 64");
  }

  static int pivot_bit(std::uint64_t x, std::uint64_t z) {
    if (x) return std::countr_zero(x);
    if (z) return 64 + std::countr_zero(z);
    return -1;
  }
  static bool bit_at(std::uint64_t x, std::uint64_t z, int pb) {
    return pb < 64 ? ((x >> pb) & 1) : ((z >> (pb - 64)) & 1);
  }

  int unsigned_rank() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> basis;
    for (const auto& r : rows_) {
      std::uint64_t x = r.x_bits, z = r.z_bits;
      for (const auto& [bx, bz] : basis) {
        const int pb = pivot_bit(bx, bz);
        if (pb >= 0 && bit_at(x, z, pb)) {
          x ^= bx;
          z ^= bz;
        }
      }
      if (x || z) basis.emplace_back(x, z);
    }
    return static_cast<int>(basis.size());
  }

  int n_ = 0;
  std::vector<SignedPauli> rows_;
};

}  // namespace qmint
