#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qmint/rng.hpp"

namespace qmint {

// Bit vector over GF(2), packed into 64-bit words (bit i of word i/64).
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::size_t i, bool v) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void xor_with(const BitVec& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  }

  bool dot(const BitVec& other) const {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
  }

  bool is_zero() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  bool operator==(const BitVec& other) const { return size_ == other.size_ && words_ == other.words_; }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  static BitVec random(std::size_t size, Rng& rng) {
    BitVec v(size);
    for (auto& w : v.words_) w = rng.next_u64();
    v.mask_tail();
    return v;
  }

  void mask_tail() {
    const std::size_t rem = size_ & 63;
    if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Dense bit matrix over GF(2), row-major packed rows. Row operations are
// word-parallel, which is what makes the elimination-heavy callers cheap.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    wpr_ = (cols + 63) / 64;
    if (wpr_ == 0) wpr_ = 1;
    words_.assign(rows * wpr_, 0);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return (words_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1; }

  void set(std::size_t r, std::size_t c, bool v) {
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    if (v)
      words_[r * wpr_ + (c >> 6)] |= mask;
    else
      words_[r * wpr_ + (c >> 6)] &= ~mask;
  }

  void xor_row(std::size_t dst, std::size_t src) {
    auto* d = &words_[dst * wpr_];
    const auto* s = &words_[src * wpr_];
    for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t w = 0; w < wpr_; ++w) std::swap(words_[a * wpr_ + w], words_[b * wpr_ + w]);
  }

  BitVec row(std::size_t r) const {
    BitVec v(cols_);
    for (std::size_t w = 0; w < wpr_ && w < v.words().size(); ++w) v.words()[w] = words_[r * wpr_ + w];
    v.mask_tail();
    return v;
  }

  void set_row(std::size_t r, const BitVec& v) {
    for (std::size_t w = 0; w < wpr_; ++w) words_[r * wpr_ + w] = w < v.words().size() ? v.words()[w] : 0;
  }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (get(r, c)) t.set(c, r, true);
    return t;
  }

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static BitMatrix random(std::size_t rows, std::size_t cols, Rng& rng) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) m.set_row(r, BitVec::random(cols, rng));
    return m;
  }

  BitVec multiply(const BitVec& x) const {
    if (x.size() != cols_) throw std::invalid_argument("BitMatrix::multiply: dimension mismatch");
    BitVec y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) y.set(r, row(r).dot(x));
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t wpr_ = 1;
  std::vector<std::uint64_t> words_;
};

inline int gf2_rank(const BitMatrix& m) {
  BitMatrix a = m;
  int rank = 0;
  for (std::size_t col = 0; col < a.cols() && rank < static_cast<int>(a.rows()); ++col) {
    std::size_t pivot = a.rows();
    for (std::size_t r = rank; r < a.rows(); ++r)
      if (a.get(r, col)) {
        pivot = r;
        break;
      }
    if (pivot == a.rows()) continue;
    a.swap_rows(rank, pivot);
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (r != static_cast<std::size_t>(rank) && a.get(r, col)) a.xor_row(r, rank);
    ++rank;
  }
  return rank;
}

struct Gf2Solution {
  BitVec particular;             // one solution of a x = b
  std::vector<BitVec> nullspace; // basis of {v : a v = 0}, cols - rank vectors
};

// Solves a x = b over GF(2). Empty result when the system is inconsistent.
inline std::optional<Gf2Solution> gf2_solve(const BitMatrix& a, const BitVec& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("gf2_solve: a.rows() != length(b)");
  const std::size_t rows = a.rows(), cols = a.cols();

  // Augmented elimination to reduced row echelon form.
  BitMatrix m(rows, cols + 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, a.get(r, c));
    m.set(r, cols, b.get(r));
  }
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (m.get(r, col)) {
        pivot = r;
        break;
      }
    if (pivot == rows) continue;
    m.swap_rows(rank, pivot);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && m.get(r, col)) m.xor_row(r, rank);
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (m.get(r, cols)) return std::nullopt;  // 0 = 1 row

  Gf2Solution sol;
  sol.particular = BitVec(cols);
  for (std::size_t i = 0; i < rank; ++i) sol.particular.set(pivot_col[i], m.get(i, cols));

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  for (std::size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    BitVec v(cols);
    v.set(free_col, true);
    for (std::size_t i = 0; i < rank; ++i)
      if (m.get(i, free_col)) v.set(pivot_col[i], true);
    sol.nullspace.push_back(std::move(v));
  }
  return sol;
}

}  // namespace qmint
