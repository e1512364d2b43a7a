#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qmint/rng.hpp"

namespace qmint {

using cplx = std::complex<double>;

// Pure state on num_qubits qubits as a dense amplitude vector. Qubit 0 is the
// least-significant bit of the basis index.
class DenseState {
 public:
  DenseState() = default;

  static DenseState basis(int n, std::uint64_t index) {
    check_qubits(n);
    DenseState s;
    s.n_ = n;
    s.amps_.assign(std::uint64_t{1} << n, cplx{0.0, 0.0});
    s.amps_[index] = 1.0;
    return s;
  }

  static DenseState zero_state(int n) { return basis(n, 0); }

  static DenseState from_amplitudes(int n, std::vector<cplx> amps) {
    check_qubits(n);
    if (amps.size() != (std::uint64_t{1} << n)) throw std::invalid_argument("DenseState: wrong amplitude count");
    DenseState s;
    s.n_ = n;
    s.amps_ = std::move(amps);
    s.renormalize();
    return s;
  }

  // Haar-uniform pure state: i.i.d. complex Gaussian amplitudes, normalized.
  static DenseState haar(int n, Rng& rng) {
    check_qubits(n);
    DenseState s;
    s.n_ = n;
    s.amps_.resize(std::uint64_t{1} << n);
    for (auto& a : s.amps_) {
      auto [x, y] = rng.normal_pair();
      a = cplx{x, y};
    }
    s.renormalize();
    return s;
  }

  int num_qubits() const { return n_; }
  std::uint64_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx amp(std::uint64_t i) const { return amps_[i]; }
  cplx& amp_ref(std::uint64_t i) { return amps_[i]; }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void renormalize() {
    const double n2 = norm_sq();
    if (n2 <= 0.0) throw std::domain_error("DenseState: zero vector cannot be normalized");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps_) a *= inv;
  }

  cplx inner(const DenseState& other) const {  // <this|other>
    check_same(other);
    cplx s{0.0, 0.0};
    for (std::uint64_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
  }

  // -- gate application (in place; the free functions below give value semantics)

  void apply_h(int q) {
    check_target(q);
    const double inv_sqrt2 = 0.7071067811865475244;
    for_pairs(q, [&](cplx& a0, cplx& a1) {
      const cplx t0 = (a0 + a1) * inv_sqrt2;
      const cplx t1 = (a0 - a1) * inv_sqrt2;
      a0 = t0;
      a1 = t1;
    });
  }

  void apply_x(int q) {
    check_target(q);
    for_pairs(q, [](cplx& a0, cplx& a1) { std::swap(a0, a1); });
  }

  void apply_z(int q) {
    check_target(q);
    for_pairs(q, [](cplx&, cplx& a1) { a1 = -a1; });
  }

  void apply_y(int q) {
    check_target(q);
    for_pairs(q, [](cplx& a0, cplx& a1) {
      const cplx t0 = cplx{0.0, -1.0} * a1;
      const cplx t1 = cplx{0.0, 1.0} * a0;
      a0 = t0;
      a1 = t1;
    });
  }

  void apply_s(int q) { apply_phase(q, cplx{0.0, 1.0}); }
  void apply_s_dag(int q) { apply_phase(q, cplx{0.0, -1.0}); }
  void apply_t(int q) { apply_phase(q, cplx{0.7071067811865475244, 0.7071067811865475244}); }
  void apply_t_dag(int q) { apply_phase(q, cplx{0.7071067811865475244, -0.7071067811865475244}); }

  void apply_phase(int q, cplx phase) {
    check_target(q);
    for_pairs(q, [&](cplx&, cplx& a1) { a1 *= phase; });
  }

  void apply_cnot(int control, int target) {
    check_target(control);
    check_target(target);
    if (control == target) throw std::invalid_argument("apply_cnot: control == target");
    const std::uint64_t cm = std::uint64_t{1} << control;
    const std::uint64_t tm = std::uint64_t{1} << target;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if ((i & cm) && !(i & tm)) std::swap(amps_[i], amps_[i | tm]);
    }
  }

  void apply_1q(const std::array<cplx, 4>& u, int q) {
    check_target(q);
    for_pairs(q, [&](cplx& a0, cplx& a1) {
      const cplx t0 = u[0] * a0 + u[1] * a1;
      const cplx t1 = u[2] * a0 + u[3] * a1;
      a0 = t0;
      a1 = t1;
    });
  }

  // u is 4x4 row-major on basis |q1 q0> with q0 the low bit.
  void apply_2q(const std::array<cplx, 16>& u, int q0, int q1) {
    check_target(q0);
    check_target(q1);
    if (q0 == q1) throw std::invalid_argument("apply_2q: identical targets");
    const std::uint64_t m0 = std::uint64_t{1} << q0;
    const std::uint64_t m1 = std::uint64_t{1} << q1;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & (m0 | m1)) continue;
      std::array<std::uint64_t, 4> idx = {i, i | m0, i | m1, i | m0 | m1};
      std::array<cplx, 4> v;
      for (int k = 0; k < 4; ++k) v[k] = amps_[idx[k]];
      for (int r = 0; r < 4; ++r) {
        cplx acc{0.0, 0.0};
        for (int c = 0; c < 4; ++c) acc += u[4 * r + c] * v[c];
        amps_[idx[r]] = acc;
      }
    }
  }

  bool operator==(const DenseState& other) const = default;

 private:
  static void check_qubits(int n) {
    if (n < 1 || n > 22) throw std::invalid_argument("DenseState: require 1 <= qubits <= 22");
  }
  void check_same(const DenseState& other) const {
    if (n_ != other.n_) throw std::invalid_argument("DenseState: dimension mismatch");
  }
  void check_target(int q) const {
    if (q < 0 || q >= n_) throw std::invalid_argument("DenseState: qubit index out of range");
  }

  template <typename F>
  void for_pairs(int q, F&& f) {
    const std::uint64_t mask = std::uint64_t{1} << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (!(i & mask)) f(amps_[i], amps_[i | mask]);
    }
  }

  int n_ = 0;
  std::vector<cplx> amps_;
};

inline double fidelity(const DenseState& a, const DenseState& b) { return std::norm(a.inner(b)); }

inline double trace_distance(const DenseState& a, const DenseState& b) {
  const double f = fidelity(a, b);
  return std::sqrt(std::max(0.0, 1.0 - f));
}

// -- gates as data (used by decoded circuits and tests)

enum class GateKind { H, T, TDag, S, X, Z, CNOT, Custom1Q, Custom2Q };

struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = 0;  // control for CNOT, second target for Custom2Q
  std::array<cplx, 4> u1{};
  std::array<cplx, 16> u2{};

  static Gate h(int q) { return {GateKind::H, q, 0, {}, {}}; }
  static Gate t(int q) { return {GateKind::T, q, 0, {}, {}}; }
  static Gate t_dag(int q) { return {GateKind::TDag, q, 0, {}, {}}; }
  static Gate s(int q) { return {GateKind::S, q, 0, {}, {}}; }
  static Gate x(int q) { return {GateKind::X, q, 0, {}, {}}; }
  static Gate z(int q) { return {GateKind::Z, q, 0, {}, {}}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, {}, {}}; }

  static Gate custom1q(const std::array<cplx, 4>& u, int q, double tol = 1e-10) {
    require_unitary_2(u, tol);
    Gate g;
    g.kind = GateKind::Custom1Q;
    g.q0 = q;
    g.u1 = u;
    return g;
  }

  static Gate custom2q(const std::array<cplx, 16>& u, int q0, int q1, double tol = 1e-10) {
    require_unitary_4(u, tol);
    Gate g;
    g.kind = GateKind::Custom2Q;
    g.q0 = q0;
    g.q1 = q1;
    g.u2 = u;
    return g;
  }

  static void require_unitary_2(const std::array<cplx, 4>& u, double tol) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < 2; ++k) acc += std::conj(u[2 * k + r]) * u[2 * k + c];
        const cplx want = r == c ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        if (std::abs(acc - want) > tol) throw std::invalid_argument("Gate: matrix is not unitary");
      }
  }

  static void require_unitary_4(const std::array<cplx, 16>& u, double tol) {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < 4; ++k) acc += std::conj(u[4 * k + r]) * u[4 * k + c];
        const cplx want = r == c ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        if (std::abs(acc - want) > tol) throw std::invalid_argument("Gate: matrix is not unitary");
      }
  }
};

inline void apply_gate_inplace(DenseState& s, const Gate& g) {
  switch (g.kind) {
    case GateKind::H: s.apply_h(g.q0); break;
    case GateKind::T: s.apply_t(g.q0); break;
    case GateKind::TDag: s.apply_t_dag(g.q0); break;
    case GateKind::S: s.apply_s(g.q0); break;
    case GateKind::X: s.apply_x(g.q0); break;
    case GateKind::Z: s.apply_z(g.q0); break;
    case GateKind::CNOT: s.apply_cnot(g.q1, g.q0); break;
    case GateKind::Custom1Q: s.apply_1q(g.u1, g.q0); break;
    case GateKind::Custom2Q: s.apply_2q(g.u2, g.q0, g.q1); break;
  }
}

inline DenseState apply_gate(const DenseState& s, const Gate& g) {
  DenseState out = s;
  apply_gate_inplace(out, g);
  return out;
}

// -- projectors and two-outcome measurement

// Accept subspace given either by a pattern on a subset of qubits or by a
// rank-1 target state.
struct BasisPattern {
  std::vector<int> qubits;
  std::uint64_t pattern = 0;  // bit k is the required value of qubits[k]
};

struct Projector {
  std::variant<BasisPattern, DenseState> descriptor;

  static Projector on_pattern(std::vector<int> qubits, std::uint64_t pattern) {
    return Projector{BasisPattern{std::move(qubits), pattern}};
  }
  static Projector all_zero(int n) {
    std::vector<int> qs(n);
    for (int i = 0; i < n; ++i) qs[i] = i;
    return Projector{BasisPattern{std::move(qs), 0}};
  }
  static Projector rank_one(DenseState target) { return Projector{std::move(target)}; }
};

struct MeasureResult {
  int outcome = 0;        // 1 = projector accepted
  double prob_of_yes = 0.0;
  DenseState post;
};

namespace detail {
inline bool pattern_matches(const BasisPattern& p, std::uint64_t index) {
  for (std::size_t k = 0; k < p.qubits.size(); ++k) {
    const bool want = (p.pattern >> k) & 1;
    const bool have = (index >> p.qubits[k]) & 1;
    if (want != have) return false;
  }
  return true;
}
}  // namespace detail

// Projective two-outcome measurement with Born sampling. Outcome
// probabilities within 1e-12 of 0 or 1 are treated as deterministic, so a
// zero-probability branch is never sampled.
inline MeasureResult measure_projector(const DenseState& s, const Projector& p, Rng& rng) {
  MeasureResult r;
  if (const auto* pat = std::get_if<BasisPattern>(&p.descriptor)) {
    for (int q : pat->qubits)
      if (q < 0 || q >= s.num_qubits()) throw std::invalid_argument("measure_projector: qubit out of range");
    double prob = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i)
      if (detail::pattern_matches(*pat, i)) prob += std::norm(s.amp(i));
    r.prob_of_yes = prob;
    const bool yes = prob >= 1.0 - 1e-12 ? true : (prob <= 1e-12 ? false : rng.bernoulli(prob));
    r.outcome = yes ? 1 : 0;
    std::vector<cplx> amps(s.dim());
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      const bool in = detail::pattern_matches(*pat, i);
      amps[i] = (in == yes) ? s.amp(i) : cplx{0.0, 0.0};
    }
    r.post = DenseState::from_amplitudes(s.num_qubits(), std::move(amps));
    return r;
  }
  const auto& target = std::get<DenseState>(p.descriptor);
  if (target.num_qubits() != s.num_qubits())
    throw std::invalid_argument("measure_projector: dimension mismatch");
  const cplx ov = target.inner(s);  // <t|s>
  const double prob = std::norm(ov);
  r.prob_of_yes = prob;
  const bool yes = prob >= 1.0 - 1e-12 ? true : (prob <= 1e-12 ? false : rng.bernoulli(prob));
  r.outcome = yes ? 1 : 0;
  std::vector<cplx> amps(s.dim());
  if (yes) {
    for (std::uint64_t i = 0; i < s.dim(); ++i) amps[i] = ov * target.amp(i);
  } else {
    for (std::uint64_t i = 0; i < s.dim(); ++i) amps[i] = s.amp(i) - ov * target.amp(i);
  }
  r.post = DenseState::from_amplitudes(s.num_qubits(), std::move(amps));
  return r;
}

// (I - 2|target><target|) s
inline DenseState reflection_oracle(const DenseState& s, const DenseState& target) {
  if (s.num_qubits() != target.num_qubits())
    throw std::invalid_argument("reflection_oracle: dimension mismatch");
  const cplx ov = target.inner(s);
  std::vector<cplx> amps(s.dim());
  for (std::uint64_t i = 0; i < s.dim(); ++i) amps[i] = s.amp(i) - 2.0 * ov * target.amp(i);
  DenseState out;
  out = DenseState::from_amplitudes(s.num_qubits(), std::move(amps));
  return out;
}

struct AmplifyResult {
  DenseState state;
  bool no_progress = false;  // start had (numerically) zero overlap with target
};

// Grover iteration: reflect about the target, then about the start state.
// With a = |<target|start>| = sin(theta), the overlap after j iterations is
// |sin((2j+1) theta)|.
inline AmplifyResult amplitude_amplify(const DenseState& start, const DenseState& target, int iterations) {
  if (start.num_qubits() != target.num_qubits())
    throw std::invalid_argument("amplitude_amplify: dimension mismatch");
  AmplifyResult res;
  res.state = start;
  const double a = std::abs(target.inner(start));
  if (a <= 1e-12) {
    res.no_progress = true;
    return res;
  }
  for (int j = 0; j < iterations; ++j) {
    DenseState r = reflection_oracle(res.state, target);
    // reflect about |start>: 2|start><start| - I
    const cplx ov = start.inner(r);
    std::vector<cplx> amps(r.dim());
    for (std::uint64_t i = 0; i < r.dim(); ++i) amps[i] = 2.0 * ov * start.amp(i) - r.amp(i);
    res.state = DenseState::from_amplitudes(start.num_qubits(), std::move(amps));
  }
  return res;
}

// Debug dump: JSON array of (re, im) pairs in little-endian basis order.
inline std::string state_to_json(const DenseState& s) {
  std::string out = "[";
  char buf[64];
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    if (i) out += ",";
    std::snprintf(buf, sizeof buf, "[%.17g,%.17g]", s.amp(i).real(), s.amp(i).imag());
    out += buf;
  }
  out += "]";
  return out;
}

}  // namespace qmint
