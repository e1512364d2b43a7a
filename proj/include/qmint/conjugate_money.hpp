#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmint/dense_state.hpp"
#include "qmint/rng.hpp"

namespace qmint {

// -- conjugate-coding qubits -------------------------------------------------

enum class ConjBasis : std::uint8_t { Z = 0, X = 1 };

struct QubitSpec {
  ConjBasis basis = ConjBasis::Z;
  bool value = false;
};

// |0>, |1>, |+>, |->. The minus state is (|0> - |1>)/sqrt(2).
inline DenseState conjugate_qubit(QubitSpec spec) {
  const double r = 0.7071067811865475244;
  if (spec.basis == ConjBasis::Z) return DenseState::basis(1, spec.value ? 1 : 0);
  return DenseState::from_amplitudes(1, {cplx{r, 0}, cplx{spec.value ? -r : r, 0}});
}

struct ConjugateNote {
  std::vector<bool> serial;
  std::vector<DenseState> qubits;  // one single-qubit state per position
};

inline std::vector<bool> u64_to_bits(std::uint64_t v, int n) {
  std::vector<bool> bits(n);
  for (int i = 0; i < n; ++i) bits[i] = (v >> i) & 1;
  return bits;
}

// Measure a held single-qubit state in the given basis; collapses the state.
inline bool measure_conjugate_qubit(DenseState& q, ConjBasis basis, Rng& rng) {
  DenseState s = q;
  if (basis == ConjBasis::X) s.apply_h(0);
  const double p1 = std::norm(s.amp(1));
  const bool outcome = p1 >= 1.0 - 1e-12 ? true : (p1 <= 1e-12 ? false : rng.bernoulli(p1));
  q = conjugate_qubit({basis, outcome});
  return outcome;
}

struct VerifyResult {
  bool accept = false;
  bool known_serial = true;
};

struct VerifyQResult {
  bool accept = false;
  bool known_serial = true;
  ConjugateNote post;
};

// -- Wiesner private-key money ----------------------------------------------

class WiesnerBank {
 public:
  ConjugateNote mint(int n, Rng& rng) {
    std::lock_guard lock(mu_);
    const std::uint64_t serial = next_serial_++;
    std::vector<QubitSpec> specs(n);
    ConjugateNote note;
    note.serial = u64_to_bits(serial, 64);
    note.qubits.reserve(n);
    for (int i = 0; i < n; ++i) {
      specs[i] = {rng.next_bool() ? ConjBasis::X : ConjBasis::Z, rng.next_bool()};
      note.qubits.push_back(conjugate_qubit(specs[i]));
    }
    db_[serial] = std::move(specs);
    return note;
  }

  // Accept bit only: the submitted registers are measured and discarded.
  VerifyResult verify(const ConjugateNote& note, Rng& rng) const {
    ConjugateNote scratch = note;
    const auto r = verify_q(std::move(scratch), rng);
    return {r.accept, r.known_serial};
  }

  // Query-secure interface: the post-measurement note is returned to the
  // caller. Every qubit is measured in its recorded basis whether or not an
  // earlier qubit already failed.
  VerifyQResult verify_q(ConjugateNote note, Rng& rng) const {
    std::lock_guard lock(mu_);
    VerifyQResult res;
    const auto it = db_.find(bits_to_u64(note.serial));
    if (it == db_.end() || it->second.size() != note.qubits.size()) {
      res.accept = false;
      res.known_serial = false;
      res.post = std::move(note);
      return res;
    }
    bool all_match = true;
    for (std::size_t i = 0; i < note.qubits.size(); ++i) {
      const bool outcome = measure_conjugate_qubit(note.qubits[i], it->second[i].basis, rng);
      all_match &= (outcome == it->second[i].value);
    }
    res.accept = all_match;
    res.post = std::move(note);
    return res;
  }

  ConjugateNote note_from_description(const std::vector<bool>& serial, const std::vector<QubitSpec>& specs) const {
    ConjugateNote note;
    note.serial = serial;
    for (const auto& s : specs) note.qubits.push_back(conjugate_qubit(s));
    return note;
  }

  std::optional<std::vector<QubitSpec>> recorded_specs(const std::vector<bool>& serial) const {
    std::lock_guard lock(mu_);
    const auto it = db_.find(bits_to_u64(serial));
    if (it == db_.end()) return std::nullopt;
    return it->second;
  }

  static std::uint64_t bits_to_u64(const std::vector<bool>& bits) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < bits.size() && i < 64; ++i)
      if (bits[i]) v |= std::uint64_t{1} << i;
    return v;
  }

 private:
  mutable std::mutex mu_;
  std::map<std::uint64_t, std::vector<QubitSpec>> db_;
  std::uint64_t next_serial_ = 1;
};

// -- keyed function stub -----------------------------------------------------

// Deterministic keyed function used where a pseudorandom function is assumed.
// It is a fixed 64-bit mixing network in counter mode, not a cryptographic
// primitive; the harnesses only require determinism and statistical spread.
class Prf {
 public:
  Prf(std::uint64_t seed, int output_len) : seed_(seed), output_len_(output_len) {}

  int output_len() const { return output_len_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<bool> eval(const std::vector<bool>& input) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (bool b : input) {
      h ^= b ? 0x9eu : 0x31u;
      h *= 0x100000001b3ull;
    }
    std::vector<bool> out(output_len_);
    for (int block = 0; block * 64 < output_len_; ++block) {
      std::uint64_t w = mix(mix(seed_ ^ 0x452821e638d01377ull) + mix(h + static_cast<std::uint64_t>(block)));
      w = mix(w ^ seed_);
      for (int i = 0; i < 64 && block * 64 + i < output_len_; ++i) out[block * 64 + i] = (w >> i) & 1;
    }
    return out;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  int output_len_;
};

// -- BBBW money: serial-keyed conjugate coding --------------------------------

// Block decode: bits (b0, b1) map 00 -> |0>, 01 -> |1>, 10 -> |+>, 11 -> |->.
inline QubitSpec bbbw_block_spec(bool b0, bool b1) {
  return {b0 ? ConjBasis::X : ConjBasis::Z, b1};
}

class BbbwBank {
 public:
  BbbwBank(std::uint64_t seed, int n) : prf_(seed, n), n_(n) {
    if (n % 2 != 0) throw std::invalid_argument("BbbwBank: n must be even");
  }

  int n() const { return n_; }

  std::vector<QubitSpec> specs_for(const std::vector<bool>& y) const {
    if (static_cast<int>(y.size()) != n_) throw std::invalid_argument("BbbwBank: serial length != n");
    const auto g = prf_.eval(y);
    std::vector<QubitSpec> specs(n_ / 2);
    for (int j = 0; j < n_ / 2; ++j) specs[j] = bbbw_block_spec(g[2 * j], g[2 * j + 1]);
    return specs;
  }

  ConjugateNote mint(const std::vector<bool>& y) const {
    ConjugateNote note;
    note.serial = y;
    for (const auto& s : specs_for(y)) note.qubits.push_back(conjugate_qubit(s));
    return note;
  }

  VerifyResult verify(const ConjugateNote& note, Rng& rng) const {
    ConjugateNote scratch = note;
    const auto r = verify_q(std::move(scratch), rng);
    return {r.accept, r.known_serial};
  }

  VerifyQResult verify_q(ConjugateNote note, Rng& rng) const {
    VerifyQResult res;
    if (static_cast<int>(note.serial.size()) != n_ ||
        note.qubits.size() != static_cast<std::size_t>(n_ / 2)) {
      res.accept = false;
      res.known_serial = false;
      res.post = std::move(note);
      return res;
    }
    const auto specs = specs_for(note.serial);
    bool all_match = true;
    for (std::size_t i = 0; i < note.qubits.size(); ++i) {
      const bool outcome = measure_conjugate_qubit(note.qubits[i], specs[i].basis, rng);
      all_match &= (outcome == specs[i].value);
    }
    res.accept = all_match;
    res.post = std::move(note);
    return res;
  }

 private:
  Prf prf_;
  int n_;
};

// -- measure-resend counterfeiter ---------------------------------------------

// Per qubit: guess a basis uniformly, measure, emit two copies of the
// measured eigenstate. Both copies pass verification with probability
// (5/8)^n.
inline std::pair<ConjugateNote, ConjugateNote> measure_resend_counterfeit(const ConjugateNote& note,
                                                                          Rng& rng) {
  ConjugateNote c1, c2;
  c1.serial = note.serial;
  c2.serial = note.serial;
  for (const auto& q : note.qubits) {
    const ConjBasis guess = rng.next_bool() ? ConjBasis::X : ConjBasis::Z;
    DenseState held = q;
    const bool outcome = measure_conjugate_qubit(held, guess, rng);
    c1.qubits.push_back(conjugate_qubit({guess, outcome}));
    c2.qubits.push_back(conjugate_qubit({guess, outcome}));
  }
  return {std::move(c1), std::move(c2)};
}

// -- one-qubit cloning strategy search ----------------------------------------

// Exact both-copies-pass probability of a 1 -> 2 qubit channel, averaged over
// the four mint states. The channel is given by its action rho -> sum_k A_k
// rho A_k^dagger evaluated through a 3-qubit unitary dilation, or by a
// measure-and-prepare rule.
class ClonerSearch {
 public:
  struct Result {
    double best_both_pass = 0.0;
    double measure_resend_value = 0.0;
    std::string best_family;
    std::size_t strategies_evaluated = 0;
  };

  // Score a unitary-dilation cloner: input qubit 0, ancillas |00>, output
  // qubits (0, 1), qubit 2 traced out.
  static double score_unitary(const Eigen::Matrix<cplx, 8, 8>& u) {
    double total = 0.0;
    for (const auto& psi : mint_states()) {
      Eigen::Matrix<cplx, 8, 1> in = Eigen::Matrix<cplx, 8, 1>::Zero();
      in(0) = psi[0];
      in(1) = psi[1];
      const Eigen::Matrix<cplx, 8, 1> out = u * in;
      // rho over qubits (0,1) after tracing qubit 2
      Eigen::Matrix<cplx, 4, 4> rho = Eigen::Matrix<cplx, 4, 4>::Zero();
      for (int b2 = 0; b2 < 2; ++b2)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) rho(i, j) += out(i + 4 * b2) * std::conj(out(j + 4 * b2));
      Eigen::Matrix<cplx, 4, 1> target;
      for (int i = 0; i < 4; ++i) target(i) = psi[i & 1] * psi[(i >> 1) & 1];
      total += (target.adjoint() * rho * target)(0).real();
    }
    return total / 4.0;
  }

  // Measure along a Bloch direction, then prepare a fixed two-qubit pure
  // state per outcome.
  static double score_measure_prepare(double theta, double phi,
                                      const Eigen::Matrix<cplx, 4, 1>& prep0,
                                      const Eigen::Matrix<cplx, 4, 1>& prep1) {
    Eigen::Matrix<cplx, 2, 1> v0, v1;
    v0 << cplx{std::cos(theta / 2), 0}, std::polar(std::sin(theta / 2), phi);
    v1 << cplx{std::sin(theta / 2), 0}, -std::polar(std::cos(theta / 2), phi);
    double total = 0.0;
    for (const auto& psi : mint_states()) {
      Eigen::Matrix<cplx, 2, 1> p;
      p << psi[0], psi[1];
      Eigen::Matrix<cplx, 4, 1> target;
      for (int i = 0; i < 4; ++i) target(i) = psi[i & 1] * psi[(i >> 1) & 1];
      const double q0 = std::norm(v0.dot(p));
      const double q1 = std::norm(v1.dot(p));
      total += q0 * std::norm(target.dot(prep0)) + q1 * std::norm(target.dot(prep1));
    }
    return total / 4.0;
  }

  static double measure_resend_value() {
    // Guess Z or X uniformly, measure, resend two copies of the eigenstate.
    double total = 0.0;
    for (int basis = 0; basis < 2; ++basis) {
      for (const auto& psi : mint_states()) {
        for (int outcome = 0; outcome < 2; ++outcome) {
          const auto v = conjugate_qubit({basis ? ConjBasis::X : ConjBasis::Z, outcome != 0});
          const cplx ov = v.amp(0) * std::conj(psi[0]) + v.amp(1) * std::conj(psi[1]);
          const double p_outcome = std::norm(ov);
          total += 0.5 * 0.25 * p_outcome * p_outcome * p_outcome;  // P(o) * |<psi|v>|^4
        }
      }
    }
    return total;
  }

  // Random search plus stochastic hill climbing over unitary dilations and
  // measure-and-prepare rules. The search budget counts strategy evaluations.
  static Result run(std::size_t budget, Rng& rng) {
    Result res;
    res.measure_resend_value = measure_resend_value();
    res.best_both_pass = res.measure_resend_value;
    res.best_family = "measure-resend";

    Eigen::Matrix<cplx, 8, 8> best_u = Eigen::Matrix<cplx, 8, 8>::Identity();
    double best_u_score = score_unitary(best_u);
    const std::size_t random_phase = budget / 4;
    std::size_t used = 0;

    // Phase 1: independent random draws from both families.
    while (used < random_phase) {
      const auto u = random_unitary8(rng);
      const double s = score_unitary(u);
      ++used;
      if (s > best_u_score) {
        best_u_score = s;
        best_u = u;
      }
      const double theta = rng.next_double() * std::numbers::pi;
      const double phi = rng.next_double() * 2.0 * std::numbers::pi;
      const double smp = score_measure_prepare(theta, phi, random_state4(rng), random_state4(rng));
      ++used;
      if (smp > res.best_both_pass) {
        res.best_both_pass = smp;
        res.best_family = "measure-prepare";
      }
    }
    if (best_u_score > res.best_both_pass) {
      res.best_both_pass = best_u_score;
      res.best_family = "unitary-dilation";
    }

    // Phase 2: hill climb on the best unitary dilation with shrinking steps.
    double step = 0.3;
    while (used < budget) {
      Eigen::Matrix<cplx, 8, 8> cand = best_u + step * random_gaussian8(rng);
      const Eigen::HouseholderQR<Eigen::Matrix<cplx, 8, 8>> qr(cand);
      Eigen::Matrix<cplx, 8, 8> q = qr.householderQ();
      const double s = score_unitary(q);
      ++used;
      if (s > best_u_score) {
        best_u_score = s;
        best_u = q;
      } else {
        step = std::max(step * 0.999, 1e-3);
      }
    }
    if (best_u_score > res.best_both_pass) {
      res.best_both_pass = best_u_score;
      res.best_family = "unitary-dilation";
    }
    res.strategies_evaluated = used;
    return res;
  }

  static Eigen::Matrix<cplx, 8, 8> random_unitary8(Rng& rng) {
    const Eigen::Matrix<cplx, 8, 8> g = random_gaussian8(rng);
    const Eigen::HouseholderQR<Eigen::Matrix<cplx, 8, 8>> qr(g);
    return qr.householderQ();
  }

 private:
  static const std::array<std::array<cplx, 2>, 4>& mint_states() {
    static const double r = 0.7071067811865475244;
    static const std::array<std::array<cplx, 2>, 4> states = {{{cplx{1, 0}, cplx{0, 0}},
                                                               {cplx{0, 0}, cplx{1, 0}},
                                                               {cplx{r, 0}, cplx{r, 0}},
                                                               {cplx{r, 0}, cplx{-r, 0}}}};
    return states;
  }

  static Eigen::Matrix<cplx, 4, 1> random_state4(Rng& rng) {
    Eigen::Matrix<cplx, 4, 1> v;
    for (int i = 0; i < 4; ++i) {
      auto [x, y] = rng.normal_pair();
      v(i) = cplx{x, y};
    }
    v.normalize();
    return v;
  }

  static Eigen::Matrix<cplx, 8, 8> random_gaussian8(Rng& rng) {
    Eigen::Matrix<cplx, 8, 8> g;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        auto [x, y] = rng.normal_pair();
        g(i, j) = cplx{x, y};
      }
    return g;
  }
};

// -- adaptive query attack -----------------------------------------------------

struct RecoveredDescription {
  std::vector<QubitSpec> qubits;
  std::size_t oracle_queries = 0;
};

// Recovers the exact basis and value of every qubit of a conjugate-coding
// note, using one authenticator query per qubit. The oracle must be the
// query-secure interface (accept bit plus post-measurement note): the attack
// flips qubit i with X, reads the accept bit to learn the basis, undoes the
// flip, and then reads the value by measuring in the now-known basis. The
// authenticator measures every qubit in its correct basis, so the qubits not
// being probed are never damaged.
template <typename VerifyQFn>
RecoveredDescription query_attack(VerifyQFn&& verify_q, ConjugateNote note, Rng& rng) {
  RecoveredDescription rec;
  rec.qubits.resize(note.qubits.size());
  for (std::size_t i = 0; i < note.qubits.size(); ++i) {
    note.qubits[i].apply_x(0);
    VerifyQResult r = verify_q(std::move(note));
    ++rec.oracle_queries;
    note = std::move(r.post);
    note.qubits[i].apply_x(0);
    const ConjBasis basis = r.accept ? ConjBasis::X : ConjBasis::Z;
    DenseState held = note.qubits[i];
    const bool value = measure_conjugate_qubit(held, basis, rng);
    note.qubits[i] = held;
    rec.qubits[i] = {basis, value};
  }
  return rec;
}

inline ConjugateNote forge_from_description(const std::vector<bool>& serial,
                                            const std::vector<QubitSpec>& specs) {
  ConjugateNote note;
  note.serial = serial;
  for (const auto& s : specs) note.qubits.push_back(conjugate_qubit(s));
  return note;
}

}  // namespace qmint
