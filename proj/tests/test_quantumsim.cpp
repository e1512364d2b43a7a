#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "qmint/dense_state.hpp"
#include "qmint/rng.hpp"
#include "qmint/stats.hpp"

using namespace qmint;

TEST_CASE("haar states are normalized and reproducible") {
  Rng a(1), b(1);
  const auto s1 = DenseState::haar(1, a);
  const auto s2 = DenseState::haar(1, b);
  CHECK(s1 == s2);
  CHECK(std::abs(s1.norm_sq() - 1.0) < 1e-10);
}

TEST_CASE("haar first moment: mean |<0|psi>|^2 = 1/2^n") {
  Rng rng(2);
  const int n = 3, samples = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto psi = DenseState::haar(n, rng);
    const double v = std::norm(psi.amp(0));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  CHECK(std::abs(mean - 1.0 / 8.0) < 5.0 * se);
}

TEST_CASE("haar second moment: mean |<phi|psi>|^4 = 2/(2^n (2^n+1))") {
  Rng rng(3);
  const int n = 3, samples = 100000;
  const auto phi = DenseState::haar(n, rng);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto psi = DenseState::haar(n, rng);
    const double v = std::norm(phi.inner(psi)) * std::norm(phi.inner(psi));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  const double expected = 2.0 / (8.0 * 9.0);
  CHECK(std::abs(mean - expected) < 5.0 * se);
}

TEST_CASE("basic gate actions") {
  auto s = DenseState::zero_state(1);
  s.apply_h(0);
  CHECK(std::abs(s.amp(0) - cplx{0.7071067811865475, 0}) < 1e-12);
  CHECK(std::abs(s.amp(1) - cplx{0.7071067811865475, 0}) < 1e-12);

  // CNOT with control on qubit 1: |10> -> |11> (index 2 -> 3)
  auto c = DenseState::basis(2, 2);
  c.apply_cnot(1, 0);
  CHECK(std::abs(c.amp(3) - cplx{1, 0}) < 1e-12);

  CHECK_THROWS_AS(s.apply_h(5), std::invalid_argument);
  CHECK_THROWS_AS(c.apply_cnot(0, 0), std::invalid_argument);
}

TEST_CASE("random circuit followed by its inverse is the identity") {
  Rng rng(4);
  const int n = 8, depth = 200;
  const auto input = DenseState::haar(n, rng);
  std::vector<Gate> gates;
  for (int i = 0; i < depth; ++i) {
    const int kind = static_cast<int>(rng.below(3));
    const int q = static_cast<int>(rng.below(n));
    if (kind == 0) gates.push_back(Gate::h(q));
    if (kind == 1) gates.push_back(Gate::t(q));
    if (kind == 2) {
      int q2 = static_cast<int>(rng.below(n - 1));
      if (q2 >= q) ++q2;
      gates.push_back(Gate::cnot(q, q2));
    }
  }
  DenseState s = input;
  for (const auto& g : gates) apply_gate_inplace(s, g);
  CHECK(std::abs(s.norm_sq() - 1.0) < 1e-9);
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate inv = *it;
    if (inv.kind == GateKind::T) inv.kind = GateKind::TDag;
    apply_gate_inplace(s, inv);
  }
  CHECK(fidelity(s, input) > 1.0 - 1e-9);
}

TEST_CASE("norm drift stays below 1e-9 over 1e4 gates") {
  Rng rng(5);
  auto s = DenseState::haar(6, rng);
  for (int i = 0; i < 10000; ++i) {
    const int q = static_cast<int>(rng.below(6));
    switch (rng.below(4)) {
      case 0: s.apply_h(q); break;
      case 1: s.apply_t(q); break;
      case 2: s.apply_s(q); break;
      default: {
        int q2 = static_cast<int>(rng.below(5));
        if (q2 >= q) ++q2;
        s.apply_cnot(q, q2);
      }
    }
  }
  CHECK(std::abs(s.norm_sq() - 1.0) < 1e-9);
}

TEST_CASE("projector onto the state itself accepts with certainty") {
  Rng rng(6);
  const auto s = DenseState::haar(3, rng);
  const auto r = measure_projector(s, Projector::rank_one(s), rng);
  CHECK(r.outcome == 1);
  CHECK(r.prob_of_yes == Catch::Approx(1.0).margin(1e-10));
  CHECK(fidelity(r.post, s) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("all-zero pattern on |+++> accepts with probability 1/8") {
  Rng rng(7);
  auto s = DenseState::zero_state(3);
  for (int q = 0; q < 3; ++q) s.apply_h(q);
  const auto r = measure_projector(s, Projector::all_zero(3), rng);
  CHECK(r.prob_of_yes == Catch::Approx(0.125).margin(1e-12));
}

TEST_CASE("repeated measurement of the same projector is deterministic") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = DenseState::haar(4, rng);
    const auto target = DenseState::haar(4, rng);
    const auto r1 = measure_projector(s, Projector::rank_one(target), rng);
    const auto r2 = measure_projector(r1.post, Projector::rank_one(target), rng);
    CHECK(r2.outcome == r1.outcome);
    CHECK(r2.prob_of_yes == Catch::Approx(r1.outcome ? 1.0 : 0.0).margin(1e-9));
  }
}

TEST_CASE("post-measurement state recovery bound on the likely branch") {
  // When the yes outcome has probability 1 - eps, the yes-branch post state
  // is within trace distance sqrt(eps) of the input.
  Rng rng(9);
  int checked = 0;
  while (checked < 100) {
    auto s = DenseState::haar(4, rng);
    // Bias the state toward a random pattern so prob_of_yes is usually large.
    std::vector<int> qubits = {static_cast<int>(rng.below(4))};
    const std::uint64_t pattern = rng.below(2);
    const Projector p = Projector::on_pattern(qubits, pattern);
    Rng probe = rng.split(checked);
    const auto pre = measure_projector(s, p, probe);
    if (pre.prob_of_yes < 1e-6) continue;
    const double eps = 1.0 - pre.prob_of_yes;
    // Condition on the yes branch.
    std::vector<cplx> amps(s.dim());
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      const bool match = (((i >> qubits[0]) & 1) == pattern);
      amps[i] = match ? s.amp(i) : cplx{0, 0};
    }
    const auto post = DenseState::from_amplitudes(4, std::move(amps));
    CHECK(trace_distance(post, s) <= std::sqrt(eps) + 1e-9);
    ++checked;
  }
}

TEST_CASE("measurement statistics follow the Born rule") {
  Rng rng(10);
  for (int instance = 0; instance < 5; ++instance) {
    const auto s = DenseState::haar(3, rng);
    const auto t = DenseState::haar(3, rng);
    const Projector p = Projector::rank_one(t);
    const int trials = 20000;
    int yes = 0;
    double prob = 0.0;
    for (int i = 0; i < trials; ++i) {
      const auto r = measure_projector(s, p, rng);
      yes += r.outcome;
      prob = r.prob_of_yes;
    }
    CHECK(within_sigma_binomial(static_cast<double>(yes) / trials, prob, trials, 5.0));
  }
}

TEST_CASE("reflection oracle eigenvalues") {
  Rng rng(11);
  const auto t = DenseState::haar(3, rng);
  const auto r = reflection_oracle(t, t);
  // U_psi |psi> = -|psi>
  CHECK(std::abs(t.inner(r) - cplx{-1.0, 0.0}) < 1e-10);

  // Orthogonal states are fixed.
  auto s = DenseState::haar(3, rng);
  const cplx ov = t.inner(s);
  std::vector<cplx> amps(s.dim());
  for (std::uint64_t i = 0; i < s.dim(); ++i) amps[i] = s.amp(i) - ov * t.amp(i);
  const auto orth = DenseState::from_amplitudes(3, std::move(amps));
  const auto fixed = reflection_oracle(orth, t);
  CHECK(fidelity(fixed, orth) == Catch::Approx(1.0).margin(1e-10));
  CHECK(std::abs(orth.inner(fixed) - cplx{1.0, 0.0}) < 1e-9);
}

TEST_CASE("reflection oracle matches the dense matrix and is an involution") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = DenseState::haar(3, rng);
    const auto s = DenseState::haar(3, rng);
    const auto r = reflection_oracle(s, t);
    // Dense oracle: (I - 2|t><t|) s computed entrywise.
    for (std::uint64_t i = 0; i < 8; ++i) {
      cplx want{0, 0};
      for (std::uint64_t j = 0; j < 8; ++j) {
        const cplx m = (i == j ? cplx{1, 0} : cplx{0, 0}) - 2.0 * t.amp(i) * std::conj(t.amp(j));
        want += m * s.amp(j);
      }
      CHECK(std::abs(want - r.amp(i)) < 1e-10);
    }
    const auto rr = reflection_oracle(r, t);
    CHECK(fidelity(rr, s) > 1.0 - 1e-9);
    CHECK(std::abs(rr.norm_sq() - 1.0) < 1e-10);
  }
}

TEST_CASE("amplitude amplification follows the sine law") {
  // start = target, zero iterations
  Rng rng(13);
  const auto t = DenseState::haar(2, rng);
  CHECK(fidelity(amplitude_amplify(t, t, 0).state, t) == Catch::Approx(1.0).margin(1e-12));

  // a = sin(pi/6): one iteration rotates to sin(pi/2) = 1
  const double a = std::sin(std::numbers::pi / 6.0);
  const auto target = DenseState::basis(1, 0);
  const auto start = DenseState::from_amplitudes(1, {cplx{a, 0}, cplx{std::sqrt(1 - a * a), 0}});
  const auto rot = amplitude_amplify(start, target, 1);
  CHECK(std::abs(target.inner(rot.state)) == Catch::Approx(1.0).margin(1e-9));

  // general sine law
  for (int trial = 0; trial < 10; ++trial) {
    const auto tgt = DenseState::haar(4, rng);
    const auto st = DenseState::haar(4, rng);
    const double amp0 = std::abs(tgt.inner(st));
    const double theta = std::asin(std::min(1.0, amp0));
    for (int j = 1; j <= 5; ++j) {
      const auto out = amplitude_amplify(st, tgt, j);
      CHECK(std::abs(tgt.inner(out.state)) ==
            Catch::Approx(std::abs(std::sin((2 * j + 1) * theta))).margin(1e-6));
    }
  }
}

TEST_CASE("iterations to reach target overlap match the analytic prediction") {
  Rng rng(14);
  const int n = 6;
  const auto start = DenseState::zero_state(n);
  for (int trial = 0; trial < 5; ++trial) {
    const auto target = DenseState::haar(n, rng);
    const double a = std::abs(target.inner(start));
    const double theta = std::asin(a);
    int analytic = 0;
    while (std::abs(std::sin((2 * analytic + 1) * theta)) < 0.99) ++analytic;
    int simulated = 0;
    while (std::abs(target.inner(amplitude_amplify(start, target, simulated).state)) < 0.99) {
      ++simulated;
      REQUIRE(simulated < 10000);
    }
    CHECK(simulated == analytic);
  }
}

TEST_CASE("amplification flags zero overlap") {
  const auto z = DenseState::basis(2, 0);
  const auto o = DenseState::basis(2, 3);
  const auto res = amplitude_amplify(z, o, 3);
  CHECK(res.no_progress);
}

TEST_CASE("fidelity and trace distance") {
  Rng rng(15);
  const auto a = DenseState::haar(3, rng);
  CHECK(fidelity(a, a) == Catch::Approx(1.0).margin(1e-12));
  CHECK(trace_distance(a, a) == Catch::Approx(0.0).margin(1e-6));

  const auto e0 = DenseState::basis(2, 0);
  const auto e3 = DenseState::basis(2, 3);
  CHECK(fidelity(e0, e3) == Catch::Approx(0.0).margin(1e-12));
  CHECK(trace_distance(e0, e3) == Catch::Approx(1.0).margin(1e-12));

  auto plus = DenseState::zero_state(1);
  plus.apply_h(0);
  const auto zero = DenseState::zero_state(1);
  CHECK(fidelity(zero, plus) == Catch::Approx(0.5).margin(1e-12));
  CHECK(trace_distance(zero, plus) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));

  CHECK_THROWS_AS(fidelity(e0, DenseState::basis(3, 0)), std::invalid_argument);
}

TEST_CASE("custom gates validate unitarity") {
  CHECK_THROWS_AS(Gate::custom1q({cplx{1, 0}, cplx{1, 0}, cplx{0, 0}, cplx{1, 0}}, 0),
                  std::invalid_argument);
  const std::array<cplx, 4> h = {cplx{0.7071067811865475, 0}, cplx{0.7071067811865475, 0},
                                 cplx{0.7071067811865475, 0}, cplx{-0.7071067811865475, 0}};
  const Gate g = Gate::custom1q(h, 0);
  auto s = DenseState::zero_state(1);
  s = apply_gate(s, g);
  s.apply_h(0);
  CHECK(fidelity(s, DenseState::zero_state(1)) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("state json dump has the expected shape") {
  const auto s = DenseState::basis(1, 1);
  CHECK(state_to_json(s) == "[[0,0],[1,0]]");
}
