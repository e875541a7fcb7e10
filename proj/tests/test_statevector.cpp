#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "qpite/statevector.hpp"

using namespace qpite;

namespace {

QuantumState random_state(int n, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  QuantumState s = zero_state(n);
  double norm = 0;
  for (cplx& a : s.amplitudes) {
    a = cplx(g(rng), g(rng));
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (cplx& a : s.amplitudes) a /= norm;
  return s;
}

Circuit random_circuit(int n, int n_gates, std::mt19937& rng,
                       bool with_controls) {
  std::uniform_int_distribution<int> pick_kind(0, 8);
  std::uniform_int_distribution<int> pick_q(0, n - 1);
  std::uniform_real_distribution<double> pick_a(-3.0, 3.0);
  Circuit c(n);
  for (int i = 0; i < n_gates; ++i) {
    const int q = pick_q(rng);
    Gate g;
    switch (pick_kind(rng)) {
      case 0: g = Gate::x(q); break;
      case 1: g = Gate::y(q); break;
      case 2: g = Gate::z(q); break;
      case 3: g = Gate::h(q); break;
      case 4: g = Gate::w(q); break;
      case 5: g = Gate::wdg(q); break;
      case 6: g = Gate::ry(q, pick_a(rng)); break;
      case 7: g = Gate::rz(q, pick_a(rng)); break;
      default: g = Gate::phase(q, pick_a(rng)); break;
    }
    if (with_controls && n >= 2 && pick_q(rng) % 2 == 0) {
      int ctrl = pick_q(rng);
      while (ctrl == q) ctrl = pick_q(rng);
      g.controls = {ctrl};
      g.negated = {pick_q(rng) % 2 == 0};
    }
    c.append(g);
  }
  return c;
}

double state_vs_oracle(const QuantumState& init, const Circuit& c) {
  const QuantumState out = apply_circuit(init, c);
  const auto ref = oracle::apply(oracle::circuit_unitary(c), init.amplitudes);
  double d = 0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    d = std::max(d, std::abs(ref[i] - out.amplitudes[i]));
  return d;
}

}  // namespace

TEST_CASE("zero state starts in |0...0> with the top qubit as ancilla") {
  const QuantumState s = zero_state(3);
  REQUIRE(s.dim() == 8);
  REQUIRE(s.amplitudes[0] == cplx(1, 0));
  REQUIRE(s.ancilla_index == 2);
  REQUIRE(s.norm_sq() == Catch::Approx(1.0));
  REQUIRE_THROWS_AS(zero_state(15), std::invalid_argument);
  REQUIRE_NOTHROW(zero_state(15, 16));
  REQUIRE_THROWS_AS(zero_state(0), std::invalid_argument);
}

TEST_CASE("one-qubit gate conventions are pinned") {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);

  // W maps the ancilla into the basis where phase pairs become rotations.
  const oracle::Mat w = oracle::one_qubit(GateKind::W, 0);
  REQUIRE(std::abs(w.at(0, 0) - cplx(r)) < 1e-15);
  REQUIRE(std::abs(w.at(0, 1) - (-i * r)) < 1e-15);
  REQUIRE(std::abs(w.at(1, 0) - cplx(r)) < 1e-15);
  REQUIRE(std::abs(w.at(1, 1) - (i * r)) < 1e-15);

  const double a = 0.7;
  const oracle::Mat rz = oracle::one_qubit(GateKind::Rz, a);
  REQUIRE(std::abs(rz.at(0, 0) - std::exp(-i * (a / 2))) < 1e-15);
  REQUIRE(std::abs(rz.at(1, 1) - std::exp(i * (a / 2))) < 1e-15);

  const oracle::Mat p = oracle::one_qubit(GateKind::Phase, a);
  REQUIRE(std::abs(p.at(0, 0) - cplx(1)) < 1e-15);
  REQUIRE(std::abs(p.at(1, 1) - std::exp(i * a)) < 1e-15);

  // W' E(phi) W = planar rotation by phi, with E(phi) = Rz(-2 phi).
  const double phi = 0.41;
  oracle::Mat conj = oracle::mul(
      oracle::one_qubit(GateKind::Wdg, 0),
      oracle::mul(oracle::one_qubit(GateKind::Rz, -2 * phi),
                  oracle::one_qubit(GateKind::W, 0)));
  REQUIRE(std::abs(conj.at(0, 0) - cplx(std::cos(phi))) < 1e-12);
  REQUIRE(std::abs(conj.at(0, 1) - cplx(std::sin(phi))) < 1e-12);
  REQUIRE(std::abs(conj.at(1, 0) - cplx(-std::sin(phi))) < 1e-12);
  REQUIRE(std::abs(conj.at(1, 1) - cplx(std::cos(phi))) < 1e-12);
}

TEST_CASE("random circuits match the dense reference") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const QuantumState init = random_state(n, rng);
    const Circuit c = random_circuit(n, 12, rng, n >= 2);
    REQUIRE(state_vs_oracle(init, c) < 1e-12);
    REQUIRE(apply_circuit(init, c).norm_sq() == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("multi-controlled X honors control polarity") {
  std::mt19937 rng(777);
  const int n = 4;
  const QuantumState init = random_state(n, rng);

  Circuit c(n);
  c.append(Gate::mcx({0, 1, 2}, 3));
  c.append(Gate::mcx({0, 2}, 1).with_negated_controls({true, false}));
  c.append(Gate::cnot(3, 0));
  c.append(Gate::cphase(1, 3, 0.9));
  c.append(Gate::ccphase(0, 1, 2, -1.3).with_negated_controls({false, true}));
  REQUIRE(state_vs_oracle(init, c) < 1e-12);

  // Plain flip semantics on basis states.
  QuantumState basis = zero_state(3);
  Circuit x01(3);
  x01.append(Gate::x(0));
  x01.append(Gate::x(1));
  x01.append(Gate::mcx({0, 1}, 2));
  basis = apply_circuit(basis, x01);
  REQUIRE(std::abs(basis.amplitudes[7] - cplx(1, 0)) < 1e-15);
}

TEST_CASE("block gates act on their target subspace") {
  std::mt19937 rng(4242);
  // A genuine unitary payload from a random two-qubit circuit.
  const Circuit sub = random_circuit(2, 10, rng, true);
  const oracle::Mat u = oracle::circuit_unitary(sub);

  const int n = 4;
  const QuantumState init = random_state(n, rng);
  Circuit c(n);
  c.append(Gate::block({2, 0}, u.a, "rand"));
  Gate ctrl_block = Gate::block({1, 3}, u.a, "rand");
  ctrl_block.controls = {0};
  c.append(ctrl_block);
  REQUIRE(state_vs_oracle(init, c) < 1e-12);

  REQUIRE_THROWS_AS(Gate::block({0, 1}, std::vector<cplx>(16, cplx(0.5, 0))),
                    std::invalid_argument);
}

TEST_CASE("postselection splits probability and renormalizes") {
  std::mt19937 rng(99);
  QuantumState s = random_state(4, rng);
  const double p0 = outcome_probability(s, s.ancilla_index, 0);
  const double p1 = outcome_probability(s, s.ancilla_index, 1);
  REQUIRE(p0 + p1 == Catch::Approx(1.0).margin(1e-12));

  const auto [s0, q0] = postselect_ancilla(s, 0);
  REQUIRE(q0 == Catch::Approx(p0));
  REQUIRE(s0.norm_sq() == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(outcome_probability(s0, s0.ancilla_index, 1) < 1e-15);

  // The input is untouched (value semantics).
  REQUIRE(s.norm_sq() == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(outcome_probability(s, s.ancilla_index, 1) == Catch::Approx(p1));

  // A branch with no weight cannot be selected.
  QuantumState z = zero_state(2);
  REQUIRE_THROWS_AS(postselect_ancilla(z, 1), std::runtime_error);
}

TEST_CASE("fidelity ignores global phase") {
  std::mt19937 rng(55);
  const QuantumState a = random_state(3, rng);
  QuantumState b = a;
  const cplx f = std::exp(cplx(0, 1.234));
  for (cplx& amp : b.amplitudes) amp *= f;
  REQUIRE(fidelity(a, b) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(fidelity(a, a) == Catch::Approx(1.0).margin(1e-12));

  const QuantumState c = random_state(3, rng);
  const double fab = fidelity(a, c);
  REQUIRE(fab >= 0.0);
  REQUIRE(fab <= 1.0 + 1e-12);
}

TEST_CASE("ancilla purity flags entanglement with the work register") {
  // Product state: purity 1.
  QuantumState s = zero_state(3);
  Circuit prep(3);
  prep.append(Gate::h(0));
  prep.append(Gate::ry(2, 0.8));
  s = apply_circuit(s, prep);
  REQUIRE(ancilla_purity(s) == Catch::Approx(1.0).margin(1e-12));

  // Maximally entangled ancilla: purity 1/2.
  QuantumState bell = zero_state(2);
  Circuit bc(2);
  bc.append(Gate::h(0));
  bc.append(Gate::cnot(0, 1));
  bell = apply_circuit(bell, bc);
  REQUIRE(ancilla_purity(bell) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("circuit validation rejects malformed gates") {
  Circuit c(2);
  REQUIRE_THROWS_AS(c.append(Gate::x(2)), std::out_of_range);
  REQUIRE_THROWS_AS(c.append(Gate::cnot(0, 0)), std::invalid_argument);
  REQUIRE_THROWS_AS(
      c.append(Gate::cnot(0, 1).with_negated_controls({true, false})),
      std::invalid_argument);

  Circuit wide(3);
  wide.append(Gate::x(2));
  REQUIRE_THROWS_AS(c.append(wide), std::invalid_argument);
}

TEST_CASE("inverse circuit undoes the original") {
  std::mt19937 rng(31415);
  const int n = 3;
  const QuantumState init = random_state(n, rng);
  const Circuit c = random_circuit(n, 15, rng, true);
  const QuantumState round_trip = apply_circuit(apply_circuit(init, c), c.inverse());
  REQUIRE(fidelity(init, round_trip) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("append_cancelling removes mirrored self-inverse pairs") {
  Circuit c(3);
  c.append(Gate::cnot(0, 1));
  c.append_cancelling(Gate::cnot(0, 1));
  REQUIRE(c.size() == 0);

  c.append(Gate::cnot(0, 1));
  c.append_cancelling(Gate::cnot(1, 2));  // different wires: kept
  REQUIRE(c.size() == 2);

  c.append(Gate::rz(0, 0.5));
  c.append_cancelling(Gate::rz(0, -0.5));  // rotations are never dropped
  REQUIRE(c.size() == 4);
}

TEST_CASE("narrow circuits embed into wider states") {
  std::mt19937 rng(64);
  QuantumState s = random_state(4, rng);
  Circuit narrow(2);
  narrow.append(Gate::h(0));
  narrow.append(Gate::cnot(0, 1));
  REQUIRE_NOTHROW(apply_circuit(s, narrow));

  Circuit wide(5);
  wide.append(Gate::x(4));
  REQUIRE_THROWS_AS(apply_circuit(s, wide), std::invalid_argument);
}
