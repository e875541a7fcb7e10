#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qpite/circuit.hpp"

namespace qpite {

// Dense statevector over n qubits; qubit 0 is the least significant bit of the
// amplitude index. One qubit is designated as the ancilla for postselection
// (by convention the highest index unless set otherwise).
struct QuantumState {
  int n_qubits = 0;
  std::vector<cplx> amplitudes;
  int ancilla_index = 0;

  std::size_t dim() const { return amplitudes.size(); }

  double norm_sq() const {
    double s = 0;
    for (const cplx& a : amplitudes) s += std::norm(a);
    return s;
  }
};

inline constexpr int default_qubit_cap = 14;

inline QuantumState zero_state(int n_qubits, int cap = default_qubit_cap) {
  if (n_qubits < 1) throw std::invalid_argument("need at least one qubit");
  if (n_qubits > cap)
    throw std::invalid_argument("qubit count exceeds dense capacity");
  QuantumState s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(std::size_t(1) << n_qubits, cplx(0, 0));
  s.amplitudes[0] = cplx(1, 0);
  s.ancilla_index = n_qubits - 1;
  return s;
}

namespace detail {

inline std::array<cplx, 4> one_qubit_matrix(GateKind k, double a) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  switch (k) {
    case GateKind::X: return {cplx(0), cplx(1), cplx(1), cplx(0)};
    case GateKind::Y: return {cplx(0), -i, i, cplx(0)};
    case GateKind::Z: return {cplx(1), cplx(0), cplx(0), cplx(-1)};
    case GateKind::H: return {cplx(r), cplx(r), cplx(r), cplx(-r)};
    case GateKind::W: return {cplx(r), -i * r, cplx(r), i * r};
    case GateKind::Wdg: return {cplx(r), cplx(r), i * r, -i * r};
    case GateKind::Ry: {
      const double c = std::cos(a / 2), s = std::sin(a / 2);
      return {cplx(c), cplx(-s), cplx(s), cplx(c)};
    }
    case GateKind::Rz:
      return {std::exp(-i * (a / 2)), cplx(0), cplx(0), std::exp(i * (a / 2))};
    case GateKind::Phase:
      return {cplx(1), cplx(0), cplx(0), std::exp(i * a)};
    default:
      throw std::logic_error("not a one-qubit matrix kind");
  }
}

struct ControlMask {
  std::uint64_t mask = 0;  // bits that must be inspected
  std::uint64_t want = 0;  // required values on those bits
};

inline ControlMask control_mask(const Gate& g) {
  ControlMask cm;
  for (std::size_t i = 0; i < g.controls.size(); ++i) {
    const std::uint64_t bit = std::uint64_t(1) << g.controls[i];
    cm.mask |= bit;
    const bool neg = !g.negated.empty() && g.negated[i];
    if (!neg) cm.want |= bit;
  }
  return cm;
}

inline void apply_one_qubit(QuantumState& s, int q,
                            const std::array<cplx, 4>& m,
                            const ControlMask& cm) {
  const std::uint64_t dim = s.dim();
  const std::uint64_t stride = std::uint64_t(1) << q;
  for (std::uint64_t base = 0; base < dim; base += stride << 1) {
    for (std::uint64_t off = 0; off < stride; ++off) {
      const std::uint64_t i0 = base + off;
      if ((i0 & cm.mask) != cm.want) continue;
      const std::uint64_t i1 = i0 + stride;
      const cplx a0 = s.amplitudes[i0], a1 = s.amplitudes[i1];
      s.amplitudes[i0] = m[0] * a0 + m[1] * a1;
      s.amplitudes[i1] = m[2] * a0 + m[3] * a1;
    }
  }
}

inline void apply_block(QuantumState& s, const Gate& g, const ControlMask& cm) {
  const int k = int(g.targets.size());
  const std::uint64_t sub_dim = std::uint64_t(1) << k;
  std::uint64_t target_mask = 0;
  for (int t : g.targets) target_mask |= std::uint64_t(1) << t;
  const std::vector<cplx>& u = *g.payload;
  std::vector<cplx> in(sub_dim), out(sub_dim);
  std::vector<std::uint64_t> offset(sub_dim, 0);
  for (std::uint64_t j = 0; j < sub_dim; ++j)
    for (int b = 0; b < k; ++b)
      if ((j >> b) & 1) offset[j] |= std::uint64_t(1) << g.targets[b];
  const std::uint64_t dim = s.dim();
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & target_mask) continue;
    if ((base & cm.mask) != cm.want) continue;
    for (std::uint64_t j = 0; j < sub_dim; ++j)
      in[j] = s.amplitudes[base | offset[j]];
    for (std::uint64_t r = 0; r < sub_dim; ++r) {
      cplx acc = 0;
      for (std::uint64_t c = 0; c < sub_dim; ++c)
        acc += u[r * sub_dim + c] * in[c];
      out[r] = acc;
    }
    for (std::uint64_t j = 0; j < sub_dim; ++j)
      s.amplitudes[base | offset[j]] = out[j];
  }
}

inline void apply_gate(QuantumState& s, const Gate& g) {
  const ControlMask cm = control_mask(g);
  switch (g.kind) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::W:
    case GateKind::Wdg:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::Phase:
      apply_one_qubit(s, g.targets[0], one_qubit_matrix(g.kind, g.angle), cm);
      return;
    case GateKind::GlobalPhase: {
      if (!g.controls.empty())
        throw std::invalid_argument("global phase cannot carry controls");
      const cplx f = std::exp(cplx(0, g.angle));
      for (cplx& a : s.amplitudes) a *= f;
      return;
    }
    case GateKind::Cnot:
    case GateKind::Mcx:
      apply_one_qubit(s, g.targets[0], one_qubit_matrix(GateKind::X, 0), cm);
      return;
    case GateKind::CPhase:
    case GateKind::CCPhase:
      apply_one_qubit(s, g.targets[0],
                      one_qubit_matrix(GateKind::Phase, g.angle), cm);
      return;
    case GateKind::Block:
      apply_block(s, g, cm);
      return;
  }
  throw std::logic_error("unhandled gate kind");
}

}  // namespace detail

// Value semantics: the input state is left untouched.
inline QuantumState apply_circuit(const QuantumState& state, const Circuit& c) {
  if (c.n_qubits > state.n_qubits)
    throw std::invalid_argument("circuit is wider than the state");
  QuantumState out = state;
  for (const Gate& g : c.gates) detail::apply_gate(out, g);
  return out;
}

// Probability of reading `outcome` on one qubit, without collapsing.
inline double outcome_probability(const QuantumState& s, int qubit,
                                  int outcome) {
  if (qubit < 0 || qubit >= s.n_qubits)
    throw std::out_of_range("qubit index out of range");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("outcome must be 0 or 1");
  const std::uint64_t bit = std::uint64_t(1) << qubit;
  double p = 0;
  for (std::uint64_t i = 0; i < s.dim(); ++i)
    if (int((i & bit) != 0) == outcome) p += std::norm(s.amplitudes[i]);
  return p;
}

// Collapse the ancilla qubit onto `outcome` and renormalize. Returns the
// collapsed state (same width, ancilla left in the measured basis state) and
// the outcome probability. A branch with probability below 1e-14 is treated
// as empty and rejected.
inline std::pair<QuantumState, double> postselect_ancilla(
    const QuantumState& state, int outcome) {
  const double p = outcome_probability(state, state.ancilla_index, outcome);
  if (p < 1e-14)
    throw std::runtime_error("postselected branch has vanishing probability");
  QuantumState out = state;
  const std::uint64_t bit = std::uint64_t(1) << state.ancilla_index;
  const double scale = 1.0 / std::sqrt(p);
  for (std::uint64_t i = 0; i < out.dim(); ++i) {
    if (int((i & bit) != 0) == outcome)
      out.amplitudes[i] *= scale;
    else
      out.amplitudes[i] = cplx(0, 0);
  }
  return {std::move(out), p};
}

inline double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("state dimensions differ");
  cplx overlap = 0;
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    overlap += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return std::norm(overlap);
}

// Purity of the ancilla's reduced density matrix; 1 when the ancilla is
// unentangled with the rest of the register.
inline double ancilla_purity(const QuantumState& s) {
  const std::uint64_t bit = std::uint64_t(1) << s.ancilla_index;
  double r00 = 0, r11 = 0;
  cplx r01 = 0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    if (i & bit) continue;
    const cplx a0 = s.amplitudes[i];
    const cplx a1 = s.amplitudes[i | bit];
    r00 += std::norm(a0);
    r11 += std::norm(a1);
    r01 += a0 * std::conj(a1);
  }
  return r00 * r00 + r11 * r11 + 2.0 * std::norm(r01);
}

}  // namespace qpite
