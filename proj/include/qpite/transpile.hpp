#pragma once

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qpite/circuit.hpp"

namespace qpite {

struct CircuitMetrics {
  int depth = 0;
  int cnot_count = 0;
  int total_gates = 0;
};

// Greedy layering: a gate lands one layer below the deepest wire it touches.
inline CircuitMetrics metrics(const Circuit& c) {
  CircuitMetrics m;
  std::vector<int> wire_depth(c.n_qubits, 0);
  for (const Gate& g : c.gates) {
    ++m.total_gates;
    if (g.kind == GateKind::Cnot) ++m.cnot_count;
    int level = 0;
    for (int q : g.targets) level = std::max(level, wire_depth[q]);
    for (int q : g.controls) level = std::max(level, wire_depth[q]);
    if (g.targets.empty() && g.controls.empty()) continue;  // global phase
    ++level;
    for (int q : g.targets) wire_depth[q] = level;
    for (int q : g.controls) wire_depth[q] = level;
    m.depth = std::max(m.depth, level);
  }
  return m;
}

namespace detail {

inline constexpr double pi = std::numbers::pi;

// Four-CX Toffoli core: equals CCX times a diagonal on the two controls
// (a controlled-S correction), which the doubled ladder network cancels.
inline void emit_core(Circuit& out, int c1, int c2, int t, bool dagger) {
  if (!dagger) {
    out.append(Gate::h(t));
    out.append_cancelling(Gate::cnot(c2, t));
    out.append(Gate::phase(t, -pi / 4));
    out.append_cancelling(Gate::cnot(c1, t));
    out.append(Gate::phase(t, pi / 4));
    out.append_cancelling(Gate::cnot(c2, t));
    out.append(Gate::phase(t, -pi / 4));
    out.append_cancelling(Gate::cnot(c1, t));
    out.append(Gate::phase(t, pi / 4));
    out.append(Gate::h(t));
  } else {
    out.append(Gate::h(t));
    out.append(Gate::phase(t, -pi / 4));
    out.append_cancelling(Gate::cnot(c1, t));
    out.append(Gate::phase(t, pi / 4));
    out.append_cancelling(Gate::cnot(c2, t));
    out.append(Gate::phase(t, -pi / 4));
    out.append_cancelling(Gate::cnot(c1, t));
    out.append(Gate::phase(t, pi / 4));
    out.append_cancelling(Gate::cnot(c2, t));
    out.append(Gate::h(t));
  }
}

// Exact Toffoli, 6 CX: the core plus its controlled-S correction.
inline void emit_toffoli(Circuit& out, int c1, int c2, int t) {
  emit_core(out, c1, c2, t, false);
  out.append(Gate::phase(c1, pi / 4));
  out.append(Gate::phase(c2, pi / 4));
  out.append_cancelling(Gate::cnot(c1, c2));
  out.append(Gate::phase(c2, -pi / 4));
  out.append_cancelling(Gate::cnot(c1, c2));
}

inline void emit_cphase(Circuit& out, int c, int t, double a) {
  out.append(Gate::phase(c, a / 2));
  out.append(Gate::phase(t, a / 2));
  out.append_cancelling(Gate::cnot(c, t));
  out.append(Gate::phase(t, -a / 2));
  out.append_cancelling(Gate::cnot(c, t));
}

inline void emit_ccphase(Circuit& out, int c1, int c2, int t, double a) {
  emit_cphase(out, c2, t, a / 2);
  out.append_cancelling(Gate::cnot(c1, c2));
  emit_cphase(out, c2, t, -a / 2);
  out.append_cancelling(Gate::cnot(c1, c2));
  emit_cphase(out, c1, t, a / 2);
}

inline void emit_crz(Circuit& out, int c, int t, double a) {
  out.append(Gate::rz(t, a / 2));
  out.append_cancelling(Gate::cnot(c, t));
  out.append(Gate::rz(t, -a / 2));
  out.append_cancelling(Gate::cnot(c, t));
}

// Doubled ladder for C^m(X) with m-2 borrowed (possibly dirty) ancillas.
// Interior slots are relative-phase cores in the first half and their
// adjoints in the second; the apex Toffoli stays exact in both.
inline void emit_chain(Circuit& out, const std::vector<int>& c, int t,
                       const std::vector<int>& anc) {
  const int m = int(c.size());
  if (m == 0) {
    out.append(Gate::x(t));
    return;
  }
  if (m == 1) {
    out.append(Gate::cnot(c[0], t));
    return;
  }
  if (m == 2) {
    emit_toffoli(out, c[0], c[1], t);
    return;
  }
  if (int(anc.size()) < m - 2)
    throw std::invalid_argument("chain needs m-2 ancilla lines");
  for (int half = 0; half < 2; ++half) {
    const bool dg = half == 1;
    emit_toffoli(out, c[m - 1], anc[m - 3], t);
    for (int i = m - 2; i >= 2; --i)
      emit_core(out, c[i], anc[i - 2], anc[i - 1], dg);
    emit_core(out, c[0], c[1], anc[0], dg);
    for (int i = 2; i <= m - 2; ++i)
      emit_core(out, c[i], anc[i - 2], anc[i - 1], dg);
  }
}

// C^k(X) with a single borrowed helper line: split the controls in two and
// interleave the halves so the helper's temporary state cancels.
inline void emit_mcx_split(Circuit& out, const std::vector<int>& c, int t,
                           int helper) {
  const int k = int(c.size());
  const int k1 = (k + 1) / 2;
  std::vector<int> g1(c.begin(), c.begin() + k1);
  std::vector<int> g2(c.begin() + k1, c.end());
  std::vector<int> anc1 = g2;  // dirty borrows for the first chain
  anc1.push_back(t);
  std::vector<int> g2h = g2;
  g2h.push_back(helper);
  const std::vector<int>& anc2 = g1;  // dirty borrows for the second chain
  emit_chain(out, g1, helper, anc1);
  emit_chain(out, g2h, t, anc2);
  emit_chain(out, g1, helper, anc1);
  emit_chain(out, g2h, t, anc2);
}

// Ancilla-free C^k(X) as H · C^kZ · H with the phase polynomial of the AND
// function emitted subset by subset over parity ladders. Exponential in k;
// kept as a fallback and for small widths.
inline void emit_mcx_parity(Circuit& out, const std::vector<int>& c, int t) {
  const int m = int(c.size()) + 1;
  if (m - 1 > 7)
    throw std::invalid_argument("ancilla-free multi-control capped at 7");
  std::vector<int> wires = c;
  wires.push_back(t);
  out.append(Gate::h(t));
  const double unit = pi / double(std::uint64_t(1) << (m - 1));
  for (std::uint64_t s = 1; s < (std::uint64_t(1) << m); ++s) {
    const int pop = std::popcount(s);
    const double theta = (pop % 2 == 1) ? unit : -unit;
    int anchor = -1;
    std::vector<int> rest;
    for (int b = 0; b < m; ++b) {
      if (!((s >> b) & 1)) continue;
      if (anchor < 0)
        anchor = wires[b];
      else
        rest.push_back(wires[b]);
    }
    for (int w : rest) out.append_cancelling(Gate::cnot(w, anchor));
    out.append(Gate::phase(anchor, theta));
    for (auto it = rest.rbegin(); it != rest.rend(); ++it)
      out.append_cancelling(Gate::cnot(*it, anchor));
  }
  out.append(Gate::h(t));
}

struct Transpiler {
  Circuit out;
  int budget;

  Transpiler(int width, int ancilla_budget)
      : out(width), budget(ancilla_budget) {}

  int claim_helper(const Gate& g) {
    std::vector<bool> used(out.n_qubits, false);
    for (int q : g.targets) used[q] = true;
    for (int q : g.controls) used[q] = true;
    for (int q = 0; q < out.n_qubits; ++q)
      if (!used[q]) return q;  // borrow the lowest untouched line
    if (budget > 0) {
      --budget;
      ++out.n_qubits;
      return out.n_qubits - 1;
    }
    return -1;
  }

  void lower_mcx(const Gate& g) {
    const int t = g.targets[0];
    const int k = int(g.controls.size());
    if (k == 1) {
      out.append_cancelling(Gate::cnot(g.controls[0], t));
      return;
    }
    if (k == 2) {
      emit_toffoli(out, g.controls[0], g.controls[1], t);
      return;
    }
    const int helper = claim_helper(g);
    if (helper >= 0)
      emit_mcx_split(out, g.controls, t, helper);
    else
      emit_mcx_parity(out, g.controls, t);
  }

  void lower(const Gate& g) {
    // Open-circle controls become X conjugation around the positive form.
    if (!g.negated.empty()) {
      std::vector<int> flipped;
      for (std::size_t i = 0; i < g.controls.size(); ++i)
        if (g.negated[i]) flipped.push_back(g.controls[i]);
      Gate pos = g;
      pos.negated.clear();
      for (int q : flipped) out.append_cancelling(Gate::x(q));
      lower(pos);
      for (int q : flipped) out.append_cancelling(Gate::x(q));
      return;
    }
    const int nc = int(g.controls.size());
    switch (g.kind) {
      case GateKind::GlobalPhase:
        out.append(g);
        return;
      case GateKind::X:
      case GateKind::Cnot:
      case GateKind::Mcx: {
        if (nc == 0) {
          out.append_cancelling(Gate::x(g.targets[0]));
          return;
        }
        lower_mcx(Gate::mcx(g.controls, g.targets[0]));
        return;
      }
      case GateKind::Y:
      case GateKind::Z:
      case GateKind::H:
      case GateKind::W:
      case GateKind::Wdg:
      case GateKind::Ry:
        if (nc == 0) {
          out.append(g);
          return;
        }
        if (g.kind == GateKind::Z && nc == 1) {
          emit_cphase(out, g.controls[0], g.targets[0], pi);
          return;
        }
        throw std::invalid_argument("no lowering for this controlled gate");
      case GateKind::Rz:
        if (nc == 0)
          out.append(g);
        else if (nc == 1)
          emit_crz(out, g.controls[0], g.targets[0], g.angle);
        else
          throw std::invalid_argument("no lowering for this controlled gate");
        return;
      case GateKind::Phase:
      case GateKind::CPhase:
      case GateKind::CCPhase:
        if (nc == 0)
          out.append(g);
        else if (nc == 1)
          emit_cphase(out, g.controls[0], g.targets[0], g.angle);
        else if (nc == 2)
          emit_ccphase(out, g.controls[0], g.controls[1], g.targets[0],
                       g.angle);
        else
          throw std::invalid_argument("no lowering for this controlled gate");
        return;
      case GateKind::Block:
        throw std::invalid_argument(
            "opaque blocks are simulation-only and cannot be transpiled");
    }
    throw std::logic_error("unhandled gate kind");
  }
};

}  // namespace detail

// Rewrite into the CNOT + single-qubit basis. `ancilla_budget` caps how many
// fresh lines may be appended for multi-control lowering; lines already free
// inside the circuit are borrowed first (they may be dirty).
inline Circuit transpile_to_basis(const Circuit& c, int ancilla_budget = 0) {
  detail::Transpiler tp(c.n_qubits, ancilla_budget);
  for (const Gate& g : c.gates) tp.lower(g);
  return tp.out;
}

}  // namespace qpite
