#pragma once

// Probabilistic imaginary-time evolution kernels. One ancilla qubit steers a
// damped propagator gamma * exp(-H * dtau) onto the ancilla-0 branch; the
// circuits here realize that map to first order in dtau from real-time
// evolution blocks, plus the exact dense reference used for validation.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qpite/circuit.hpp"
#include "qpite/dense.hpp"
#include "qpite/hamiltonian.hpp"
#include "qpite/statevector.hpp"

namespace qpite {

// Step parameters. theta carries the branch sign kappa: positive above
// gamma = 1/sqrt(2), negative below. s converts dtau into the real-evolution
// time u = s * dtau that the circuit actually runs.
struct PiteParams {
  double gamma = 0;
  double dtau = 0;
  double e0_shift = 0;
  double s = 0;
  double theta = 0;
  int kappa = 0;
};

inline PiteParams derive_params(double gamma, double dtau,
                                double e0_shift = 0.0) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie strictly between 0 and 1");
  if (!(dtau > 0.0)) throw std::invalid_argument("dtau must be positive");
  const double half = 1.0 / std::numbers::sqrt2;
  if (std::abs(gamma - half) < 1e-12)
    throw std::invalid_argument(
        "gamma = 1/sqrt(2) has no defined rotation branch");
  const double root = std::sqrt(1.0 - gamma * gamma);
  PiteParams p;
  p.gamma = gamma;
  p.dtau = dtau;
  p.e0_shift = e0_shift;
  p.s = gamma / root;
  p.kappa = gamma > half ? 1 : -1;
  p.theta =
      p.kappa * std::acos(std::min(1.0, (gamma + root) / std::numbers::sqrt2));
  return p;
}

namespace detail {

// Constant energy shifts commute with everything, so they leave the
// evolution blocks alone and only bias the emitted ancilla angle.
inline double emit_theta(const PiteParams& p) {
  return p.theta - p.e0_shift * p.s * p.dtau;
}

inline std::vector<cplx> row_major(const DMat& m) {
  std::vector<cplx> v;
  v.reserve(std::size_t(m.rows()) * std::size_t(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  return v;
}

}  // namespace detail

// Interface the kernel builders use to emit exp(-i H t): an uncontrolled
// block and a controlled block whose constant phase is returned to the
// caller for merging instead of being emitted on the control line. When a
// builder can do better than forward-then-controlled, it also provides
// append_core emitting diag(e^{-iHu}, e^{+iHu}) as one fused unit.
struct RteBuilder {
  int n_qubits = 0;
  std::function<void(Circuit&, double)> append_forward;
  std::function<double(Circuit&, double, int)> append_controlled;
  std::function<double(Circuit&, double, int)> append_core;
};

inline RteBuilder ising_rte(const WeightedGraph& g) {
  g.validate();
  RteBuilder b;
  b.n_qubits = g.n_nodes;
  b.append_forward = [g](Circuit& c, double t) { append_rte_ising(c, g, t); };
  b.append_controlled = [g](Circuit& c, double t, int ctrl) {
    return append_controlled_rte_ising(c, g, t, ctrl, true);
  };
  b.append_core = [g](Circuit& c, double u, int ctrl) {
    return append_fused_rte_ising(c, g, u, ctrl);
  };
  return b;
}

inline RteBuilder grid_rte(const GridSpec& grid) {
  RteBuilder b;
  b.n_qubits = grid.n_qubits;
  b.append_forward = [grid](Circuit& c, double t) {
    append_rte_grid(c, grid, t);
  };
  b.append_controlled = [grid](Circuit& c, double t, int ctrl) {
    return append_controlled_rte_grid(c, grid, t, ctrl);
  };
  return b;
}

// Exact evolution as opaque matrix gates; used when the Hamiltonian has no
// circuit realization, and for convergence studies against the dense path.
inline RteBuilder dense_rte(const HamiltonianOracle& h) {
  RteBuilder b;
  b.n_qubits = h.n_qubits;
  std::vector<int> wires(h.n_qubits);
  for (int q = 0; q < h.n_qubits; ++q) wires[q] = q;
  b.append_forward = [h, wires](Circuit& c, double t) {
    c.append(Gate::block(wires, detail::row_major(h.real_time(t)), "rte"));
  };
  b.append_controlled = [h, wires](Circuit& c, double t, int ctrl) {
    Gate g = Gate::block(wires, detail::row_major(h.real_time(t)), "rte");
    g.controls = {ctrl};
    g.negated = {false};
    c.append(std::move(g));
    return 0.0;
  };
  return b;
}

namespace detail {

inline constexpr double angle_eps = 1e-14;

// Emits the ancilla-diagonal core diag(e^{i th} e^{-iHu}, e^{-i th} e^{iHu}):
// forward evolution on both branches, a controlled reversal on the 1 branch,
// then the deferred control phase merged into one ancilla rotation.
inline void append_phase_core(Circuit& c, const RteBuilder& rte, double theta,
                              double u, int anc) {
  double deferred = 0.0;
  if (std::abs(u) > angle_eps) {
    if (rte.append_core) {
      deferred = rte.append_core(c, u, anc);
    } else {
      rte.append_forward(c, u);
      deferred = rte.append_controlled(c, -2.0 * u, anc);
    }
  }
  if (std::abs(deferred) > angle_eps)
    c.append(Gate::global_phase(deferred / 2));
  const double r = deferred - 2.0 * theta;
  if (std::abs(r) > angle_eps) c.append(Gate::rz(anc, r));
}

}  // namespace detail

// Alternating-sign accumulator for products of step kernels. Each kernel is
// a reflection, so successive steps fold into one core with signed sums of
// the angles and evolution times; parity tracks the leftover Hadamard.
struct FusionStack {
  double theta = 0;
  double u = 0;
  int count = 0;

  void push(const PiteParams& p) {
    theta = detail::emit_theta(p) - theta;
    u = p.s * p.dtau - u;
    ++count;
  }

  bool odd() const { return count % 2 != 0; }
};

// Product of the pushed step kernels, most recent applied last.
inline Circuit fused_pite_circuit(const RteBuilder& rte,
                                  const FusionStack& st) {
  Circuit c(rte.n_qubits + 1);
  const int a = rte.n_qubits;
  if (st.odd()) c.append(Gate::h(a));
  if (std::abs(st.theta) < detail::angle_eps &&
      std::abs(st.u) < detail::angle_eps)
    return c;
  c.append(Gate::w(a));
  detail::append_phase_core(c, rte, st.theta, st.u, a);
  c.append(Gate::wdg(a));
  return c;
}

// Reflection about the kernel image: U^dag Z_a U with the global sign
// dropped. Odd products give angles (2 theta, 2 u); even products pick up a
// quarter turn and reversed time, (pi/2 - 2 theta, -2 u).
inline Circuit fused_diffusion_circuit(const RteBuilder& rte,
                                       const FusionStack& st) {
  Circuit c(rte.n_qubits + 1);
  const int a = rte.n_qubits;
  c.append(Gate::x(a));
  c.append(Gate::w(a));
  if (st.odd())
    detail::append_phase_core(c, rte, 2.0 * st.theta, 2.0 * st.u, a);
  else
    detail::append_phase_core(c, rte, std::numbers::pi / 2 - 2.0 * st.theta,
                              -2.0 * st.u, a);
  c.append(Gate::wdg(a));
  return c;
}

// Single-step kernel in the fused form: the two controlled branch
// evolutions collapse into one forward block plus one controlled reversal.
inline Circuit approx_pite_circuit(const RteBuilder& rte,
                                   const PiteParams& p) {
  FusionStack st;
  st.push(p);
  return fused_pite_circuit(rte, st);
}

// Unfused variant that keeps the two branch evolutions separate. Agrees
// with the fused form exactly when the evolution blocks are exact; with
// Trotterized blocks the fused form is the definition.
inline Circuit unfused_pite_circuit(const RteBuilder& rte,
                                    const PiteParams& p) {
  Circuit c(rte.n_qubits + 1);
  const int a = rte.n_qubits;
  c.append(Gate::h(a));
  c.append(Gate::w(a));
  const double u = p.s * p.dtau;
  c.append(Gate::x(a));
  const double d0 = rte.append_controlled(c, u, a);
  c.append(Gate::x(a));
  const double d1 = rte.append_controlled(c, -u, a);
  const double phi0 = detail::emit_theta(p) + d0;
  const double phi1 = -detail::emit_theta(p) + d1;
  if (std::abs(phi0 + phi1) > detail::angle_eps)
    c.append(Gate::global_phase((phi0 + phi1) / 2));
  if (std::abs(phi1 - phi0) > detail::angle_eps)
    c.append(Gate::rz(a, phi1 - phi0));
  c.append(Gate::wdg(a));
  return c;
}

// Two successive kernels fused into a single core. Equal parameters cancel
// to the identity because each kernel is an involution.
inline Circuit two_step_circuit(const PiteParams& p2, const PiteParams& p1,
                                const RteBuilder& rte) {
  FusionStack st;
  st.push(p1);
  st.push(p2);
  return fused_pite_circuit(rte, st);
}

// Dense reference block encoding. The ancilla-0 block is exactly
// M = gamma * exp(-(H + e0) dtau); the full operator is the Hermitian
// unitary [[M, S], [S, -M]] with S = sqrt(1 - M^2).
inline DMat exact_pite_unitary(const HamiltonianOracle& h,
                               const PiteParams& p) {
  const double top =
      p.gamma * std::exp(-(h.lambda_min() + p.e0_shift) * p.dtau);
  if (top > 1.0 + 1e-9)
    throw std::invalid_argument(
        "damped propagator exceeds unit norm; raise the energy shift or "
        "shrink gamma");
  const Eigen::Index dim = h.matrix.rows();
  DVec m(dim), s(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mj =
        p.gamma * std::exp(-(h.eigenvalues(j) + p.e0_shift) * p.dtau);
    m(j) = mj;
    s(j) = std::sqrt(std::max(0.0, 1.0 - mj * mj));
  }
  const DMat mm = h.eigenvectors * m.asDiagonal() * h.eigenvectors.adjoint();
  const DMat ss = h.eigenvectors * s.asDiagonal() * h.eigenvectors.adjoint();
  DMat u(2 * dim, 2 * dim);
  u.topLeftCorner(dim, dim) = mm;
  u.topRightCorner(dim, dim) = ss;
  u.bottomLeftCorner(dim, dim) = ss;
  u.bottomRightCorner(dim, dim) = -mm;
  return u;
}

// Probability of landing on the ancilla-0 branch when the exact kernel acts
// on |psi>|0>: gamma^2 <psi| exp(-2 (H + e0) dtau) |psi>. Its square root
// is the amplitude the amplification stage works with.
inline double success_probability(const QuantumState& psi,
                                  const HamiltonianOracle& h,
                                  const PiteParams& p) {
  if (psi.n_qubits != h.n_qubits)
    throw std::invalid_argument("state width does not match Hamiltonian");
  const DVec x = to_dense(psi);
  const DVec y = h.imaginary_time(p.dtau) * x;
  return p.gamma * p.gamma * std::exp(-2.0 * p.e0_shift * p.dtau) *
         y.squaredNorm();
}

}  // namespace qpite
