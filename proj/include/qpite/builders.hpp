#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qpite/circuit.hpp"
#include "qpite/grid.hpp"
#include "qpite/transpile.hpp"

namespace qpite {

// Multi-controlled X over controls 0..k-1 with target k, lowered to the
// CNOT + single-qubit basis. With use_ancilla a helper line is appended
// (index k+1) and the linear-cost ladder construction is used; without it
// the ancilla-free phase-polynomial route applies (exponential, capped).
inline Circuit build_mcx(int n_controls, bool use_ancilla) {
  if (n_controls < 1) throw std::invalid_argument("need at least one control");
  Circuit c(n_controls + 1);
  std::vector<int> controls(n_controls);
  for (int i = 0; i < n_controls; ++i) controls[i] = i;
  c.append(Gate::mcx(controls, n_controls));
  return transpile_to_basis(c, use_ancilla ? 1 : 0);
}

namespace detail {

inline bool is_pi_angle(double phi) {
  return std::abs(std::remainder(std::abs(phi) - pi, 2 * pi)) < 1e-12;
}

// In-place phase mark e^{i phi |0><0|} over wires [0, n) of the host. The
// phi = pi form lowers to basis gates through a Hadamard-conjugated
// multi-controlled X; other angles keep a symbolic multi-controlled phase
// that simulates exactly but has no basis lowering.
inline void append_zero_reflection(Circuit& c, int n, double phi) {
  if (n < 2) throw std::invalid_argument("reflection needs at least 2 wires");
  if (n > c.n_qubits)
    throw std::invalid_argument("reflection wider than host circuit");
  for (int q = 0; q < n; ++q) c.append(Gate::x(q));
  if (is_pi_angle(phi)) {
    c.append(Gate::h(n - 1));
    if (n == 2) {
      c.append(Gate::cnot(0, 1));
    } else {
      std::vector<int> controls(n - 1);
      for (int i = 0; i < n - 1; ++i) controls[i] = i;
      c.append(Gate::mcx(controls, n - 1));
    }
    c.append(Gate::h(n - 1));
  } else if (n == 2) {
    c.append(Gate::cphase(0, 1, phi));
  } else {
    Gate g = Gate::phase(n - 1, phi);
    g.controls.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) g.controls[i] = i;
    g.negated.assign(n - 1, false);
    c.append(std::move(g));
  }
  for (int q = 0; q < n; ++q) c.append(Gate::x(q));
}

}  // namespace detail

// Reflection about |0...0> on n wires: e^{i phi |0><0|} exactly (the overall
// minus sign of the -S0 form is dropped as a global phase). The phi = pi
// path conjugates a multi-controlled X by Hadamards and X's and tolerates a
// dirty helper; the general-phi path marks the all-zero branch on a helper
// line that must start in |0>.
inline Circuit build_zero_reflection(int n, double phi) {
  if (n < 2) throw std::invalid_argument("reflection needs at least 2 wires");
  if (detail::is_pi_angle(phi)) {
    Circuit c(n);
    detail::append_zero_reflection(c, n, phi);
    return transpile_to_basis(c, 1);
  }
  Circuit c(n + 1);
  for (int q = 0; q < n; ++q) c.append(Gate::x(q));
  std::vector<int> controls(n - 1);
  for (int i = 0; i < n - 1; ++i) controls[i] = i;
  c.append(Gate::mcx(controls, n));
  c.append(Gate::cphase(n, n - 1, phi));
  c.append(Gate::mcx(controls, n));
  for (int q = 0; q < n; ++q) c.append(Gate::x(q));
  return transpile_to_basis(c, 0);
}

namespace detail {

// Standard Fourier transform: |x> -> (1/sqrt N) sum_f exp(2 pi i f x / N) |f>
// with both registers little-endian.
inline void append_qft(Circuit& c, int n) {
  for (int q = n - 1; q >= 0; --q) {
    c.append(Gate::h(q));
    for (int r = q - 1; r >= 0; --r)
      c.append(Gate::cphase(r, q, pi / double(std::uint64_t(1) << (q - r))));
  }
  for (int q = 0; q < n / 2; ++q) {
    const int p = n - 1 - q;
    c.append(Gate::cnot(q, p));
    c.append(Gate::cnot(p, q));
    c.append(Gate::cnot(q, p));
  }
}

}  // namespace detail

// Centered Fourier transform: matrix entries exp(2 pi i (f - N/2) x / N) / sqrt N,
// so row index f encodes frequency f - N/2. Equal to X on the top output wire
// after a plain transform (exact, since exp(2 pi i x) = 1 on integer x).
inline Circuit build_cqft(int n) {
  if (n < 1) throw std::invalid_argument("transform needs at least one wire");
  Circuit c(n);
  detail::append_qft(c, n);
  c.append(Gate::x(n - 1));
  return transpile_to_basis(c, 0);
}

// Diagonal phase exp(i (a0 + a1 j + a2 j^2)) over the index j of an n-wire
// register, emitted from the bit expansion of j and j^2.
inline void append_index_poly_phase(Circuit& c, int n, double a0, double a1,
                                    double a2) {
  if (a0 != 0) c.append(Gate::global_phase(a0));
  for (int q = 0; q < n; ++q) {
    const double w = double(std::uint64_t(1) << q);
    const double angle = a1 * w + a2 * w * w;
    if (angle != 0) c.append(Gate::phase(q, angle));
  }
  for (int q = 0; q < n; ++q)
    for (int r = q + 1; r < n; ++r) {
      const double angle = a2 * 2.0 * double(std::uint64_t(1) << (q + r));
      if (angle != 0) c.append(Gate::cphase(q, r, angle));
    }
}

// Same phase applied only when `ctrl` is set (one control added everywhere).
// The constant term would be a plain phase on the control; it is returned
// instead of emitted so the caller can merge deferred control phases.
inline double append_index_poly_phase_controlled(Circuit& c, int n, double a0,
                                                 double a1, double a2,
                                                 int ctrl) {
  for (int q = 0; q < n; ++q) {
    const double w = double(std::uint64_t(1) << q);
    const double angle = a1 * w + a2 * w * w;
    if (angle != 0) c.append(Gate::cphase(ctrl, q, angle));
  }
  for (int q = 0; q < n; ++q)
    for (int r = q + 1; r < n; ++r) {
      const double angle = a2 * 2.0 * double(std::uint64_t(1) << (q + r));
      if (angle != 0) c.append(Gate::ccphase(ctrl, q, r, angle));
    }
  return a0;
}

// Diagonal unitary exp(-i V(x_j) t) for a polynomial potential
// V(x) = coeffs[0] + coeffs[1] x + coeffs[2] x^2 on the grid points.
inline Circuit build_poly_phase(const std::vector<double>& coeffs, double t,
                                const GridSpec& grid) {
  if (coeffs.size() > 3)
    throw std::invalid_argument("polynomial degree above 2 not supported");
  const double dx = grid.dx();
  const double c0 = coeffs.size() > 0 ? coeffs[0] : 0.0;
  const double c1 = coeffs.size() > 1 ? coeffs[1] : 0.0;
  const double c2 = coeffs.size() > 2 ? coeffs[2] : 0.0;
  Circuit c(grid.n_qubits);
  append_index_poly_phase(c, grid.n_qubits, -t * c0, -t * c1 * dx,
                          -t * c2 * dx * dx);
  return transpile_to_basis(c, 0);
}

namespace detail {

inline constexpr double prep_eps = 1e-12;

// Uniformly controlled rotation over a Gray cycle: 2^s rotations and 2^s
// CNOTs realize select-dependent angles exactly.
inline void append_multiplexed_rotation(Circuit& c, GateKind kind, int target,
                                        const std::vector<int>& selects,
                                        const std::vector<double>& theta) {
  const int s = int(selects.size());
  const std::uint64_t K = std::uint64_t(1) << s;
  auto rot = [&](double a) {
    return kind == GateKind::Ry ? Gate::ry(target, a) : Gate::rz(target, a);
  };
  if (s == 0) {
    if (std::abs(theta[0]) > prep_eps) c.append(rot(theta[0]));
    return;
  }
  auto gray = [](std::uint64_t v) { return v ^ (v >> 1); };
  std::vector<double> phi(K, 0.0);
  for (std::uint64_t i = 0; i < K; ++i) {
    double acc = 0;
    for (std::uint64_t j = 0; j < K; ++j) {
      const int par = std::popcount(gray(i) & j) & 1;
      acc += par ? -theta[j] : theta[j];
    }
    phi[i] = acc / double(K);
  }
  bool any = false, tail = false;
  for (std::uint64_t i = 0; i < K; ++i) {
    if (std::abs(phi[i]) > prep_eps) any = true;
    if (i > 0 && std::abs(phi[i]) > prep_eps) tail = true;
  }
  if (!any) return;
  if (!tail) {  // constant angle: the control ladder collapses to nothing
    c.append(rot(phi[0]));
    return;
  }
  for (std::uint64_t i = 0; i < K; ++i) {
    if (std::abs(phi[i]) > prep_eps) c.append(rot(phi[i]));
    int d = std::countr_zero(i + 1);
    if (d > s - 1) d = s - 1;
    c.append_cancelling(Gate::cnot(selects[d], target));
  }
}

// Diagonal exp(i beta_x) over wires[0..m-1] via multiplexed Rz per wire plus
// one global phase.
inline void append_diagonal_phases(Circuit& c, const std::vector<int>& wires,
                                   std::vector<double> beta) {
  std::vector<int> rest = wires;
  while (!rest.empty()) {
    const std::size_t half = beta.size() / 2;
    std::vector<double> alpha(half), common(half);
    for (std::size_t j = 0; j < half; ++j) {
      alpha[j] = beta[2 * j + 1] - beta[2 * j];
      common[j] = 0.5 * (beta[2 * j + 1] + beta[2 * j]);
    }
    const int target = rest.front();
    rest.erase(rest.begin());
    append_multiplexed_rotation(c, GateKind::Rz, target, rest, alpha);
    beta = std::move(common);
  }
  if (std::abs(beta[0]) > prep_eps) c.append(Gate::global_phase(beta[0]));
}

}  // namespace detail

// Circuit mapping |0...0> to the given normalized amplitude vector: a
// multiplexed-Ry cascade fixes the magnitudes (and signs of real targets)
// at 2^n - 2 CNOTs or fewer; complex targets add a diagonal phase stage of
// up to the same cost again.
inline Circuit build_state_prep(const std::vector<cplx>& target) {
  const std::size_t dim = target.size();
  if (dim < 2 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("target length must be a power of two >= 2");
  int n = 0;
  while ((std::size_t(1) << n) < dim) ++n;
  double norm = 0;
  for (const cplx& a : target) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("target vector is not normalized");

  bool complex_target = false;
  for (const cplx& a : target)
    if (std::abs(a.imag()) > detail::prep_eps) complex_target = true;

  // Leaf values: signed amplitudes for real targets, magnitudes otherwise.
  std::vector<double> cur(dim);
  for (std::size_t x = 0; x < dim; ++x)
    cur[x] = complex_target ? std::abs(target[x]) : target[x].real();

  // Bottom-up subtree norms give the rotation angle of every node.
  std::vector<std::vector<double>> angles(n);
  for (int q = 0; q < n; ++q) {
    const std::size_t half = cur.size() / 2;
    std::vector<double> next(half);
    angles[q].resize(half);
    for (std::size_t j = 0; j < half; ++j) {
      const double v0 = cur[2 * j], v1 = cur[2 * j + 1];
      angles[q][j] = 2.0 * std::atan2(v1, v0);
      next[j] = std::hypot(v0, v1);
    }
    cur = std::move(next);
  }

  Circuit c(n);
  for (int q = n - 1; q >= 0; --q) {
    std::vector<int> selects(n - 1 - q);
    for (int i = 0; i < int(selects.size()); ++i) selects[i] = q + 1 + i;
    detail::append_multiplexed_rotation(c, GateKind::Ry, q, selects,
                                        angles[q]);
  }

  if (complex_target) {
    std::vector<double> beta(dim, 0.0);
    for (std::size_t x = 0; x < dim; ++x)
      if (std::abs(target[x]) > detail::prep_eps) beta[x] = std::arg(target[x]);
    std::vector<int> wires(n);
    for (int q = 0; q < n; ++q) wires[q] = q;
    detail::append_diagonal_phases(c, wires, std::move(beta));
  }
  return c;
}

}  // namespace qpite
