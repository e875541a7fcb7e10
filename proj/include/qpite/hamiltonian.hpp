#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpite/builders.hpp"
#include "qpite/dense.hpp"
#include "qpite/grid.hpp"

namespace qpite {

struct WeightedGraph {
  struct Edge {
    int u = 0, v = 0;
    double weight = 1.0;
  };
  int n_nodes = 0;
  std::vector<Edge> edges;

  void validate() const {
    for (const Edge& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes)
        throw std::invalid_argument("edge endpoint out of range");
      if (e.u == e.v) throw std::invalid_argument("self-loop in graph");
    }
  }
};

// Text format: one `u v weight` triple per line, `#` starts a comment.
inline WeightedGraph parse_graph(std::istream& in) {
  WeightedGraph g;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    int u, v;
    double w;
    if (!(ls >> u >> v)) continue;  // blank or comment-only line
    if (!(ls >> w)) w = 1.0;
    g.edges.push_back({u, v, w});
    g.n_nodes = std::max({g.n_nodes, u + 1, v + 1});
  }
  g.validate();
  return g;
}

inline WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return parse_graph(in);
}

// Four-node ring with one chord; the bundled demonstration instance.
inline WeightedGraph default_maxcut_graph() {
  WeightedGraph g;
  g.n_nodes = 4;
  g.edges = {{0, 1, 1.0}, {2, 3, 1.0}, {1, 2, 1.0}, {3, 0, 1.0}, {0, 2, 1.0}};
  return g;
}

// Total weight of edges cut by the partition encoded in `mask` (bit i = side
// of node i).
inline double cut_weight(const WeightedGraph& g, std::uint64_t mask) {
  double w = 0;
  for (const auto& e : g.edges)
    if (((mask >> e.u) & 1) != ((mask >> e.v) & 1)) w += e.weight;
  return w;
}

inline constexpr int oracle_qubit_cap = 12;

// Dense Hermitian operator with its spectral decomposition, eigenvalues
// ascending. The classical reference for everything the circuits emulate.
struct HamiltonianOracle {
  int n_qubits = 0;
  DMat matrix;
  Eigen::VectorXd eigenvalues;
  DMat eigenvectors;  // columns, matching eigenvalue order

  static HamiltonianOracle from_matrix(DMat h, int cap = oracle_qubit_cap) {
    if (h.rows() != h.cols() || h.rows() < 2)
      throw std::invalid_argument("Hamiltonian must be square");
    int n = 0;
    while ((Eigen::Index(1) << n) < h.rows()) ++n;
    if ((Eigen::Index(1) << n) != h.rows())
      throw std::invalid_argument("Hamiltonian dimension must be 2^n");
    if (n > cap)
      throw std::invalid_argument("Hamiltonian exceeds dense capacity");
    if (deviation_from_hermitian(h) > 1e-10)
      throw std::invalid_argument("Hamiltonian is not Hermitian");
    HamiltonianOracle o;
    o.n_qubits = n;
    o.matrix = std::move(h);
    Eigen::SelfAdjointEigenSolver<DMat> es(o.matrix);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigendecomposition failed");
    o.eigenvalues = es.eigenvalues();
    o.eigenvectors = es.eigenvectors();
    return o;
  }

  double lambda_min() const { return eigenvalues(0); }
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }

  DVec ground_state() const { return eigenvectors.col(0); }

  // exp(-H tau), the unnormalized imaginary-time filter.
  DMat imaginary_time(double tau) const {
    DVec d(eigenvalues.size());
    for (Eigen::Index i = 0; i < d.size(); ++i)
      d(i) = std::exp(-eigenvalues(i) * tau);
    return eigenvectors * d.asDiagonal() * eigenvectors.adjoint();
  }

  // exp(-i H t).
  DMat real_time(double t) const { return hermitian_phase(matrix, -t); }

  // <H> over the low n_qubits wires of a normalized state; any higher wires
  // are summed over as a classical mixture.
  double expectation(const QuantumState& s) const {
    if (s.n_qubits < n_qubits)
      throw std::invalid_argument("state narrower than Hamiltonian");
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    const std::uint64_t blocks = s.dim() / dim;
    double e = 0;
    DVec v(dim);
    for (std::uint64_t b = 0; b < blocks; ++b) {
      for (std::uint64_t x = 0; x < dim; ++x)
        v(x) = s.amplitudes[b * dim + x];
      e += std::real(v.dot(matrix * v));  // dot conjugates the left side
    }
    return e;
  }
};

// Cut Hamiltonian of a weighted graph: diagonal, H(b) = -cut(b), so the
// ground space encodes the maximum cut.
inline HamiltonianOracle maxcut_hamiltonian(const WeightedGraph& g) {
  g.validate();
  if (g.n_nodes < 1) throw std::invalid_argument("empty graph");
  const std::uint64_t dim = std::uint64_t(1) << g.n_nodes;
  DMat h = DMat::Zero(dim, dim);
  for (std::uint64_t b = 0; b < dim; ++b) h(b, b) = -cut_weight(g, b);
  return HamiltonianOracle::from_matrix(std::move(h));
}

namespace detail {

// Dense centered Fourier matrix, frequencies f - N/2 on the row index.
inline DMat centered_dft_matrix(int n) {
  const std::uint64_t dim = std::uint64_t(1) << n;
  DMat m(dim, dim);
  const double w = 2.0 * pi / double(dim);
  for (std::uint64_t f = 0; f < dim; ++f)
    for (std::uint64_t x = 0; x < dim; ++x)
      m(f, x) = std::exp(cplx(0, w * (double(f) - double(dim) / 2) *
                                     double(x))) /
                std::sqrt(double(dim));
  return m;
}

}  // namespace detail

// Discretized single-particle Hamiltonian on the grid: kinetic term diagonal
// in the centered momentum basis, harmonic potential centered at L/2.
inline HamiltonianOracle harmonic_hamiltonian(const GridSpec& grid) {
  const std::uint64_t dim = grid.n_points();
  const DMat f = detail::centered_dft_matrix(grid.n_qubits);
  DVec kin(dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    const double k = 2.0 * detail::pi / grid.length *
                     (double(j) - double(dim) / 2);
    kin(j) = k * k / (2.0 * grid.mass);
  }
  DMat h = f.adjoint() * kin.asDiagonal() * f;
  for (std::uint64_t j = 0; j < dim; ++j) {
    const double d = grid.x(j) - grid.length / 2;
    h(j, j) += 0.5 * grid.mass * grid.omega * grid.omega * d * d;
  }
  // Symmetrize away roundoff from the conjugation product.
  DMat sym = 0.5 * (h + h.adjoint());
  return HamiltonianOracle::from_matrix(std::move(sym));
}

// ---- Real-time evolution circuits ----

// Exact exp(-i H t) for the cut Hamiltonian: per edge, the parity phase
// CX - P - CX. No constant term arises.
inline void append_rte_ising(Circuit& c, const WeightedGraph& g, double t) {
  for (const auto& e : g.edges) {
    c.append_cancelling(Gate::cnot(e.u, e.v));
    c.append(Gate::phase(e.v, e.weight * t));
    c.append_cancelling(Gate::cnot(e.u, e.v));
  }
}

inline Circuit rte_circuit_ising(const WeightedGraph& g, double t) {
  g.validate();
  Circuit c(g.n_nodes);
  append_rte_ising(c, g, t);
  return c;
}

// Controlled version, pre-lowered to CNOT + phases: per edge four CNOTs.
// Edge order may be reversed so the seam against a preceding uncontrolled
// block cancels one CNOT pair. Returns the deferred phase angle the caller
// must still apply to the control line.
inline double append_controlled_rte_ising(Circuit& c, const WeightedGraph& g,
                                          double t, int ctrl,
                                          bool reverse_edges) {
  double deferred = 0;
  auto emit = [&](const WeightedGraph::Edge& e) {
    const double lam = e.weight * t;
    c.append_cancelling(Gate::cnot(e.u, e.v));
    c.append(Gate::phase(e.v, lam / 2));
    c.append_cancelling(Gate::cnot(ctrl, e.v));
    c.append(Gate::phase(e.v, -lam / 2));
    c.append_cancelling(Gate::cnot(ctrl, e.v));
    c.append_cancelling(Gate::cnot(e.u, e.v));
    deferred += lam / 2;
  };
  if (reverse_edges)
    for (auto it = g.edges.rbegin(); it != g.edges.rend(); ++it) emit(*it);
  else
    for (const auto& e : g.edges) emit(e);
  return deferred;
}

// Fused core diag(exp(-iHu), exp(+iHu)) up to a deferred phase on the
// control-1 branch, returned for the caller to fold into its ancilla
// rotation. All edge terms commute, so the emission reorders them: the
// last edge's uncontrolled factor moves behind the controlled pass so
// both of its CNOTs cancel into controlled-gadget seams, and controlled
// gadgets with disjoint parity wires nest into shared blocks so their
// control CNOTs pack instead of serializing.
inline double append_fused_rte_ising(Circuit& c, const WeightedGraph& g,
                                     double u, int ctrl) {
  using Edge = WeightedGraph::Edge;
  const double t = -2.0 * u;
  double deferred = 0;
  auto forward = [&](const Edge& e) {
    c.append_cancelling(Gate::cnot(e.u, e.v));
    c.append(Gate::phase(e.v, e.weight * u));
    c.append_cancelling(Gate::cnot(e.u, e.v));
  };
  auto controlled_block = [&](const std::vector<const Edge*>& b) {
    for (const Edge* e : b) {
      c.append_cancelling(Gate::cnot(e->u, e->v));
      c.append(Gate::phase(e->v, e->weight * t / 2));
    }
    for (const Edge* e : b) c.append_cancelling(Gate::cnot(ctrl, e->v));
    for (const Edge* e : b) c.append(Gate::phase(e->v, -e->weight * t / 2));
    for (const Edge* e : b) c.append_cancelling(Gate::cnot(ctrl, e->v));
    for (auto it = b.rbegin(); it != b.rend(); ++it) {
      c.append_cancelling(Gate::cnot((*it)->u, (*it)->v));
      deferred += (*it)->weight * t / 2;
    }
  };
  // A gadget may join a block only if its parity wire is fresh and it does
  // not read a wire an earlier member has already folded its parity into.
  auto admits = [](const std::vector<const Edge*>& b, const Edge* e) {
    for (const Edge* m : b)
      if (m->v == e->v || e->u == m->v) return false;
    return true;
  };
  if (g.edges.size() < 2) {
    for (const auto& e : g.edges) forward(e);
    for (const auto& e : g.edges) controlled_block({&e});
    return deferred;
  }
  const Edge* fold = &g.edges.back();
  const Edge* seam = &g.edges[g.edges.size() - 2];
  for (const auto& e : g.edges)
    if (&e != fold) forward(e);
  std::vector<std::vector<const Edge*>> blocks{{seam}};
  std::vector<const Edge*> leftover;
  for (const auto& e : g.edges) {
    if (&e == fold || &e == seam) continue;
    if (admits(blocks.front(), &e))
      blocks.front().push_back(&e);
    else
      leftover.push_back(&e);
  }
  std::vector<const Edge*> fold_block{fold};
  for (const Edge* e : leftover) {
    if (admits(fold_block, e)) {
      fold_block.push_back(e);
      continue;
    }
    bool placed = false;
    for (std::size_t i = 1; i < blocks.size() && !placed; ++i)
      if (admits(blocks[i], e)) {
        blocks[i].push_back(e);
        placed = true;
      }
    if (!placed) blocks.push_back({e});
  }
  blocks.push_back(std::move(fold_block));
  for (const auto& b : blocks) controlled_block(b);
  forward(*fold);
  return deferred;
}

namespace detail {

struct GridPhaseCoeffs {
  double a0, a1, a2;
};

// Momentum-space phase exp(-i k^2/(2m) t) expanded over the index bits.
inline GridPhaseCoeffs kinetic_coeffs(const GridSpec& g, double t) {
  const double n = double(g.n_points());
  const double unit = 2.0 * pi / g.length;
  const double kappa = t * unit * unit / (2.0 * g.mass);
  return {-kappa * n * n / 4.0, kappa * n, -kappa};
}

// Position-space phase exp(-i V(x_j) t) for the centered harmonic well.
inline GridPhaseCoeffs potential_coeffs(const GridSpec& g, double t) {
  const double beta = 0.5 * g.mass * g.omega * g.omega;
  const double dx = g.dx();
  return {-t * beta * g.length * g.length / 4.0, t * beta * dx * g.length,
          -t * beta * dx * dx};
}

}  // namespace detail

// One first-order split step: kinetic phase in the centered momentum frame,
// then the potential phase in position space.
inline void append_rte_grid(Circuit& c, const GridSpec& grid, double t) {
  const Circuit f = build_cqft(grid.n_qubits);
  const auto kin = detail::kinetic_coeffs(grid, t);
  const auto pot = detail::potential_coeffs(grid, t);
  c.append(f);
  append_index_poly_phase(c, grid.n_qubits, kin.a0, kin.a1, kin.a2);
  c.append(f.inverse());
  append_index_poly_phase(c, grid.n_qubits, pot.a0, pot.a1, pot.a2);
}

inline Circuit rte_circuit_grid(const GridSpec& grid, double t) {
  Circuit c(grid.n_qubits);
  append_rte_grid(c, grid, t);
  return c;
}

// Controlled split step: the Fourier frames stay uncontrolled, only the
// diagonal phases gain the control. Returns the deferred control-line phase.
inline double append_controlled_rte_grid(Circuit& c, const GridSpec& grid,
                                         double t, int ctrl) {
  const Circuit f = build_cqft(grid.n_qubits);
  const auto kin = detail::kinetic_coeffs(grid, t);
  const auto pot = detail::potential_coeffs(grid, t);
  double deferred = 0;
  c.append(f);
  deferred += append_index_poly_phase_controlled(c, grid.n_qubits, kin.a0,
                                                 kin.a1, kin.a2, ctrl);
  c.append(f.inverse());
  deferred += append_index_poly_phase_controlled(c, grid.n_qubits, pot.a0,
                                                 pot.a1, pot.a2, ctrl);
  return deferred;
}

}  // namespace qpite
