#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "qpite/statevector.hpp"

namespace qpite {

using DMat = Eigen::MatrixXcd;
using DVec = Eigen::VectorXcd;

// Full unitary of a circuit, built column by column through the simulator.
inline DMat circuit_unitary(const Circuit& c) {
  const std::uint64_t dim = std::uint64_t(1) << c.n_qubits;
  DMat u(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    QuantumState s;
    s.n_qubits = c.n_qubits;
    s.ancilla_index = c.n_qubits - 1;
    s.amplitudes.assign(dim, cplx(0, 0));
    s.amplitudes[col] = cplx(1, 0);
    for (const Gate& g : c.gates) detail::apply_gate(s, g);
    for (std::uint64_t row = 0; row < dim; ++row) u(row, col) = s.amplitudes[row];
  }
  return u;
}

inline double max_abs_diff(const DMat& a, const DMat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Distance up to a global phase, aligned on the largest entry of a.
inline double phase_aligned_diff(const DMat& a, const DMat& b) {
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(a(r, c)) < 1e-300 || std::abs(b(r, c)) < 1e-300)
    return max_abs_diff(a, b);
  cplx phase = a(r, c) / b(r, c);
  phase /= std::abs(phase);
  return max_abs_diff(a, phase * b);
}

inline double deviation_from_unitary(const DMat& u) {
  return max_abs_diff(u.adjoint() * u, DMat::Identity(u.rows(), u.cols()));
}

inline double deviation_from_hermitian(const DMat& h) {
  return max_abs_diff(h, h.adjoint());
}

// f applied to a Hermitian matrix through its spectral decomposition.
inline DMat hermitian_function(const DMat& h,
                               const std::function<double(double)>& f) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix not square");
  if (deviation_from_hermitian(h) > 1e-10)
    throw std::invalid_argument("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<DMat> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXd vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = f(vals(i));
  return es.eigenvectors() * vals.cast<cplx>().asDiagonal() *
         es.eigenvectors().adjoint();
}

// exp(s H) for Hermitian H and real s.
inline DMat hermitian_exp(const DMat& h, double s) {
  return hermitian_function(h, [s](double x) { return std::exp(s * x); });
}

// exp(i s H) for Hermitian H and real s.
inline DMat hermitian_phase(const DMat& h, double s) {
  if (deviation_from_hermitian(h) > 1e-10)
    throw std::invalid_argument("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<DMat> es(h);
  DVec phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(cplx(0, s * es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline DVec to_dense(const QuantumState& s) {
  DVec v(s.dim());
  for (std::uint64_t i = 0; i < s.dim(); ++i) v(i) = s.amplitudes[i];
  return v;
}

inline QuantumState from_dense(const DVec& v, int n_qubits) {
  if (v.size() != Eigen::Index(std::uint64_t(1) << n_qubits))
    throw std::invalid_argument("vector length != 2^n");
  QuantumState s;
  s.n_qubits = n_qubits;
  s.ancilla_index = n_qubits - 1;
  s.amplitudes.assign(v.data(), v.data() + v.size());
  return s;
}

}  // namespace qpite
