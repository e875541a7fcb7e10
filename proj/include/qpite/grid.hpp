#pragma once

#include <cstdint>
#include <stdexcept>

namespace qpite {

// Uniform position grid on [0, L): N = 2^n points, x_j = j * dx, left-aligned.
struct GridSpec {
  int n_qubits = 0;
  double length = 0;
  double mass = 1.0;
  double omega = 1.0;

  GridSpec() = default;
  GridSpec(int n, double l, double m, double w)
      : n_qubits(n), length(l), mass(m), omega(w) {
    if (n < 1) throw std::invalid_argument("grid needs at least one qubit");
    if (l <= 0 || m <= 0 || w <= 0)
      throw std::invalid_argument("grid parameters must be positive");
  }

  std::uint64_t n_points() const { return std::uint64_t(1) << n_qubits; }
  double dx() const { return length / double(n_points()); }
  double x(std::uint64_t j) const { return double(j) * dx(); }
};

}  // namespace qpite
