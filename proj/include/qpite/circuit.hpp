#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpite {

using cplx = std::complex<double>;

inline constexpr const char* version = "0.1.0";

enum class GateKind {
  X,
  Y,
  Z,
  H,
  W,            // (1/sqrt2) [[1, -i], [1, i]], ancilla basis change
  Wdg,
  Ry,
  Rz,           // diag(e^{-i a/2}, e^{+i a/2})
  Phase,        // diag(1, e^{i a})
  GlobalPhase,  // e^{i a} on the whole register
  Cnot,
  CPhase,       // controlled Phase
  CCPhase,      // doubly controlled Phase
  Mcx,          // multi-controlled X
  Block,        // opaque unitary on a list of target qubits
};

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::W: return "W";
    case GateKind::Wdg: return "WDG";
    case GateKind::Ry: return "RY";
    case GateKind::Rz: return "RZ";
    case GateKind::Phase: return "P";
    case GateKind::GlobalPhase: return "GPHASE";
    case GateKind::Cnot: return "CNOT";
    case GateKind::CPhase: return "CP";
    case GateKind::CCPhase: return "CCP";
    case GateKind::Mcx: return "MCX";
    case GateKind::Block: return "BLOCK";
  }
  return "?";
}

// One gate. `targets` are the acted-on qubits (for Block, targets[0] is the
// least significant index of the payload matrix). `controls` may carry
// per-control polarity in `negated`: true means the gate fires on |0>.
struct Gate {
  GateKind kind{};
  std::vector<int> targets;
  std::vector<int> controls;
  std::vector<bool> negated;
  double angle = 0.0;
  std::shared_ptr<const std::vector<cplx>> payload;
  std::string label;

  bool has_angle() const {
    switch (kind) {
      case GateKind::Ry:
      case GateKind::Rz:
      case GateKind::Phase:
      case GateKind::GlobalPhase:
      case GateKind::CPhase:
      case GateKind::CCPhase:
        return true;
      default:
        return false;
    }
  }

  static Gate x(int q) { return simple(GateKind::X, q); }
  static Gate y(int q) { return simple(GateKind::Y, q); }
  static Gate z(int q) { return simple(GateKind::Z, q); }
  static Gate h(int q) { return simple(GateKind::H, q); }
  static Gate w(int q) { return simple(GateKind::W, q); }
  static Gate wdg(int q) { return simple(GateKind::Wdg, q); }
  static Gate ry(int q, double a) { return rot(GateKind::Ry, q, a); }
  static Gate rz(int q, double a) { return rot(GateKind::Rz, q, a); }
  static Gate phase(int q, double a) { return rot(GateKind::Phase, q, a); }

  static Gate global_phase(double a) {
    Gate g;
    g.kind = GateKind::GlobalPhase;
    g.angle = a;
    return g;
  }

  static Gate cnot(int c, int t) {
    Gate g;
    g.kind = GateKind::Cnot;
    g.targets = {t};
    g.controls = {c};
    return g;
  }

  static Gate cphase(int c, int t, double a) {
    Gate g;
    g.kind = GateKind::CPhase;
    g.targets = {t};
    g.controls = {c};
    g.angle = a;
    return g;
  }

  static Gate ccphase(int c1, int c2, int t, double a) {
    Gate g;
    g.kind = GateKind::CCPhase;
    g.targets = {t};
    g.controls = {c1, c2};
    g.angle = a;
    return g;
  }

  static Gate mcx(std::vector<int> controls, int t) {
    Gate g;
    g.kind = GateKind::Mcx;
    g.targets = {t};
    g.controls = std::move(controls);
    return g;
  }

  // Row-major unitary over the joint space of `targets`.
  static Gate block(std::vector<int> targets, std::vector<cplx> matrix,
                    std::string label = "U") {
    const std::size_t dim = std::size_t(1) << targets.size();
    if (matrix.size() != dim * dim)
      throw std::invalid_argument("block payload size mismatch");
    check_unitary(matrix, dim);
    Gate g;
    g.kind = GateKind::Block;
    g.targets = std::move(targets);
    g.payload = std::make_shared<const std::vector<cplx>>(std::move(matrix));
    g.label = std::move(label);
    return g;
  }

  Gate with_negated_controls(std::vector<bool> neg) const {
    if (neg.size() != controls.size())
      throw std::invalid_argument("negation list size mismatch");
    Gate g = *this;
    g.negated = std::move(neg);
    return g;
  }

  Gate inverse() const {
    Gate g = *this;
    switch (kind) {
      case GateKind::X:
      case GateKind::Y:
      case GateKind::Z:
      case GateKind::H:
      case GateKind::Cnot:
      case GateKind::Mcx:
        break;  // self-inverse
      case GateKind::W:
        g.kind = GateKind::Wdg;
        break;
      case GateKind::Wdg:
        g.kind = GateKind::W;
        break;
      case GateKind::Ry:
      case GateKind::Rz:
      case GateKind::Phase:
      case GateKind::GlobalPhase:
      case GateKind::CPhase:
      case GateKind::CCPhase:
        g.angle = -angle;
        break;
      case GateKind::Block: {
        const std::size_t dim = std::size_t(1) << targets.size();
        std::vector<cplx> adj(dim * dim);
        for (std::size_t r = 0; r < dim; ++r)
          for (std::size_t c = 0; c < dim; ++c)
            adj[r * dim + c] = std::conj((*payload)[c * dim + r]);
        g.payload = std::make_shared<const std::vector<cplx>>(std::move(adj));
        g.label = label + "dg";
        break;
      }
    }
    return g;
  }

  // True for the involutions worth cancelling at circuit joins.
  bool self_inverse() const {
    switch (kind) {
      case GateKind::X:
      case GateKind::Y:
      case GateKind::Z:
      case GateKind::H:
      case GateKind::Cnot:
      case GateKind::Mcx:
        return true;
      default:
        return false;
    }
  }

  bool same_wires(const Gate& o) const {
    return kind == o.kind && targets == o.targets && controls == o.controls &&
           negated == o.negated;
  }

 private:
  static Gate simple(GateKind k, int q) {
    Gate g;
    g.kind = k;
    g.targets = {q};
    return g;
  }
  static Gate rot(GateKind k, int q, double a) {
    Gate g = simple(k, q);
    g.angle = a;
    return g;
  }
  static void check_unitary(const std::vector<cplx>& m, std::size_t dim) {
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        cplx dot = 0;
        for (std::size_t k = 0; k < dim; ++k)
          dot += std::conj(m[k * dim + r]) * m[k * dim + c];
        const cplx want = (r == c) ? cplx(1, 0) : cplx(0, 0);
        if (std::abs(dot - want) > 1e-12 * double(dim))
          throw std::invalid_argument("block payload is not unitary");
      }
    }
  }
};

// Ordered gate list over a fixed number of qubits.
struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {
    if (n < 0) throw std::invalid_argument("negative qubit count");
  }

  void append(Gate g) {
    validate(g);
    gates.push_back(std::move(g));
  }

  // Append and drop adjacent self-inverse pairs (used at builder seams where
  // two blocks are known to meet with mirrored gates).
  void append_cancelling(Gate g) {
    validate(g);
    if (!gates.empty() && g.self_inverse() && gates.back().same_wires(g)) {
      gates.pop_back();
      return;
    }
    gates.push_back(std::move(g));
  }

  void append(const Circuit& c) {
    if (c.n_qubits > n_qubits)
      throw std::invalid_argument("appended circuit is wider than host");
    for (const Gate& g : c.gates) append(g);
  }

  void append_cancelling(const Circuit& c) {
    if (c.n_qubits > n_qubits)
      throw std::invalid_argument("appended circuit is wider than host");
    for (const Gate& g : c.gates) append_cancelling(g);
  }

  Circuit inverse() const {
    Circuit inv(n_qubits);
    inv.gates.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it)
      inv.gates.push_back(it->inverse());
    return inv;
  }

  std::size_t size() const { return gates.size(); }

  void dump(std::ostream& os) const {
    for (const Gate& g : gates) {
      os << gate_name(g.kind);
      for (int t : g.targets) os << ' ' << t;
      if (!g.controls.empty()) {
        os << " [";
        for (std::size_t i = 0; i < g.controls.size(); ++i) {
          if (i) os << ' ';
          if (!g.negated.empty() && g.negated[i]) os << '!';
          os << g.controls[i];
        }
        os << ']';
      }
      if (g.has_angle()) os << ' ' << g.angle;
      os << '\n';
    }
  }

 private:
  void validate(const Gate& g) const {
    for (int t : g.targets) check_index(t);
    for (int c : g.controls) check_index(c);
    for (int t : g.targets)
      if (std::find(g.controls.begin(), g.controls.end(), t) != g.controls.end())
        throw std::invalid_argument("gate target collides with control");
    if (!g.negated.empty() && g.negated.size() != g.controls.size())
      throw std::invalid_argument("negation list size mismatch");
    if (g.kind == GateKind::Block && !g.payload)
      throw std::invalid_argument("block gate without payload");
    if (g.kind != GateKind::GlobalPhase && g.targets.empty())
      throw std::invalid_argument("gate without target");
  }
  void check_index(int q) const {
    if (q < 0 || q >= n_qubits)
      throw std::out_of_range("qubit index out of range");
  }
};

}  // namespace qpite
