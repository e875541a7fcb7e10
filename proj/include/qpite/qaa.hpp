#pragma once
// Amplitude amplification around the damping kernel: the marking oracle,
// the amplification operator and its pre-amplified twin that runs before
// the state prep, closed-form amplitude laws with repetition and rescale
// pickers, the multi-step recursion chaining deterministic steps into one
// reference circuit, and the matching gate-cost predictions.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "builders.hpp"
#include "circuit.hpp"
#include "pite.hpp"

namespace qpite {

// Per-step amplification plan: repetition counts m_k, the oracle phases
// (the executable path fixes both to pi), and the rotation branch index.
struct QaaSchedule {
  std::vector<int> m;
  double phi1 = std::numbers::pi;
  double phi2 = std::numbers::pi;
  int branch_n = 0;

  void validate() const {
    for (int mk : m)
      if (mk < 0) throw std::invalid_argument("repetition count negative");
    if (branch_n < 0) throw std::invalid_argument("branch index negative");
  }
};

// Transpiled-count inputs for the cost predictions: the zero reflection,
// one damping kernel, one bare reference, and the per-step repetitions.
struct CostModel {
  double c_s0 = 0;
  double c_pite = 0;
  double c_ref = 0;
  std::vector<int> m;

  void validate() const {
    if (c_s0 < 0 || c_pite < 0 || c_ref < 0)
      throw std::invalid_argument("gate counts must be nonnegative");
    for (int mk : m)
      if (mk < 0) throw std::invalid_argument("repetition count negative");
  }
};

namespace detail {

inline void append_circuit(Circuit& host, const Circuit& sub) {
  if (sub.n_qubits > host.n_qubits)
    throw std::invalid_argument("subcircuit wider than host");
  for (const Gate& g : sub.gates) host.append(g);
}

}  // namespace detail

// Success oracle: X Z_phi X on the last wire, i.e. diag(e^{i phi}, 1) on
// the ancilla, phasing the |0>_a branch the damping kernel marks as good.
inline Circuit oracle_s_chi(int width, double phi) {
  if (width < 1) throw std::invalid_argument("oracle needs at least 1 wire");
  Circuit c(width);
  const int a = width - 1;
  c.append(Gate::x(a));
  c.append(Gate::phase(a, phi));
  c.append(Gate::x(a));
  return c;
}

// Amplification operator -U S0(phi1) U^dag S_chi(phi2) for a state prep U
// over working wires plus the kernel ancilla. The leading minus is kept as
// an explicit global phase so operator identities hold exactly; it never
// affects measurement statistics.
inline Circuit amplification_Q(const Circuit& u_pite_ref, double phi1,
                               double phi2) {
  const int width = u_pite_ref.n_qubits;
  if (width < 2)
    throw std::invalid_argument("amplification needs working wires + ancilla");
  Circuit c(width);
  detail::append_circuit(c, oracle_s_chi(width, phi2));
  detail::append_circuit(c, u_pite_ref.inverse());
  detail::append_zero_reflection(c, width, phi1);
  detail::append_circuit(c, u_pite_ref);
  c.append(Gate::global_phase(std::numbers::pi));
  return c;
}

// Pre-amplified operator S0 (U_ref^dag x I) D (U_ref x I) for one damping
// step: conjugating the amplification by the full state prep moves it in
// front of the kernel, and with phi = +-pi the oracle folds into the
// kernel-side diffusion D so one whole kernel block drops out.
inline Circuit pre_amplification(const RteBuilder& rte, const PiteParams& p,
                                 const Circuit& u_ref, double phi1,
                                 double phi2) {
  if (!detail::is_pi_angle(phi1) || !detail::is_pi_angle(phi2))
    throw std::invalid_argument(
        "pre-amplified operator requires phi = +-pi on both oracles");
  if (u_ref.n_qubits > rte.n_qubits)
    throw std::invalid_argument("reference wider than working register");
  const int width = rte.n_qubits + 1;
  FusionStack st;
  st.push(p);
  Circuit c(width);
  detail::append_circuit(c, u_ref);
  detail::append_circuit(c, fused_diffusion_circuit(rte, st));
  detail::append_circuit(c, u_ref.inverse());
  detail::append_zero_reflection(c, width, phi1);
  return c;
}

// Good-state weight after m repetitions starting from amplitude a.
inline double grover_amplitude(double a, int m) {
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("amplitude outside [0,1]");
  if (m < 0) throw std::invalid_argument("repetition count negative");
  return std::sin(double(2 * m + 1) * std::asin(a));
}

// Repetition count landing the amplitude nearest the branch-n antinode.
inline int optimal_m(double a, int branch_n) {
  if (a <= 0.0 || a > 1.0)
    throw std::invalid_argument("amplitude outside (0,1]");
  if (branch_n < 0) throw std::invalid_argument("branch index negative");
  return int(std::floor(double(2 * branch_n + 1) * std::numbers::pi /
                        (4.0 * std::asin(a))));
}

// Damping rescale gamma* that makes m* repetitions land exactly on the
// antinode: sin((2n+1)pi/(4m*+2)) / alpha. Throws when the result is not
// an admissible rescale; resolve_schedule picks a working (m, n) instead.
inline double optimal_gamma(double alpha, int m_star, int branch_n) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (m_star < 0) throw std::invalid_argument("repetition count negative");
  if (branch_n < 0) throw std::invalid_argument("branch index negative");
  const double g = std::sin(double(2 * branch_n + 1) * std::numbers::pi /
                            double(4 * m_star + 2)) /
                   alpha;
  if (g <= 0.0 || g >= 1.0)
    throw std::invalid_argument("rescale outside (0,1)");
  if (std::abs(g - 1.0 / std::numbers::sqrt2) <= 1e-6)
    throw std::invalid_argument("rescale too close to 1/sqrt(2)");
  return g;
}

struct ResolvedSchedule {
  int m = 0;
  int branch_n = 0;
  double gamma = 0;
};

// Smallest-m-first search for an admissible (m, n, gamma*): starts at the
// requested repetition count and bumps the branch index before the count.
inline ResolvedSchedule resolve_schedule(double alpha, int m_start,
                                         int n_start = 0, int m_max = 512) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (m_start < 0) throw std::invalid_argument("repetition count negative");
  if (n_start < 0) throw std::invalid_argument("branch index negative");
  for (int m = m_start; m <= m_max; ++m) {
    for (int n = n_start; n <= m; ++n) {
      try {
        return {m, n, optimal_gamma(alpha, m, n)};
      } catch (const std::invalid_argument&) {
      }
    }
  }
  throw std::invalid_argument("no admissible rescale up to the count limit");
}

// Continuous repetition estimate for a homogeneous start on the harmonic
// ladder: ((2nbar+1) pi / 4 gamma) sqrt(2N sinh(x) / (1 - e^{-2x(N-1)}))
// - 1/2 with x = dtau*omega and N = 2^n. Grows as sqrt(N).
inline double worst_case_m_harmonic(int n_qubits, double dtau_omega,
                                    double gamma, int branch_nbar) {
  if (n_qubits < 1) throw std::invalid_argument("need at least one qubit");
  if (dtau_omega <= 0.0 || gamma <= 0.0)
    throw std::invalid_argument("step and rescale must be positive");
  if (branch_nbar < 0) throw std::invalid_argument("branch index negative");
  const double n_points = double(std::uint64_t(1) << n_qubits);
  const double inv_alpha =
      std::sqrt(2.0 * n_points * std::sinh(dtau_omega) /
                (1.0 - std::exp(-2.0 * dtau_omega * (n_points - 1.0))));
  return double(2 * branch_nbar + 1) * std::numbers::pi / (4.0 * gamma) *
             inv_alpha -
         0.5;
}

// Per-step amplifiers of the multi-step recursion. The step-k amplifier
// replays every earlier amplified prefix, applies the diffusion of the
// whole fused kernel stack, unwinds the prefix, and reflects about zero;
// each one is built once and replayed by value in later steps.
inline std::vector<Circuit> multi_step_amplifiers(
    const RteBuilder& rte, const std::vector<PiteParams>& steps,
    const QaaSchedule& sched, const Circuit& u_ref0) {
  sched.validate();
  if (!detail::is_pi_angle(sched.phi1) || !detail::is_pi_angle(sched.phi2))
    throw std::invalid_argument(
        "multi-step recursion requires phi = +-pi on both oracles");
  if (sched.m.size() < steps.size())
    throw std::invalid_argument("schedule shorter than the step list");
  if (u_ref0.n_qubits > rte.n_qubits)
    throw std::invalid_argument("reference wider than working register");
  const int width = rte.n_qubits + 1;
  const Circuit u_ref0_inv = u_ref0.inverse();
  std::vector<Circuit> amps;
  FusionStack st;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    st.push(steps[k]);
    Circuit gk(width);
    for (std::size_t l = k; l-- > 0;)
      for (int r = 0; r < sched.m[l]; ++r)
        detail::append_circuit(gk, amps[l]);
    detail::append_circuit(gk, u_ref0);
    detail::append_circuit(gk, fused_diffusion_circuit(rte, st));
    detail::append_circuit(gk, u_ref0_inv);
    for (std::size_t l = 0; l < k; ++l) {
      const Circuit inv = amps[l].inverse();
      for (int r = 0; r < sched.m[l]; ++r) detail::append_circuit(gk, inv);
    }
    detail::append_zero_reflection(gk, width, sched.phi1);
    amps.push_back(std::move(gk));
  }
  return amps;
}

// Deterministic multi-step reference: all amplifiers run first, directly
// on |0...0>, then the bare reference, then the single fused kernel of
// every step. With calibrated parameters the ancilla returns to |0>.
inline Circuit multi_step_reference(const RteBuilder& rte,
                                    const std::vector<PiteParams>& steps,
                                    const QaaSchedule& sched,
                                    const Circuit& u_ref0) {
  const std::vector<Circuit> amps =
      multi_step_amplifiers(rte, steps, sched, u_ref0);
  const int width = rte.n_qubits + 1;
  Circuit out(width);
  FusionStack st;
  for (const PiteParams& p : steps) st.push(p);
  for (std::size_t l = steps.size(); l-- > 0;)
    for (int r = 0; r < sched.m[l]; ++r) detail::append_circuit(out, amps[l]);
  detail::append_circuit(out, u_ref0);
  detail::append_circuit(out, fused_pite_circuit(rte, st));
  return out;
}

struct CostPrediction {
  std::vector<double> q_tilde;     // one step-k amplifier
  std::vector<double> cumulative;  // full k-step reference circuit
};

// Closed-form counts: the step-k amplifier costs the one-step base
// c_s0 + c_pite + 2 c_ref times prod_{l<k} (1 + 2 m_l), and the executed
// reference adds one kernel and one bare reference on top of the
// repetition-weighted amplifiers.
inline CostPrediction cost_model(const CostModel& cm, int n_steps) {
  cm.validate();
  if (n_steps < 1) throw std::invalid_argument("need at least one step");
  if (int(cm.m.size()) < n_steps)
    throw std::invalid_argument("schedule shorter than the step count");
  const double base = cm.c_s0 + cm.c_pite + 2.0 * cm.c_ref;
  CostPrediction out;
  double scale = 1.0;
  double amplifier_total = 0.0;
  for (int k = 0; k < n_steps; ++k) {
    const double q = base * scale;
    out.q_tilde.push_back(q);
    amplifier_total += double(cm.m[k]) * q;
    out.cumulative.push_back(cm.c_pite + cm.c_ref + amplifier_total);
    scale *= 1.0 + 2.0 * double(cm.m[k]);
  }
  return out;
}

}  // namespace qpite
