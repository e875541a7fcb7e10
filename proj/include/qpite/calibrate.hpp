#pragma once
// Self-consistent parameter tuning: the step-size rule from the rotation
// angle cap, the {dtau, gamma, s} fixed-point loop, the circuit-level
// rescale bisection that pins a step's success probability at one, and
// the failure-leakage analysis of contaminated amplified states.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hamiltonian.hpp"
#include "pite.hpp"
#include "qaa.hpp"
#include "statevector.hpp"

namespace qpite {

// Largest step keeping every controlled-evolution rotation at or below the
// cap: dtau = cap / (s * lambda_max). Callers estimating the spectrum from
// an exact oracle conventionally inflate lambda_max by 1.2.
inline double determine_dtau(double s, double lambda_max,
                             double angle_cap = std::numbers::pi / 4) {
  if (s <= 0 || lambda_max <= 0 || angle_cap <= 0)
    throw std::invalid_argument("step rule needs positive inputs");
  double dtau = angle_cap / (s * lambda_max);
  // division rounding can land one ulp past the cap; nudge below it so the
  // product respects the bound in every association order
  while (s * dtau * lambda_max > angle_cap ||
         s * (dtau * lambda_max) > angle_cap ||
         (s * lambda_max) * dtau > angle_cap)
    dtau = std::nextafter(dtau, 0.0);
  return dtau;
}

struct CalibrationResult {
  PiteParams params;
  double alpha = 0;
  int m_star = 0;
  int iterations = 0;
  bool converged = false;
};

// Fixed-point loop making {dtau, gamma, s} self-consistent: measure the
// damped norm alpha at the current step, rescale gamma to the antinode for
// the requested repetition count, update s, then re-derive the step from
// the angle cap. Oscillating iterates are damped by half; a ceiling can
// pin the step below the split-operator comfort zone.
inline CalibrationResult calibrate(
    const HamiltonianOracle& h, const QuantumState& psi, int m_target,
    int branch_n, int max_iter, double e0_shift = 0.0, double lambda_max = 0.0,
    double angle_cap = std::numbers::pi / 4,
    double dtau_ceiling = std::numeric_limits<double>::infinity()) {
  if (psi.n_qubits != h.n_qubits)
    throw std::invalid_argument("state width does not match the Hamiltonian");
  if (max_iter < 1) throw std::invalid_argument("need at least one iteration");
  if (dtau_ceiling <= 0) throw std::invalid_argument("ceiling must be positive");
  const Eigen::Index dim = h.matrix.rows();
  const Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes.data(), dim);
  if (std::abs(v.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("state must be normalized");

  const double lam =
      lambda_max > 0 ? lambda_max
                     : 1.2 * std::max(std::abs(h.lambda_min()),
                                      std::abs(h.lambda_max()));
  auto alpha_at = [&](double dtau) {
    return std::exp(-e0_shift * dtau) *
           (h.imaginary_time(dtau) * v).norm();
  };
  auto s_of = [](double gamma) {
    return gamma / std::sqrt(1.0 - gamma * gamma);
  };
  auto step_for = [&](double s, double dtau) {
    if (lam <= 0) return dtau;  // free spectrum: the cap constrains nothing
    return std::min(determine_dtau(s, lam, angle_cap), dtau_ceiling);
  };

  ResolvedSchedule sched = resolve_schedule(1.0, m_target, branch_n);
  double dtau = lam > 0 ? step_for(s_of(sched.gamma), 0.0)
                        : (std::isfinite(dtau_ceiling) ? dtau_ceiling : 1.0);
  bool converged = false;
  int it = 0;
  double prev_delta = 0;
  for (it = 1; it <= max_iter; ++it) {
    sched = resolve_schedule(alpha_at(dtau), m_target, branch_n);
    const double next = step_for(s_of(sched.gamma), dtau);
    double delta = next - dtau;
    if (std::abs(delta) < 1e-6) {
      dtau = next;
      converged = true;
      break;
    }
    if (prev_delta != 0 && delta * prev_delta < 0) delta *= 0.5;
    dtau += delta;
    prev_delta = delta;
  }

  CalibrationResult out;
  sched = resolve_schedule(alpha_at(dtau), m_target, branch_n);
  out.params = derive_params(sched.gamma, dtau, e0_shift);
  out.alpha = alpha_at(dtau);
  out.m_star = sched.m;
  out.iterations = std::min(it, max_iter);
  out.converged = converged;
  return out;
}

struct ExecutionRescale {
  double gamma = 0;
  int m = 0;
  int branch_n = 0;
  double amplitude = 0;  // measured unamplified amplitude at gamma
  int iterations = 0;
};

// Circuit-level rescale for one more step on top of already-tuned ones:
// bisect gamma until the unamplified prefix circuit puts exactly the
// antinode amplitude on the ancilla-zero branch, so m repetitions then
// land the success probability on one to machine precision. Brackets stay
// clear of 1/sqrt(2); when neither damping branch reaches the target the
// repetition plan is bumped, smallest count first.
inline ExecutionRescale tune_execution_gamma(
    const RteBuilder& rte, const std::vector<PiteParams>& prior_steps,
    const std::vector<int>& prior_m, const Circuit& u_ref0, double dtau,
    double e0_shift, int m_target, int branch_n = 0) {
  if (prior_m.size() < prior_steps.size())
    throw std::invalid_argument("schedule shorter than the prior step list");
  if (m_target < 1) throw std::invalid_argument("need at least one repetition");
  int evals = 0;
  auto amplitude_at = [&](double gamma) {
    ++evals;
    std::vector<PiteParams> steps = prior_steps;
    steps.push_back(derive_params(gamma, dtau, e0_shift));
    QaaSchedule sched;
    sched.m.assign(prior_m.begin(), prior_m.begin() + prior_steps.size());
    sched.m.push_back(0);
    const Circuit r = multi_step_reference(rte, steps, sched, u_ref0);
    const QuantumState s = apply_circuit(zero_state(rte.n_qubits + 1), r);
    return std::sqrt(outcome_probability(s, rte.n_qubits, 0));
  };
  const double brackets[2][2] = {{0.02, 0.70}, {0.715, 0.98}};
  for (int m = m_target; m <= m_target + 8; ++m) {
    for (int n = (m == m_target ? branch_n : 0); n <= m; ++n) {
      const double target = std::sin(double(2 * n + 1) * std::numbers::pi /
                                     double(4 * m + 2));
      for (const auto& b : brackets) {
        double lo = b[0];
        double hi = b[1];
        double flo = amplitude_at(lo) - target;
        double fhi = amplitude_at(hi) - target;
        if (flo * fhi > 0) continue;
        while (hi - lo > 1e-13) {
          const double mid = 0.5 * (lo + hi);
          const double fmid = amplitude_at(mid) - target;
          if (fmid == 0) {
            lo = hi = mid;
            break;
          }
          if (flo * fmid < 0) {
            hi = mid;
            fhi = fmid;
          } else {
            lo = mid;
            flo = fmid;
          }
        }
        ExecutionRescale out;
        out.gamma = 0.5 * (lo + hi);
        out.m = m;
        out.branch_n = n;
        out.amplitude = amplitude_at(out.gamma);
        out.iterations = evals;
        return out;
      }
    }
  }
  throw std::runtime_error("no rescale bracket reaches the target amplitude");
}

struct LeakageReport {
  std::vector<cplx> success_state;  // normalized, working register only
  double p0 = 0;                    // ancilla-zero probability
  double overlap_clean = 0;         // |<success | normalized M' M psi>|
  double backward_ratio = 0;        // halving ratio of the backward residual
};

namespace detail {

// Damping factor M = gamma e^{-(H + e0) dtau} and its unitary complement
// sqrt(1 - M^2), both in the oracle's eigenbasis.
inline std::pair<DMat, DMat> damping_pair(const HamiltonianOracle& h,
                                          const PiteParams& p) {
  const Eigen::Index dim = h.matrix.rows();
  Eigen::VectorXd m(dim), s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mi =
        p.gamma * std::exp(-(h.eigenvalues(i) + p.e0_shift) * p.dtau);
    if (mi > 1.0 + 1e-9)
      throw std::invalid_argument(
          "damped propagator exceeds unit norm; raise the shift or shrink "
          "gamma");
    m(i) = mi;
    s(i) = std::sqrt(std::max(0.0, 1.0 - mi * mi));
  }
  const DMat basis = h.eigenvectors;
  return {DMat(basis * m.asDiagonal() * basis.adjoint()),
          DMat(basis * s.asDiagonal() * basis.adjoint())};
}

}  // namespace detail

// Second-step analysis of an amplified state contaminated by failure
// weight epsilon: forms the entangled input from the damped and leaked
// branches, pushes it through the exact second-step kernel, and reports
// the postselected state, its overlap with the clean two-step branch, and
// a halving ratio showing the leaked operator acts as backward evolution.
inline LeakageReport failure_leakage_analysis(const HamiltonianOracle& h,
                                              const PiteParams& p2,
                                              const PiteParams& p1,
                                              double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("contamination weight outside [0,1]");
  const Eigen::Index dim = h.matrix.rows();
  const DVec psi = DVec::Constant(dim, cplx(1.0 / std::sqrt(double(dim)), 0));
  const auto [m1, s1] = detail::damping_pair(h, p1);
  const auto [m2, s2] = detail::damping_pair(h, p2);

  const DVec damped = m1 * psi;
  const double a = damped.squaredNorm();
  if (epsilon > 0.0 && a >= 1.0 - 1e-12)
    throw std::invalid_argument("no failure weight available to contaminate");

  DVec branch0 = std::sqrt((1.0 - epsilon) / a) * (m2 * damped);
  if (epsilon > 0.0)
    branch0 += std::sqrt(epsilon / (1.0 - a)) * DVec(s2 * (s1 * psi));

  LeakageReport out;
  out.p0 = branch0.squaredNorm();
  const DVec success = branch0 / branch0.norm();
  out.success_state.assign(success.data(), success.data() + dim);
  const DVec clean = (m2 * damped).normalized();
  out.overlap_clean = std::abs(cplx(success.adjoint() * clean));

  auto backward_err = [&](double dtau) {
    const PiteParams q = derive_params(p1.gamma, dtau, p1.e0_shift);
    const DMat s = detail::damping_pair(h, q).second;
    const double scale = std::sqrt(1.0 - q.gamma * q.gamma) *
                         std::exp(q.e0_shift * q.s * q.s * dtau);
    const DMat ref = scale * hermitian_exp(h.matrix, q.s * q.s * dtau);
    return max_abs_diff(s, ref);
  };
  out.backward_ratio =
      backward_err(p1.dtau) / backward_err(0.5 * p1.dtau);
  return out;
}

}  // namespace qpite
