// Cools the bundled cut graph with the measurement-free recursion: every
// step is amplified to certain success, so one shot at the end suffices.

#include <cstdio>

#include <qpite/experiment.hpp>

using namespace qpite;

int main() {
  // self-consistent step size first, then the run at the paper step
  const HamiltonianOracle h = maxcut_hamiltonian(default_maxcut_graph());
  const double e0 = 0.72 * std::abs(h.lambda_min());
  const QuantumState psi0 = apply_circuit(zero_state(4), uniform_prep(4));
  const CalibrationResult cal =
      calibrate(h, psi0, 1, 0, 50, e0);
  std::printf("calibrated: dtau=%.6f gamma=%.6f (m=%d, %d iterations)\n\n",
              cal.params.dtau, cal.params.gamma, cal.m_star, cal.iterations);

  ExperimentConfig cfg;
  cfg.mode = RunMode::multistep;
  cfg.auto_gamma = true;
  cfg.steps = 5;
  const RunResult r = run_experiment(cfg);

  std::printf("%5s %8s %14s %10s %10s %9s\n", "step", "tau", "p_k", "fidelity",
              "energy", "cnot");
  for (const StepRecord& s : r.records)
    std::printf("%5d %8.3f %14.12f %10.6f %10.6f %9d\n", s.step, s.tau, s.p_k,
                s.fidelity, s.energy, s.cnot);

  std::printf("\nground energy %g, reached %g with certainty %g\n",
              h.lambda_min(), r.records.back().energy,
              r.records.back().P_k);
  return 0;
}
