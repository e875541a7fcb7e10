// Command-line front end: cooling runs on cut graphs and the harmonic well,
// circuit-cost sweeps, and step-size calibration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qpite/experiment.hpp>

namespace {

using namespace qpite;

struct RunFlags {
  std::string config;
  std::string graph;
  int qubits = 0;
  double length = 0, mass = 0, omega = 0;
  std::string mode;
  double gamma = 0;
  bool auto_gamma = false;
  double dtau = 0;
  bool auto_dtau = false;
  int steps = 0;
  std::string m_schedule;
  std::string out;
};

// Shared run options; the harmonic subcommand adds the grid shape on top.
void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_grid) {
  cmd->add_option("--config", f.config, "key=value file with these flags");
  if (with_grid) {
    cmd->add_option("--qubits", f.qubits, "grid register size");
    cmd->add_option("--length", f.length, "well extent");
    cmd->add_option("--mass", f.mass, "particle mass");
    cmd->add_option("--omega", f.omega, "oscillator frequency");
  } else {
    cmd->add_option("--graph", f.graph, "edge list file, `i j weight` lines");
  }
  cmd->add_option("--mode", f.mode, "pite | pite-qaa | multistep");
  cmd->add_option("--gamma", f.gamma, "fixed damping strength in (0,1)");
  cmd->add_flag("--auto-gamma", f.auto_gamma, "retune gamma every step");
  cmd->add_option("--dtau", f.dtau, "fixed imaginary-time step");
  cmd->add_flag("--auto-dtau", f.auto_dtau, "pick the step from the spectrum");
  cmd->add_option("--steps", f.steps, "number of cooling steps");
  cmd->add_option("--m-schedule", f.m_schedule,
                  "comma list of amplification rounds per step");
  cmd->add_option("--out", f.out, "records CSV path; manifest lands beside it");
}

// Config file first, explicit flags on top.
ExperimentConfig resolve_config(const CLI::App* cmd, const RunFlags& f,
                                const std::string& kind) {
  ExperimentConfig cfg;
  if (!f.config.empty()) apply_config(cfg, read_config_file(f.config));
  cfg.kind = kind;
  auto seen = [&](const char* name) {
    const CLI::Option* o = cmd->get_option_no_throw(name);
    return o && o->count() > 0;
  };
  if (seen("--graph")) cfg.graph_file = f.graph;
  if (seen("--qubits")) cfg.qubits = f.qubits;
  if (seen("--length")) cfg.length = f.length;
  if (seen("--mass")) cfg.mass = f.mass;
  if (seen("--omega")) cfg.omega = f.omega;
  if (seen("--mode")) cfg.mode = mode_from_string(f.mode);
  if (seen("--gamma")) cfg.gamma = f.gamma;
  if (seen("--auto-gamma")) cfg.auto_gamma = true;
  if (seen("--auto-dtau")) cfg.auto_dtau = true;
  if (seen("--dtau")) cfg.dtau = f.dtau;
  if (seen("--steps")) cfg.steps = f.steps;
  if (seen("--m-schedule")) cfg.m_schedule = parse_m_schedule(f.m_schedule);
  if (seen("--out")) cfg.out = f.out;
  cfg.validate();
  return cfg;
}

int run_and_report(const ExperimentConfig& cfg) {
  const RunResult r = run_experiment(cfg);
  std::printf("# %s %s  dtau=%.6g  steps=%d\n", cfg.kind.c_str(),
              to_string(cfg.mode).c_str(), r.dtau, cfg.steps);
  std::printf("%5s %8s %12s %12s %10s %12s %9s %9s %8s %3s\n", "step", "tau",
              "p_k", "P_k", "fidelity", "energy", "cnot", "depth", "gamma",
              "m");
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const StepRecord& s = r.records[i];
    std::printf("%5d %8.4f %12.9f %12.6e %10.6f %12.6f %9d %9d %8.5f %3d\n",
                s.step, s.tau, s.p_k, s.P_k, s.fidelity, s.energy, s.cnot,
                s.depth, r.gammas[i], r.m_used[i]);
  }
  if (!cfg.out.empty()) {
    write_records_csv(cfg.out, r.records);
    const std::string mpath = cfg.out + ".manifest.json";
    std::ofstream m(mpath);
    if (!m) throw std::runtime_error("cannot open for writing: " + mpath);
    m << manifest_json(cfg, r) << "\n";
    std::printf("# wrote %s and %s\n", cfg.out.c_str(), mpath.c_str());
  }
  return 0;
}

int run_cost(const std::string& kind, int n_lo, int n_hi,
             const std::string& out) {
  const auto rows = run_cost_sweep(kind, n_lo, n_hi);
  std::printf("%4s %8s %12s %8s %9s\n", "n", "cnot_Q", "cnot_Qtilde",
              "cnot_S0", "cnot_pite");
  for (const CostRow& r : rows)
    std::printf("%4d %8d %12d %8d %9d\n", r.n, r.q.cnot_count,
                r.q_tilde.cnot_count, r.s0.cnot_count, r.pite.cnot_count);
  if (!out.empty()) {
    write_cost_csv(out, rows);
    std::printf("# wrote %s\n", out.c_str());
  }
  return 0;
}

int run_calibrate(const std::string& kind, const std::string& graph,
                  int qubits, double length, double mass, double omega,
                  int m_target, int branch, double dtau_fixed,
                  const std::string& out) {
  HamiltonianOracle h;
  RteBuilder rte;
  Circuit prep(1);
  double e0 = 0;
  double ceiling = std::numeric_limits<double>::infinity();
  if (kind == "maxcut") {
    const WeightedGraph g =
        graph.empty() ? default_maxcut_graph() : read_graph_file(graph);
    h = maxcut_hamiltonian(g);
    e0 = 0.72 * std::abs(h.lambda_min());
    rte = ising_rte(g);
    prep = uniform_prep(g.n_nodes);
  } else if (kind == "harmonic") {
    h = harmonic_hamiltonian(GridSpec(qubits, length, mass, omega));
    rte = dense_rte(h);
    prep = harmonic_start_prep(h);
    ceiling = 0.2;
  } else {
    throw std::invalid_argument("unknown calibration kind: " + kind);
  }
  const QuantumState psi0 = apply_circuit(zero_state(h.n_qubits), prep);

  const CalibrationResult c = calibrate(h, psi0, m_target, branch, 50, e0, 0.0,
                                        std::numbers::pi / 4, ceiling);
  nlohmann::json j;
  auto emit = [&](const char* key, double v) {
    std::printf("%s=%.12g\n", key, v);
    j[key] = v;
  };
  std::printf("kind=%s\n", kind.c_str());
  j["kind"] = kind;
  emit("e0_shift", e0);
  emit("lambda_min", h.lambda_min());
  emit("dtau", c.params.dtau);
  emit("gamma", c.params.gamma);
  emit("alpha", c.alpha);
  std::printf("m=%d\niterations=%d\nconverged=%s\n", c.m_star, c.iterations,
              c.converged ? "true" : "false");
  j["m"] = c.m_star;
  j["iterations"] = c.iterations;
  j["converged"] = c.converged;

  if (dtau_fixed > 0) {
    // damping the spectral norm asks for at this step, then the executable
    // value one amplification round turns into certain success
    const double alpha = detail::exact_alpha(h, psi0, dtau_fixed, e0);
    const ResolvedSchedule sched = resolve_schedule(alpha, m_target, branch);
    emit("dtau_fixed", dtau_fixed);
    emit("gamma_star", sched.gamma);
    const ExecutionRescale t =
        tune_execution_gamma(rte, {}, {}, prep, dtau_fixed, e0, m_target,
                             branch);
    emit("gamma_exec", t.gamma);
    std::printf("m_exec=%d\n", t.m);
    j["m_exec"] = t.m;
    emit("amplitude", t.amplitude);
  }
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open for writing: " + out);
    os << j.dump(2) << "\n";
    std::printf("# wrote %s\n", out.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic imaginary-time cooling with amplified success"};
  app.set_version_flag("--version", std::string(qpite::version));
  app.require_subcommand(1);

  RunFlags mc, ho;
  CLI::App* maxcut = app.add_subcommand("maxcut", "cool a cut graph");
  add_run_flags(maxcut, mc, false);
  CLI::App* harmonic =
      app.add_subcommand("harmonic", "cool the discretized well");
  add_run_flags(harmonic, ho, true);

  std::string cost_kind = "maxcut", cost_out;
  int n_min = 4, n_max = 10;
  CLI::App* cost =
      app.add_subcommand("cost", "transpiled gate counts versus register size");
  cost->add_option("--kind", cost_kind, "maxcut | harmonic");
  cost->add_option("--n-min", n_min, "smallest register");
  cost->add_option("--n-max", n_max, "largest register");
  cost->add_option("--out", cost_out, "cost CSV path");

  std::string cal_kind = "maxcut", cal_graph, cal_out;
  int cal_qubits = 6, cal_m = 1, cal_branch = 0;
  double cal_length = 14, cal_mass = 1, cal_omega = 1, cal_dtau = 0;
  CLI::App* cal = app.add_subcommand(
      "calibrate", "self-consistent step size and damping strength");
  cal->add_option("--kind", cal_kind, "maxcut | harmonic");
  cal->add_option("--graph", cal_graph, "edge list file");
  cal->add_option("--qubits", cal_qubits, "grid register size");
  cal->add_option("--length", cal_length, "well extent");
  cal->add_option("--mass", cal_mass, "particle mass");
  cal->add_option("--omega", cal_omega, "oscillator frequency");
  cal->add_option("--m-target", cal_m, "amplification rounds to aim for");
  cal->add_option("--branch", cal_branch, "rotation branch index");
  cal->add_option("--dtau", cal_dtau,
                  "also report damping values at this fixed step");
  cal->add_option("--out", cal_out, "JSON summary path");

  CLI11_PARSE(app, argc, argv);
  try {
    if (maxcut->parsed())
      return run_and_report(resolve_config(maxcut, mc, "maxcut"));
    if (harmonic->parsed())
      return run_and_report(resolve_config(harmonic, ho, "harmonic"));
    if (cost->parsed()) return run_cost(cost_kind, n_min, n_max, cost_out);
    return run_calibrate(cal_kind, cal_graph, cal_qubits, cal_length, cal_mass,
                         cal_omega, cal_m, cal_branch, cal_dtau, cal_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
