#pragma once
// Experiment drivers for the cut-graph and harmonic-well flows: per-step
// records in three execution modes, circuit-cost sweeps, CSV round-trip
// serialization, a JSON run manifest, and a flat key=value config reader.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "builders.hpp"
#include "calibrate.hpp"
#include "circuit.hpp"
#include "grid.hpp"
#include "hamiltonian.hpp"
#include "pite.hpp"
#include "qaa.hpp"
#include "statevector.hpp"
#include "transpile.hpp"

namespace qpite {

enum class RunMode { pite, pite_qaa, multistep };

inline RunMode mode_from_string(const std::string& s) {
  if (s == "pite") return RunMode::pite;
  if (s == "pite-qaa") return RunMode::pite_qaa;
  if (s == "multistep") return RunMode::multistep;
  throw std::invalid_argument("unknown mode: " + s);
}

inline std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::pite: return "pite";
    case RunMode::pite_qaa: return "pite-qaa";
    default: return "multistep";
  }
}

struct ExperimentConfig {
  std::string kind = "maxcut";  // maxcut | harmonic
  std::string graph_file;       // empty: bundled square-plus-diagonal graph
  int qubits = 6;               // harmonic grid size
  double length = 14.0;
  double mass = 1.0;
  double omega = 1.0;
  RunMode mode = RunMode::pite;
  double gamma = 0;  // > 0: fixed for every step
  bool auto_gamma = false;
  double dtau = 0;  // > 0: fixed step
  bool auto_dtau = false;
  int steps = 4;
  std::vector<int> m_schedule;  // empty: one repetition per step
  std::string out;

  void validate() const {
    if (kind != "maxcut" && kind != "harmonic")
      throw std::invalid_argument("unknown experiment kind: " + kind);
    if (steps < 1) throw std::invalid_argument("need at least one step");
    if (gamma > 0 && auto_gamma)
      throw std::invalid_argument("gamma given twice: fixed value and auto");
    if (gamma < 0 || gamma >= 1)
      throw std::invalid_argument("gamma outside (0,1)");
    if (dtau > 0 && auto_dtau)
      throw std::invalid_argument("dtau given twice: fixed value and auto");
    if (dtau < 0) throw std::invalid_argument("dtau must be positive");
    if (!m_schedule.empty() && int(m_schedule.size()) != steps)
      throw std::invalid_argument("m schedule length must equal step count");
    for (int m : m_schedule)
      if (m < 0) throw std::invalid_argument("repetition counts are >= 0");
    if (kind == "harmonic" && (qubits < 2 || qubits > 10))
      throw std::invalid_argument("harmonic grid supports 2..10 qubits");
  }
};

struct StepRecord {
  int step = 0;
  double tau = 0;
  double p_k = 0;
  double P_k = 0;
  double fidelity = 0;
  double energy = 0;
  int cnot = 0;
  int depth = 0;
};

struct RunResult {
  std::vector<StepRecord> records;
  std::vector<double> gammas;  // per-step value actually executed
  std::vector<int> m_used;     // per-step repetitions actually executed
  double dtau = 0;
  double e0_shift = 0;
};

// Graph files are `i j weight` lines; `#` starts a comment.
inline WeightedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  WeightedGraph g;
  g.n_nodes = 0;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    int u, v;
    double w;
    if (!(row >> u >> v)) continue;
    if (!(row >> w)) w = 1.0;
    if (u < 0 || v < 0) throw std::runtime_error("negative node index");
    g.edges.push_back({u, v, w});
    g.n_nodes = std::max({g.n_nodes, u + 1, v + 1});
  }
  if (g.edges.empty()) throw std::runtime_error("graph file has no edges");
  return g;
}

namespace detail {

// Ancilla-zero block of a postselected (n+1)-wide state as an n-wide state.
inline QuantumState working_block(const QuantumState& s) {
  QuantumState out = zero_state(s.n_qubits - 1);
  for (std::uint64_t i = 0; i < out.dim(); ++i)
    out.amplitudes[i] = s.amplitudes[i];
  return out;
}

// Normalized projection of the start state onto the lowest eigenspace:
// the limit any damping flow converges to from that start.
inline QuantumState cooling_target(const HamiltonianOracle& h,
                                   const QuantumState& start) {
  const Eigen::Index dim = h.matrix.rows();
  const Eigen::Map<const Eigen::VectorXcd> v(start.amplitudes.data(), dim);
  DVec proj = DVec::Zero(dim);
  const double floor = h.eigenvalues(0) + 1e-9;
  for (Eigen::Index i = 0; i < dim && h.eigenvalues(i) <= floor; ++i) {
    const DVec col = h.eigenvectors.col(i);
    proj += col * cplx(col.adjoint() * v);
  }
  const double norm = proj.norm();
  if (norm < 1e-12)
    throw std::invalid_argument("start state is orthogonal to the ground space");
  proj /= norm;
  QuantumState out = zero_state(h.n_qubits);
  for (Eigen::Index i = 0; i < dim; ++i) out.amplitudes[i] = proj(i);
  return out;
}

inline double exact_alpha(const HamiltonianOracle& h, const QuantumState& psi,
                          double dtau, double e0) {
  const Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes.data(),
                                             Eigen::Index(psi.dim()));
  return std::exp(-e0 * dtau) * (h.imaginary_time(dtau) * v).norm();
}

inline double default_dtau(const ExperimentConfig& cfg) {
  const bool weak = cfg.gamma > 0 && cfg.gamma < 0.6;
  if (cfg.kind == "maxcut") {
    if (cfg.mode == RunMode::pite) return weak ? 0.75 : 0.25;
    return 0.63;
  }
  if (cfg.mode == RunMode::pite) return weak ? 0.20 : 0.16;
  return 0.14;
}

// Shared flow for both experiment kinds. The three modes differ in how a
// step executes: bare kernel with postselection, kernel plus amplification
// rounds on a re-prepared state, or the growing measurement-free recursion.
// When cost_rte is given, state evolution and tuning use rte while the
// reported gate counts are rebuilt from cost_rte circuits.
inline RunResult run_flow(const HamiltonianOracle& h, const RteBuilder& rte,
                          const Circuit& init_prep,
                          const ExperimentConfig& cfg, double e0,
                          const RteBuilder* cost_rte = nullptr) {
  cfg.validate();
  const bool split = cost_rte != nullptr;
  const RteBuilder& crte = split ? *cost_rte : rte;
  const int n = rte.n_qubits;
  const QuantumState psi0 = apply_circuit(zero_state(n), init_prep);
  const QuantumState target = cooling_target(h, psi0);

  RunResult out;
  out.e0_shift = e0;
  if (cfg.dtau > 0) {
    out.dtau = cfg.dtau;
  } else if (cfg.auto_dtau) {
    const double ceiling = cfg.kind == "harmonic"
                               ? 0.2
                               : std::numeric_limits<double>::infinity();
    out.dtau = calibrate(h, psi0, 1, 0, 50, e0, 0.0, std::numbers::pi / 4,
                         ceiling)
                   .params.dtau;
  } else {
    out.dtau = default_dtau(cfg);
  }
  const double dtau = out.dtau;

  std::vector<int> plan = cfg.m_schedule;
  if (plan.empty()) plan.assign(cfg.steps, 1);
  const bool fixed_gamma = cfg.gamma > 0;
  const double fallback_gamma = 0.8;  // damping for plain runs when unset

  double big_p = 1.0;
  double tau = 0;
  auto push_record = [&](int k, double p_k, const QuantumState& work,
                         const CircuitMetrics& m) {
    StepRecord r;
    r.step = k;
    r.tau = tau;
    r.p_k = p_k;
    r.P_k = big_p;
    r.fidelity = fidelity(work, target);
    r.energy = h.expectation(work);
    r.cnot = m.cnot_count;
    r.depth = m.depth;
    out.records.push_back(r);
  };

  if (cfg.mode == RunMode::pite) {
    Circuit costed(n + 1);
    append_circuit(costed, init_prep);
    QuantumState st = apply_circuit(zero_state(n + 1), init_prep);
    QuantumState work = psi0;
    for (int k = 1; k <= cfg.steps; ++k) {
      double g = fixed_gamma ? cfg.gamma : fallback_gamma;
      if (cfg.auto_gamma)
        g = resolve_schedule(exact_alpha(h, work, dtau, e0), plan[k - 1],
                             0)
                .gamma;
      out.gammas.push_back(g);
      out.m_used.push_back(0);  // no amplification in this mode
      const PiteParams prm = derive_params(g, dtau, e0);
      st = apply_circuit(st, approx_pite_circuit(rte, prm));
      append_circuit(costed, approx_pite_circuit(crte, prm));
      const auto [post, p_k] = postselect_ancilla(st, 0);
      st = post;
      work = working_block(st);
      big_p *= p_k;
      tau += dtau;
      push_record(k, p_k, work, metrics(transpile_to_basis(costed, 1)));
    }
    return out;
  }

  if (cfg.mode == RunMode::pite_qaa) {
    Circuit cumulative(n + 1);
    QuantumState work = psi0;
    for (int k = 1; k <= cfg.steps; ++k) {
      const Circuit u_ref =
          k == 1 ? init_prep : build_state_prep(work.amplitudes);
      int m_k = plan[k - 1];
      double g = fixed_gamma ? cfg.gamma : fallback_gamma;
      if (cfg.auto_gamma || !fixed_gamma) {
        if (m_k >= 1) {
          const ExecutionRescale t =
              tune_execution_gamma(rte, {}, {}, u_ref, dtau, e0, m_k, 0);
          g = t.gamma;
          m_k = t.m;
        } else {
          g = resolve_schedule(exact_alpha(h, work, dtau, e0), 1, 0).gamma;
        }
      }
      out.gammas.push_back(g);
      out.m_used.push_back(m_k);

      const PiteParams prm = derive_params(g, dtau, e0);
      auto build_step = [&](const RteBuilder& b) {
        Circuit sc(n + 1);
        append_circuit(sc, u_ref);
        append_circuit(sc, approx_pite_circuit(b, prm));
        if (m_k > 0) {
          const Circuit q =
              amplification_Q(sc, std::numbers::pi, std::numbers::pi);
          for (int r = 0; r < m_k; ++r) append_circuit(sc, q);
        }
        return sc;
      };
      const QuantumState st =
          apply_circuit(zero_state(n + 1), build_step(rte));
      const auto [post, p_k] = postselect_ancilla(st, 0);
      work = working_block(post);
      big_p *= p_k;
      tau += dtau;
      append_circuit(cumulative, build_step(crte));
      push_record(k, p_k, work, metrics(transpile_to_basis(cumulative, 1)));
    }
    return out;
  }

  // deterministic multistep recursion
  std::vector<PiteParams> params;
  QaaSchedule sched;
  for (int k = 1; k <= cfg.steps; ++k) {
    int m_k = plan[k - 1];
    double g = fixed_gamma ? cfg.gamma : fallback_gamma;
    if (cfg.auto_gamma || !fixed_gamma) {
      if (m_k >= 1) {
        const ExecutionRescale t = tune_execution_gamma(
            rte, params, sched.m, init_prep, dtau, e0, m_k, 0);
        g = t.gamma;
        m_k = t.m;
      } else {
        g = 0.5;  // unamplified filler step
      }
    }
    out.gammas.push_back(g);
    out.m_used.push_back(m_k);
    params.push_back(derive_params(g, dtau, e0));
    sched.m.push_back(m_k);

    const Circuit r_k = multi_step_reference(rte, params, sched, init_prep);
    const QuantumState st = apply_circuit(zero_state(n + 1), r_k);
    // each rebuilt run is a fresh preparation, so its success probability is
    // both the per-step and the cumulative figure
    big_p = outcome_probability(st, n, 0);
    const QuantumState post = postselect_ancilla(st, 0).first;
    tau += dtau;
    CircuitMetrics cost;
    if (split)
      cost = metrics(transpile_to_basis(
          multi_step_reference(crte, params, sched, init_prep), 1));
    else
      cost = metrics(transpile_to_basis(r_k, 1));
    push_record(k, big_p, working_block(post), cost);
  }
  return out;
}

}  // namespace detail

// Uniform superposition over the node register.
inline Circuit uniform_prep(int n) {
  Circuit prep(n);
  for (int q = 0; q < n; ++q) prep.append(Gate::h(q));
  return prep;
}

// Equal superposition of the four lowest well states.
inline Circuit harmonic_start_prep(const HamiltonianOracle& h) {
  const Eigen::Index dim = h.matrix.rows();
  DVec v = DVec::Zero(dim);
  for (int j = 0; j < 4; ++j) v += h.eigenvectors.col(j);
  v /= v.norm();
  return build_state_prep(std::vector<cplx>(v.data(), v.data() + dim));
}

inline RunResult run_maxcut(const ExperimentConfig& cfg) {
  const WeightedGraph g = cfg.graph_file.empty()
                              ? default_maxcut_graph()
                              : read_graph_file(cfg.graph_file);
  const HamiltonianOracle h = maxcut_hamiltonian(g);
  const double e0 = 0.72 * std::abs(h.lambda_min());
  const RteBuilder rte = ising_rte(g);
  return detail::run_flow(h, rte, uniform_prep(g.n_nodes), cfg, e0);
}

inline RunResult run_harmonic(const ExperimentConfig& cfg) {
  const GridSpec grid(cfg.qubits, cfg.length, cfg.mass, cfg.omega);
  const HamiltonianOracle h = harmonic_hamiltonian(grid);
  // evolve and tune against the exact propagator so the damping chain stays
  // on the low end of the spectrum; gate counts keep the split-operator
  // circuits a device would actually run
  const RteBuilder sim = dense_rte(h);
  const RteBuilder cost = grid_rte(grid);
  return detail::run_flow(h, sim, harmonic_start_prep(h), cfg, 0.0, &cost);
}

inline RunResult run_experiment(const ExperimentConfig& cfg) {
  return cfg.kind == "harmonic" ? run_harmonic(cfg) : run_maxcut(cfg);
}

struct CostRow {
  int n = 0;
  CircuitMetrics q, q_tilde, s0, pite;
};

// Transpiled gate costs of the amplification pieces as the register grows:
// fully connected unit-weight graphs for the cut kind, the discretized
// well for the harmonic kind. Construction only; nothing is simulated.
inline std::vector<CostRow> run_cost_sweep(const std::string& kind, int n_lo,
                                           int n_hi) {
  if (kind != "maxcut" && kind != "harmonic")
    throw std::invalid_argument("unknown cost sweep kind: " + kind);
  if (n_lo < 2 || n_hi < n_lo)
    throw std::invalid_argument("bad register range");
  std::vector<CostRow> rows;
  for (int n = n_lo; n <= n_hi; ++n) {
    RteBuilder rte;
    if (kind == "maxcut") {
      WeightedGraph g;
      g.n_nodes = n;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v, 1.0});
      rte = ising_rte(g);
    } else {
      rte = grid_rte(GridSpec(n, 14.0, 1.0, 1.0));
    }
    const PiteParams p = derive_params(0.46, 0.63, 0.0);
    const Circuit kernel = approx_pite_circuit(rte, p);
    Circuit prep(n + 1);
    for (int q = 0; q < n; ++q) prep.append(Gate::h(q));
    detail::append_circuit(prep, kernel);

    CostRow row;
    row.n = n;
    row.pite = metrics(transpile_to_basis(kernel, 1));
    row.q = metrics(transpile_to_basis(
        amplification_Q(prep, std::numbers::pi, std::numbers::pi), 1));
    Circuit u_ref(n);
    for (int q = 0; q < n; ++q) u_ref.append(Gate::h(q));
    row.q_tilde = metrics(transpile_to_basis(
        pre_amplification(rte, p, u_ref, std::numbers::pi, std::numbers::pi),
        1));
    row.s0 = metrics(build_zero_reflection(n + 1, std::numbers::pi));
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace detail

inline constexpr const char* records_csv_header =
    "step,tau,p_k,P_k,fidelity,energy,cnot,depth";
inline constexpr const char* cost_csv_header =
    "n,cnot_Q,cnot_Qtilde,cnot_S0,cnot_pite,depth_Q,depth_Qtilde,depth_S0,"
    "depth_pite";

inline void write_records_csv(std::ostream& os,
                              const std::vector<StepRecord>& recs) {
  os << records_csv_header << "\n";
  for (const StepRecord& r : recs)
    os << r.step << ',' << detail::fmt_double(r.tau) << ','
       << detail::fmt_double(r.p_k) << ',' << detail::fmt_double(r.P_k) << ','
       << detail::fmt_double(r.fidelity) << ','
       << detail::fmt_double(r.energy) << ',' << r.cnot << ',' << r.depth
       << "\n";
}

inline void write_records_csv(const std::string& path,
                              const std::vector<StepRecord>& recs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_records_csv(out, recs);
}

inline std::vector<StepRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open records file: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.substr(0, line.find('\r')) != records_csv_header)
    throw std::runtime_error("unexpected records header");
  std::vector<StepRecord> recs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 8) throw std::runtime_error("malformed records row");
    StepRecord r;
    r.step = std::atoi(f[0].c_str());
    r.tau = std::strtod(f[1].c_str(), nullptr);
    r.p_k = std::strtod(f[2].c_str(), nullptr);
    r.P_k = std::strtod(f[3].c_str(), nullptr);
    r.fidelity = std::strtod(f[4].c_str(), nullptr);
    r.energy = std::strtod(f[5].c_str(), nullptr);
    r.cnot = std::atoi(f[6].c_str());
    r.depth = std::atoi(f[7].c_str());
    recs.push_back(r);
  }
  return recs;
}

inline void write_cost_csv(std::ostream& os, const std::vector<CostRow>& rows) {
  os << cost_csv_header << "\n";
  for (const CostRow& r : rows)
    os << r.n << ',' << r.q.cnot_count << ',' << r.q_tilde.cnot_count << ','
       << r.s0.cnot_count << ',' << r.pite.cnot_count << ',' << r.q.depth
       << ',' << r.q_tilde.depth << ',' << r.s0.depth << ',' << r.pite.depth
       << "\n";
}

inline void write_cost_csv(const std::string& path,
                           const std::vector<CostRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_cost_csv(out, rows);
}

inline std::vector<CostRow> read_cost_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cost file: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.substr(0, line.find('\r')) != cost_csv_header)
    throw std::runtime_error("unexpected cost header");
  std::vector<CostRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9) throw std::runtime_error("malformed cost row");
    CostRow r;
    r.n = std::atoi(f[0].c_str());
    r.q.cnot_count = std::atoi(f[1].c_str());
    r.q_tilde.cnot_count = std::atoi(f[2].c_str());
    r.s0.cnot_count = std::atoi(f[3].c_str());
    r.pite.cnot_count = std::atoi(f[4].c_str());
    r.q.depth = std::atoi(f[5].c_str());
    r.q_tilde.depth = std::atoi(f[6].c_str());
    r.s0.depth = std::atoi(f[7].c_str());
    r.pite.depth = std::atoi(f[8].c_str());
    rows.push_back(r);
  }
  return rows;
}

// Run manifest: the fully resolved configuration plus what each step
// actually executed, for reproducing a run from its outputs alone.
inline std::string manifest_json(const ExperimentConfig& cfg,
                                 const RunResult& r) {
  nlohmann::json j;
  j["version"] = version;
  j["kind"] = cfg.kind;
  j["mode"] = to_string(cfg.mode);
  if (cfg.kind == "maxcut") {
    const WeightedGraph g = cfg.graph_file.empty()
                                ? default_maxcut_graph()
                                : read_graph_file(cfg.graph_file);
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges)
      edges.push_back({e.u, e.v, e.weight});
    j["graph"] = {{"nodes", g.n_nodes}, {"edges", edges}};
    if (!cfg.graph_file.empty()) j["graph"]["file"] = cfg.graph_file;
  } else {
    j["grid"] = {{"qubits", cfg.qubits},
                 {"length", cfg.length},
                 {"mass", cfg.mass},
                 {"omega", cfg.omega}};
  }
  j["steps"] = cfg.steps;
  j["dtau"] = {{"value", r.dtau}, {"auto", cfg.auto_dtau}};
  j["gamma"] = {{"auto", cfg.auto_gamma || cfg.gamma <= 0},
                {"per_step", r.gammas}};
  if (cfg.gamma > 0) j["gamma"]["requested"] = cfg.gamma;
  j["m_schedule"] = r.m_used;
  j["e0_shift"] = r.e0_shift;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j.dump(2);
}

// Flat key=value run configuration; keys mirror the command-line flags.
inline std::map<std::string, std::string> read_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline std::vector<int> parse_m_schedule(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    if (cur.empty()) continue;
    out.push_back(std::atoi(cur.c_str()));
  }
  return out;
}

inline void apply_config(ExperimentConfig& cfg,
                         const std::map<std::string, std::string>& kv) {
  auto as_bool = [](const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v.empty()) return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("bad boolean: " + v);
  };
  for (const auto& [key, value] : kv) {
    if (key == "kind") cfg.kind = value;
    else if (key == "graph") cfg.graph_file = value;
    else if (key == "qubits") cfg.qubits = std::atoi(value.c_str());
    else if (key == "length") cfg.length = std::strtod(value.c_str(), nullptr);
    else if (key == "mass") cfg.mass = std::strtod(value.c_str(), nullptr);
    else if (key == "omega") cfg.omega = std::strtod(value.c_str(), nullptr);
    else if (key == "mode") cfg.mode = mode_from_string(value);
    else if (key == "gamma") cfg.gamma = std::strtod(value.c_str(), nullptr);
    else if (key == "auto-gamma") cfg.auto_gamma = as_bool(value);
    else if (key == "dtau") cfg.dtau = std::strtod(value.c_str(), nullptr);
    else if (key == "auto-dtau") cfg.auto_dtau = as_bool(value);
    else if (key == "steps") cfg.steps = std::atoi(value.c_str());
    else if (key == "m-schedule") cfg.m_schedule = parse_m_schedule(value);
    else if (key == "out") cfg.out = value;
    else throw std::invalid_argument("unknown config key: " + key);
  }
}

}  // namespace qpite
