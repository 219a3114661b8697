// chainvqe command-line runner: reproducible spin-chain VQE experiments with
// CSV/JSON/SVG artifacts. Subcommands map onto run modes; flags mirror the
// JSON config paths and override a --config file when both are given.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chainvqe/experiment.hpp"

namespace {

using namespace chainvqe;

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_numerical_failure = 3;
constexpr int exit_partial_failure = 4;

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  int n_qubits = -1;
  double dmi = std::nan("");
  double field = std::nan("");
  std::string boundary;
  std::vector<int> layers;
  std::string topology;
  int max_iterations = -1;
  std::string gradient;
  double fd_step = std::nan("");
  double grad_tol = std::nan("");
  int restarts = -1;
  int threads = -1;
  long long seed = -1;
  bool svg = false;
  bool no_csv = false;
  bool no_json = false;
  bool trace = false;
  bool warm_start = false;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; flags override its fields");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--chain.n-qubits", o.n_qubits, "number of spins");
  cmd->add_option("--chain.dmi", o.dmi, "D/J ratio");
  cmd->add_option("--chain.field", o.field, "B/J ratio");
  cmd->add_option("--chain.boundary", o.boundary, "open|periodic");
  cmd->add_option("--ansatz.layers", o.layers, "layer count or ascending sweep");
  cmd->add_option("--ansatz.topology", o.topology, "ring|linear");
  cmd->add_option("--optimizer.max-iterations", o.max_iterations, "BFGS iteration cap");
  cmd->add_option("--optimizer.gradient", o.gradient, "central_difference|adjoint");
  cmd->add_option("--optimizer.fd-step", o.fd_step, "central-difference step");
  cmd->add_option("--optimizer.grad-tol", o.grad_tol, "gradient inf-norm stop");
  cmd->add_option("--optimizer.restarts", o.restarts, "independent random restarts");
  cmd->add_option("--threads", o.threads, "parallel restarts (or CHAINVQE_THREADS)");
  cmd->add_option("--seed", o.seed, "base seed; restart r uses seed+r");
  cmd->add_flag("--svg", o.svg, "render SVG plots");
  cmd->add_flag("--no-csv", o.no_csv, "skip CSV artifacts");
  cmd->add_flag("--no-json", o.no_json, "skip JSON artifacts");
  cmd->add_flag("--trace", o.trace, "record per-iteration objective traces");
  cmd->add_flag("--warm-start", o.warm_start,
                "seed each depth with the zero-padded best of the previous one");
}

ExperimentConfig build_config(const CliOverrides& o, RunMode mode) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + o.config_path);
    json j;
    in >> j;
    cfg = config_from_json(j);
  }
  cfg.mode = mode;
  if (!o.out_dir.empty()) cfg.outputs.directory = o.out_dir;
  if (o.n_qubits > 0) cfg.chain.n_qubits = o.n_qubits;
  if (!std::isnan(o.dmi)) cfg.chain.dmi = o.dmi;
  if (!std::isnan(o.field)) cfg.chain.field = o.field;
  if (!o.boundary.empty()) {
    if (o.boundary != "open" && o.boundary != "periodic")
      throw std::invalid_argument("boundary must be open or periodic");
    cfg.chain.boundary = o.boundary == "periodic" ? Boundary::periodic : Boundary::open;
  }
  if (!o.layers.empty()) cfg.layers = o.layers;
  if (!o.topology.empty()) {
    if (o.topology != "ring" && o.topology != "linear")
      throw std::invalid_argument("topology must be ring or linear");
    cfg.topology = o.topology == "linear" ? EntanglerTopology::linear : EntanglerTopology::ring;
  }
  if (o.max_iterations > 0) cfg.optimizer.max_iterations = o.max_iterations;
  if (!o.gradient.empty()) {
    if (o.gradient == "adjoint" || o.gradient == "adjoint_analytic")
      cfg.optimizer.gradient_mode = GradientMode::adjoint_analytic;
    else if (o.gradient == "central_difference" || o.gradient == "central")
      cfg.optimizer.gradient_mode = GradientMode::central_difference;
    else
      throw std::invalid_argument("gradient must be central_difference or adjoint");
  }
  if (!std::isnan(o.fd_step)) cfg.optimizer.fd_step = o.fd_step;
  if (!std::isnan(o.grad_tol)) cfg.optimizer.grad_tol = o.grad_tol;
  if (o.restarts > 0) cfg.optimizer.restarts = o.restarts;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.threads > 0) {
    cfg.optimizer.threads = o.threads;
  } else if (const char* env = std::getenv("CHAINVQE_THREADS")) {
    cfg.optimizer.threads = std::max(1, std::atoi(env));
  }
  if (o.svg) cfg.outputs.svg = true;
  if (o.no_csv) cfg.outputs.csv = false;
  if (o.no_json) cfg.outputs.json_files = false;
  if (o.trace) cfg.optimizer.record_trace = true;
  if (o.warm_start) cfg.warm_start = true;
  return cfg;
}

int finish(const RunManifest& man) {
  std::cout << "wrote " << man.files.size() << " files\n";
  if (!man.failures.empty()) {
    for (const auto& f : man.failures) std::cerr << "failed: " << f << "\n";
    return exit_partial_failure;
  }
  return exit_ok;
}

int run_mode_command(const CliOverrides& o, RunMode mode) {
  const ExperimentConfig cfg = build_config(o, mode);
  const RunManifest man = run_experiment(cfg);
  return finish(man);
}

// the Fig. 2-4 reproduction plus the supplemental parameter studies
int run_reproduce(const CliOverrides& o, const std::string& profile) {
  ExperimentConfig base = build_config(o, RunMode::vqe_energy);
  if (profile == "ci") {
    base.optimizer.restarts = 2;
    base.optimizer.max_iterations = 5000;
  } else if (profile != "full") {
    throw std::invalid_argument("profile must be full or ci");
  }
  base.optimizer.gradient_mode = GradientMode::adjoint_analytic;
  const std::filesystem::path root =
      o.out_dir.empty() ? std::filesystem::path("paper_run") : std::filesystem::path(o.out_dir);

  struct Stage {
    const char* name;
    RunMode mode;
    double dmi, field;
    std::vector<int> layers;
  };
  const std::vector<Stage> stages = {
      {"soliton", RunMode::soliton_only, 0.63, 3.36e-3, {1}},
      {"exact", RunMode::exact_only, 0.63, 3.36e-3, {1}},
      {"sweep", RunMode::vqe_energy, 0.63, 3.36e-3, {1, 2, 3, 4, 5, 6}},
      {"nine_layer", RunMode::vqe_energy, 0.63, 3.36e-3, {9}},
      {"fidelity_max", RunMode::fidelity_max, 0.63, 3.36e-3, {9}},
      {"case1_ferromagnet", RunMode::vqe_energy, 0.0, 0.0, {1}},
      {"case2_polarized", RunMode::vqe_energy, 0.0, 1.0, {1}},
      {"case3_spiral", RunMode::vqe_energy, 1.0, 0.0, {8}},
      {"case4_strong", RunMode::vqe_energy, 5.0, 5.0, {8}},
  };

  bool any_failed = false;
  for (const auto& st : stages) {
    ExperimentConfig cfg = base;
    cfg.mode = st.mode;
    cfg.chain.dmi = st.dmi;
    cfg.chain.field = st.field;
    cfg.layers = st.layers;
    cfg.outputs.directory = root / st.name;
    std::cout << "== " << st.name << "\n";
    try {
      const RunManifest man = run_experiment(cfg);
      if (!man.failures.empty()) any_failed = true;
      for (const auto& f : man.failures) std::cerr << "failed: " << f << "\n";
    } catch (const std::exception& e) {
      std::cerr << st.name << " failed: " << e.what() << "\n";
      any_failed = true;
    }
  }
  return any_failed ? exit_partial_failure : exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-chain VQE with chiral soliton analytics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(chainvqe::tool_version));

  CliOverrides o;
  std::string profile = "full";

  auto* vqe = app.add_subcommand("vqe", "minimize the chain energy over the ansatz");
  add_common_options(vqe, o);
  auto* exact = app.add_subcommand("exact", "exact diagonalization only");
  add_common_options(exact, o);
  auto* soliton = app.add_subcommand("soliton", "closed-form soliton lattice solution");
  add_common_options(soliton, o);
  auto* conc = app.add_subcommand("concurrence", "concurrence map of the exact ground state");
  add_common_options(conc, o);
  auto* texture = app.add_subcommand("texture", "magnetization texture of the exact ground state");
  add_common_options(texture, o);
  auto* fid = app.add_subcommand("fidelity-max", "maximize overlap with the exact ground space");
  add_common_options(fid, o);
  auto* plot = app.add_subcommand("plot", "render SVG plots from an output directory");
  std::string plot_dir = ".";
  plot->add_option("--out", plot_dir, "directory holding the CSV artifacts");
  auto* repro = app.add_subcommand("reproduce-paper", "full experiment grid");
  add_common_options(repro, o);
  repro->add_option("--profile", profile, "full|ci");

  CLI11_PARSE(app, argc, argv);

  try {
    if (vqe->parsed()) return run_mode_command(o, chainvqe::RunMode::vqe_energy);
    if (exact->parsed()) return run_mode_command(o, chainvqe::RunMode::exact_only);
    if (soliton->parsed()) return run_mode_command(o, chainvqe::RunMode::soliton_only);
    if (fid->parsed()) return run_mode_command(o, chainvqe::RunMode::fidelity_max);
    // concurrence/texture are views of the exact run's artifacts
    if (conc->parsed() || texture->parsed())
      return run_mode_command(o, chainvqe::RunMode::exact_only);
    if (plot->parsed()) {
      namespace fs = std::filesystem;
      const fs::path dir(plot_dir);
      const fs::path manifest_path = dir / "manifest.json";
      if (!fs::exists(manifest_path))
        throw std::invalid_argument("no manifest.json in " + dir.string());
      std::ifstream in(manifest_path);
      chainvqe::json mj;
      in >> mj;
      chainvqe::RunManifest man;
      man.config_echo = mj.value("config", chainvqe::json::object());
      man.version = mj.value("version", "");
      man.files = mj.value("files", std::vector<std::string>{});
      man.summary = mj.value("summary", chainvqe::json::object());
      const auto made = chainvqe::emit_svg_plots(man, dir);
      std::cout << "rendered " << made.size() << " plots\n";
      return exit_ok;
    }
    if (repro->parsed()) return run_reproduce(o, profile);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical_failure;
  }
  return exit_ok;
}
