#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chainvqe/io.hpp"
#include "chainvqe/svg.hpp"

namespace chainvqe {

inline constexpr std::string_view tool_version = "0.1.0";

enum class RunMode { vqe_energy, fidelity_max, exact_only, soliton_only };

inline std::string to_string(RunMode m) {
  switch (m) {
  case RunMode::vqe_energy: return "vqe_energy";
  case RunMode::fidelity_max: return "fidelity_max";
  case RunMode::exact_only: return "exact_only";
  default: return "soliton_only";
  }
}

inline RunMode run_mode_from_string(const std::string& s) {
  if (s == "vqe_energy") return RunMode::vqe_energy;
  if (s == "fidelity_max") return RunMode::fidelity_max;
  if (s == "exact_only") return RunMode::exact_only;
  if (s == "soliton_only") return RunMode::soliton_only;
  throw std::invalid_argument("unknown run mode '" + s + "'");
}

struct OutputOptions {
  std::filesystem::path directory = ".";
  bool csv = true;
  bool json_files = true;
  bool svg = false;
};

/// One experiment: couplings as ratios D/J and B/J with J normalized to 1,
/// an ansatz depth (or ascending sweep of depths), the optimizer protocol,
/// and what to run. Physical units (e.g. J in mRy) ride along as metadata.
struct ExperimentConfig {
  ChainParams chain{10, 1.0, 0.63, 3.36e-3, Boundary::open};
  std::vector<int> layers{1};
  EntanglerTopology topology = EntanglerTopology::ring;
  OptimizerConfig optimizer;
  RunMode mode = RunMode::vqe_energy;
  OutputOptions outputs;
  std::uint64_t seed = 1;
  bool warm_start = false; // seed each depth with the zero-padded best of the previous
  json metadata;

  void validate() const {
    if (chain.n_qubits < 2) throw std::invalid_argument("config: chain.n_qubits must be >= 2");
    if (layers.empty()) throw std::invalid_argument("config: layer sweep must be non-empty");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (layers[i] < 1) throw std::invalid_argument("config: layer counts must be >= 1");
      if (i > 0 && layers[i] <= layers[i - 1])
        throw std::invalid_argument("config: layer sweep must be ascending");
    }
    if (optimizer.restarts < 1) throw std::invalid_argument("config: restarts must be >= 1");
  }
};

inline json config_to_json(const ExperimentConfig& c) {
  return {
      {"chain",
       {{"n_qubits", c.chain.n_qubits},
        {"j_exchange", c.chain.j_exchange},
        {"dmi", c.chain.dmi},
        {"field", c.chain.field},
        {"boundary", c.chain.boundary == Boundary::periodic ? "periodic" : "open"}}},
      {"ansatz",
       {{"layers", c.layers},
        {"topology", c.topology == EntanglerTopology::ring ? "ring" : "linear"}}},
      {"optimizer",
       {{"max_iterations", c.optimizer.max_iterations},
        {"gradient", c.optimizer.gradient_mode == GradientMode::adjoint_analytic
                         ? "adjoint_analytic"
                         : "central_difference"},
        {"fd_step", c.optimizer.fd_step},
        {"grad_tol", c.optimizer.grad_tol},
        {"wolfe_c1", c.optimizer.wolfe_c1},
        {"wolfe_c2", c.optimizer.wolfe_c2},
        {"restarts", c.optimizer.restarts},
        {"threads", c.optimizer.threads},
        {"record_trace", c.optimizer.record_trace}}},
      {"mode", to_string(c.mode)},
      {"outputs",
       {{"directory", c.outputs.directory.string()},
        {"csv", c.outputs.csv},
        {"json", c.outputs.json_files},
        {"svg", c.outputs.svg}}},
      {"seed", c.seed},
      {"warm_start", c.warm_start},
      {"metadata", c.metadata}};
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("chain")) {
    const auto& ch = j.at("chain");
    if (ch.contains("n_qubits")) c.chain.n_qubits = ch.at("n_qubits").get<int>();
    if (ch.contains("j_exchange")) c.chain.j_exchange = ch.at("j_exchange").get<double>();
    if (ch.contains("dmi")) c.chain.dmi = ch.at("dmi").get<double>();
    if (ch.contains("field")) c.chain.field = ch.at("field").get<double>();
    if (ch.contains("boundary"))
      c.chain.boundary = ch.at("boundary").get<std::string>() == "periodic"
                             ? Boundary::periodic
                             : Boundary::open;
  }
  if (j.contains("ansatz")) {
    const auto& an = j.at("ansatz");
    if (an.contains("layers")) {
      if (an.at("layers").is_array())
        c.layers = an.at("layers").get<std::vector<int>>();
      else
        c.layers = {an.at("layers").get<int>()};
    }
    if (an.contains("topology"))
      c.topology = an.at("topology").get<std::string>() == "linear"
                       ? EntanglerTopology::linear
                       : EntanglerTopology::ring;
  }
  if (j.contains("optimizer")) {
    const auto& op = j.at("optimizer");
    if (op.contains("max_iterations")) c.optimizer.max_iterations = op.at("max_iterations").get<int>();
    if (op.contains("gradient"))
      c.optimizer.gradient_mode = op.at("gradient").get<std::string>() == "adjoint_analytic"
                                      ? GradientMode::adjoint_analytic
                                      : GradientMode::central_difference;
    if (op.contains("fd_step")) c.optimizer.fd_step = op.at("fd_step").get<double>();
    if (op.contains("grad_tol")) c.optimizer.grad_tol = op.at("grad_tol").get<double>();
    if (op.contains("wolfe_c1")) c.optimizer.wolfe_c1 = op.at("wolfe_c1").get<double>();
    if (op.contains("wolfe_c2")) c.optimizer.wolfe_c2 = op.at("wolfe_c2").get<double>();
    if (op.contains("restarts")) c.optimizer.restarts = op.at("restarts").get<int>();
    if (op.contains("threads")) c.optimizer.threads = op.at("threads").get<int>();
    if (op.contains("record_trace")) c.optimizer.record_trace = op.at("record_trace").get<bool>();
  }
  if (j.contains("mode")) c.mode = run_mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    if (o.contains("directory")) c.outputs.directory = o.at("directory").get<std::string>();
    if (o.contains("csv")) c.outputs.csv = o.at("csv").get<bool>();
    if (o.contains("json")) c.outputs.json_files = o.at("json").get<bool>();
    if (o.contains("svg")) c.outputs.svg = o.at("svg").get<bool>();
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("warm_start")) c.warm_start = j.at("warm_start").get<bool>();
  if (j.contains("metadata")) c.metadata = j.at("metadata");
  return c;
}

struct RunManifest {
  json config_echo;
  std::string version;
  std::vector<std::string> files; // paths relative to the output directory
  json timings;                   // seconds per stage (excluded from byte-stability)
  std::vector<std::uint64_t> seeds_used;
  std::vector<std::string> failures; // nonempty entries mean partial failure
  json summary;                      // spectrum/soliton/per-layer key numbers

  json to_json() const {
    return {{"config", config_echo},   {"version", version}, {"files", files},
            {"timings", timings},      {"seeds", seeds_used}, {"failures", failures},
            {"summary", summary}};
  }
};

/// Renders deterministic SVG companions for every plottable CSV the manifest
/// references: sweep line plots (energy with the exact-energy dashed line, and
/// overlap), concurrence heatmaps, and texture arrow plots. New paths are
/// appended to the manifest and returned.
inline std::vector<std::string> emit_svg_plots(RunManifest& man,
                                               const std::filesystem::path& dir) {
  std::vector<std::string> made;
  const std::vector<std::string> inputs = man.files;
  for (const auto& rel : inputs) {
    const std::filesystem::path src = dir / rel;
    if (!std::filesystem::exists(src))
      throw std::runtime_error("emit_svg_plots: missing input file " + rel);
    const std::string name = std::filesystem::path(rel).filename().string();
    if (name == "sweep.csv") {
      const auto csv = read_csv(src);
      std::optional<double> e0;
      if (man.summary.contains("spectrum") && man.summary["spectrum"].contains("e0"))
        e0 = man.summary["spectrum"]["e0"].get<double>();
      render_sweep_svg(csv, "mean", "std", "best", "energy vs layers", e0,
                       dir / "sweep_energy.svg");
      made.push_back("sweep_energy.svg");
      render_sweep_svg(csv, "fidelity", "", "", "overlap vs layers", std::nullopt,
                       dir / "sweep_overlap.svg");
      made.push_back("sweep_overlap.svg");
    } else if (name.starts_with("concurrence_") && name.ends_with(".csv")) {
      const auto csv = read_csv(src);
      const std::string out = name.substr(0, name.size() - 4) + ".svg";
      render_concurrence_svg(csv, name.substr(0, name.size() - 4), dir / out);
      made.push_back(out);
    } else if (name.starts_with("texture_") && name.ends_with(".csv")) {
      const auto csv = read_csv(src);
      const std::string out = name.substr(0, name.size() - 4) + ".svg";
      render_texture_svg(csv, name.substr(0, name.size() - 4), dir / out);
      made.push_back(out);
    }
  }
  for (const auto& f : made) man.files.push_back(f);
  return made;
}

namespace detail {

class StageTimer {
public:
  explicit StageTimer(json& sink, std::string name)
      : sink_(sink), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    sink_[name_] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  json& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

inline void emit(RunManifest& man, const ExperimentConfig& cfg,
                 const std::filesystem::path& rel, const std::string& content) {
  write_text_file(cfg.outputs.directory / rel, content);
  man.files.push_back(rel.string());
}

inline void emit_json(RunManifest& man, const ExperimentConfig& cfg,
                      const std::filesystem::path& rel, const json& j) {
  if (!cfg.outputs.json_files) return;
  emit(man, cfg, rel, j.dump(2) + "\n");
}

} // namespace detail

/// Executes one configured experiment: the exact solve (once per Hamiltonian),
/// then the requested mode per layer count, writing CSV/JSON artifacts and the
/// manifest (always last). A failed layer is recorded in the manifest while
/// the remaining layers still run.
inline RunManifest run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.outputs.directory);

  RunManifest man;
  man.config_echo = config_to_json(cfg);
  man.version = std::string(tool_version);

  // soliton analytics apply whenever the continuum model does
  std::optional<SolitonSolution> soliton;
  if (cfg.chain.j_exchange > 0.0 && cfg.chain.field > 0.0 && cfg.chain.dmi != 0.0) {
    detail::StageTimer t(man.timings, "soliton");
    const ContinuumParams cp{cfg.chain.j_exchange, cfg.chain.dmi, cfg.chain.field, 1.0};
    soliton = soliton_solution(cp);
  }
  {
    json rep;
    if (soliton) {
      rep = soliton_report(*soliton);
      man.summary["soliton"] = rep;
    } else {
      const ContinuumParams cp{cfg.chain.j_exchange, cfg.chain.dmi, cfg.chain.field, 1.0};
      rep = {{"solution", nullptr},
             {"k0", cp.k0()},
             {"m", cfg.chain.field > 0 ? cp.m_field() : 0.0},
             {"reason", "soliton lattice not stabilized (pi k0 <= 4 m or zero couplings)"}};
      man.summary["soliton"] = rep;
    }
    detail::emit_json(man, cfg, "soliton.json", rep);
  }
  if (soliton && cfg.outputs.csv) {
    detail::emit(man, cfg, "texture_analytic.csv", [&] {
      const auto rows = analytic_texture(*soliton, cfg.chain.n_qubits);
      std::string s = "site,mx,my,mz\n";
      for (const auto& r : rows)
        s += std::to_string(r.site) + "," + detail::fmt_double(r.mx) + "," +
             detail::fmt_double(r.my) + "," + detail::fmt_double(r.mz) + "\n";
      return s;
    }());
  }

  if (cfg.mode == RunMode::soliton_only) {
    detail::emit_json(man, cfg, "manifest.json", man.to_json());
    return man;
  }

  // exact oracle, once per Hamiltonian
  const Hamiltonian h = build_chain_hamiltonian(cfg.chain);
  Spectrum spectrum;
  {
    detail::StageTimer t(man.timings, "exact_solve");
    spectrum = lowest_eigenpairs(h, 2);
  }
  man.summary["spectrum"] = spectrum_summary(spectrum);
  detail::emit_json(man, cfg, "spectrum.json", spectrum_summary(spectrum));

  const StateVector& ground = spectrum.eigenvectors.front();
  const auto exact_conc = concurrence_matrix(ground);
  if (cfg.outputs.csv) {
    detail::emit(man, cfg, "concurrence_exact.csv", [&] {
      std::string out;
      for (int i = 0; i < exact_conc.n; ++i) {
        for (int j = 0; j < exact_conc.n; ++j) {
          if (j) out += ",";
          out += detail::fmt_double(exact_conc(i, j));
        }
        out += "\n";
      }
      return out;
    }());
    detail::emit(man, cfg, "texture_exact.csv", [&] {
      const auto rows = magnetization_texture(ground);
      std::string out = "site,mx,my,mz\n";
      for (const auto& r : rows)
        out += std::to_string(r.site) + "," + detail::fmt_double(r.mx) + "," +
               detail::fmt_double(r.my) + "," + detail::fmt_double(r.mz) + "\n";
      return out;
    }());
  }
  detail::emit_json(man, cfg, "concurrence_exact.json",
                    concurrence_json(exact_conc.n, exact_conc.values));

  if (cfg.mode == RunMode::exact_only) {
    if (cfg.outputs.svg) emit_svg_plots(man, cfg.outputs.directory);
    detail::emit_json(man, cfg, "manifest.json", man.to_json());
    return man;
  }

  // VQE per layer count
  std::vector<SweepRow> sweep;
  ParameterVector previous_best;
  json layer_summaries = json::object();
  for (const int layers : cfg.layers) {
    const std::string tag = "L" + std::to_string(layers);
    try {
      detail::StageTimer t(man.timings, "vqe_" + tag);
      const AnsatzSpec spec{cfg.chain.n_qubits, layers, cfg.topology};
      OptimizerConfig opt = cfg.optimizer;
      opt.base_seed = cfg.seed;
      if (cfg.warm_start && !previous_best.empty()) {
        ParameterVector padded = previous_best;
        padded.resize(static_cast<std::size_t>(param_count(spec)), 0.0);
        opt.warm_starts.push_back(std::move(padded));
      }
      const VqeObjective objective =
          cfg.mode == RunMode::fidelity_max
              ? VqeObjective::negative_fidelity(
                    ground_space_projector(spectrum, spectrum.degeneracy_tol))
              : VqeObjective::energy(h);
      const VqeResult r = run_vqe(objective, spec, opt, &spectrum);
      for (const auto& o : r.per_restart) man.seeds_used.push_back(o.seed);

      SweepRow row;
      row.layers = layers;
      row.mean = r.mean_final;
      row.stddev = r.std_final;
      row.best = r.best_energy;
      row.delta = r.delta;
      row.fidelity = r.fidelity;
      sweep.push_back(row);

      detail::emit_json(man, cfg, "vqe_" + tag + ".json", vqe_result_json(r));
      layer_summaries[tag] = {{"best", r.best_energy},
                              {"mean", r.mean_final},
                              {"std", r.std_final},
                              {"fidelity", r.fidelity},
                              {"delta", std::isnan(r.delta) ? json(nullptr) : json(r.delta)}};

      const StateVector best_state = prepare_state(spec, r.best_parameters);
      if (cfg.outputs.csv) {
        detail::emit(man, cfg, "texture_vqe_" + tag + ".csv", [&] {
          const auto rows = magnetization_texture(best_state);
          std::string out = "site,mx,my,mz\n";
          for (const auto& tr : rows)
            out += std::to_string(tr.site) + "," + detail::fmt_double(tr.mx) + "," +
                   detail::fmt_double(tr.my) + "," + detail::fmt_double(tr.mz) + "\n";
          return out;
        }());
        const auto vqe_conc = concurrence_matrix(best_state);
        std::string cs;
        for (int i = 0; i < vqe_conc.n; ++i) {
          for (int j = 0; j < vqe_conc.n; ++j) {
            if (j) cs += ",";
            cs += detail::fmt_double(vqe_conc(i, j));
          }
          cs += "\n";
        }
        detail::emit(man, cfg, "concurrence_vqe_" + tag + ".csv", cs);
        const auto ratio = relative_concurrence(vqe_conc, exact_conc);
        std::string rs;
        for (int i = 0; i < vqe_conc.n; ++i) {
          for (int j = 0; j < vqe_conc.n; ++j) {
            if (j) rs += ",";
            const double v = ratio[static_cast<std::size_t>(i) * static_cast<std::size_t>(vqe_conc.n) +
                                   static_cast<std::size_t>(j)];
            rs += std::isnan(v) ? "nan" : detail::fmt_double(v);
          }
          rs += "\n";
        }
        detail::emit(man, cfg, "concurrence_ratio_" + tag + ".csv", rs);
        detail::emit_json(man, cfg, "concurrence_ratio_" + tag + ".json",
                          concurrence_json(vqe_conc.n, ratio));
      }
      if (cfg.optimizer.record_trace && cfg.outputs.csv) {
        std::string ts = "restart,iteration,objective\n";
        for (std::size_t rr = 0; rr < r.per_restart.size(); ++rr)
          for (const auto& [it, fv] : r.per_restart[rr].trace)
            ts += std::to_string(rr) + "," + std::to_string(it) + "," +
                  detail::fmt_double(fv) + "\n";
        detail::emit(man, cfg, "trace_" + tag + ".csv", ts);
      }
      previous_best = r.best_parameters;
    } catch (const std::exception& e) {
      man.failures.push_back(tag + ": " + e.what());
    }
  }
  man.summary["layers"] = layer_summaries;

  if (cfg.outputs.csv) {
    std::string s = "layers,mean,std,best,delta,fidelity\n";
    for (const auto& r : sweep)
      s += std::to_string(r.layers) + "," + detail::fmt_double(r.mean) + "," +
           detail::fmt_double(r.stddev) + "," + detail::fmt_double(r.best) + "," +
           detail::fmt_double(r.delta) + "," + detail::fmt_double(r.fidelity) + "\n";
    detail::emit(man, cfg, "sweep.csv", s);
  }

  if (cfg.outputs.svg) emit_svg_plots(man, cfg.outputs.directory);

  // every referenced file must exist before the manifest is finalized
  for (const auto& f : man.files)
    if (!std::filesystem::exists(cfg.outputs.directory / f))
      throw std::runtime_error("manifest references missing file " + f);
  detail::emit_json(man, cfg, "manifest.json", man.to_json());
  return man;
}

} // namespace chainvqe
