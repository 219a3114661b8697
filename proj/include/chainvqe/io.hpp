#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainvqe/entanglement.hpp"
#include "chainvqe/exact.hpp"
#include "chainvqe/pauli.hpp"
#include "chainvqe/soliton.hpp"
#include "chainvqe/vqe.hpp"

namespace chainvqe {

using nlohmann::json;

// ---- Hamiltonian JSON: {"n_qubits": n, "terms": [{"coeff": c, "ops": [[q, "X"], ...]}]}

inline json to_json(const Hamiltonian& h) {
  json terms = json::array();
  for (const auto& t : h.terms) {
    json ops = json::array();
    for (const auto& [q, ax] : t.operators)
      ops.push_back(json::array({q, std::string(1, axis_name(ax))}));
    terms.push_back({{"coeff", t.coefficient}, {"ops", std::move(ops)}});
  }
  return {{"n_qubits", h.n_qubits}, {"terms", std::move(terms)}};
}

inline Axis axis_from_string(const std::string& s) {
  if (s == "X") return Axis::X;
  if (s == "Y") return Axis::Y;
  if (s == "Z") return Axis::Z;
  throw std::invalid_argument("unknown Pauli axis '" + s + "'");
}

inline Hamiltonian hamiltonian_from_json(const json& j) {
  std::vector<PauliTerm> terms;
  for (const auto& t : j.at("terms")) {
    std::vector<std::pair<int, Axis>> ops;
    for (const auto& op : t.at("ops"))
      ops.emplace_back(op.at(0).get<int>(), axis_from_string(op.at(1).get<std::string>()));
    terms.emplace_back(t.at("coeff").get<double>(), std::move(ops));
  }
  return make_hamiltonian(j.at("n_qubits").get<int>(), std::move(terms));
}

// ---- summaries

inline json spectrum_summary(const Spectrum& s) {
  json residuals = json::array();
  for (double r : s.residuals) residuals.push_back(r);
  json out{{"e0", s.e0()},
           {"degeneracy", s.ground_degeneracy},
           {"residuals", std::move(residuals)}};
  try {
    out["e1"] = s.e1();
  } catch (const std::runtime_error&) {
    out["e1"] = nullptr;
  }
  return out;
}

inline json soliton_report(const SolitonSolution& sol) {
  return {{"kappa", sol.kappa},
          {"period", sol.period},
          {"energy_per_period", sol.energy_per_period},
          {"k0", sol.params.k0()},
          {"m", sol.params.m_field()}};
}

inline json vqe_result_json(const VqeResult& r) {
  json restarts = json::array();
  for (const auto& o : r.per_restart) {
    json e{{"seed", o.seed},
           {"final_value", o.final_value},
           {"iterations", o.iterations},
           {"status", to_string(o.status)}};
    if (!o.error.empty()) e["error"] = o.error;
    restarts.push_back(std::move(e));
  }
  // wall time is reported through the manifest's timing block so result
  // files stay byte-stable across reruns
  json out{{"best_energy", r.best_energy},
           {"mean_final", r.mean_final},
           {"std_final", r.std_final},
           {"per_restart", std::move(restarts)},
           {"best_parameters", r.best_parameters}};
  if (r.has_metrics) {
    out["fidelity"] = r.fidelity;
    out["delta"] = std::isnan(r.delta) ? json(nullptr) : json(r.delta);
  }
  return out;
}

// ---- CSV writers (deterministic %.17g formatting)

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace detail

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

/// layers, mean, std, best, delta, fidelity — one row per sweep entry
struct SweepRow {
  int layers = 0;
  double mean = 0.0, stddev = 0.0, best = 0.0;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();
};

inline void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::string s = "layers,mean,std,best,delta,fidelity\n";
  for (const auto& r : rows) {
    s += std::to_string(r.layers) + "," + detail::fmt_double(r.mean) + "," +
         detail::fmt_double(r.stddev) + "," + detail::fmt_double(r.best) + "," +
         detail::fmt_double(r.delta) + "," + detail::fmt_double(r.fidelity) + "\n";
  }
  write_text_file(path, s);
}

inline void write_concurrence_csv(const std::filesystem::path& path, int n,
                                  const std::vector<double>& values) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) s += ",";
      s += detail::fmt_double(values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                     static_cast<std::size_t>(j)]);
    }
    s += "\n";
  }
  write_text_file(path, s);
}

inline json concurrence_json(int n, const std::vector<double>& values) {
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) {
      const double v = values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                              static_cast<std::size_t>(j)];
      row.push_back(std::isnan(v) ? json(nullptr) : json(v)); // NaN sentinel -> null
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_texture_csv(const std::filesystem::path& path,
                              const std::vector<TextureRow>& rows) {
  std::string s = "site,mx,my,mz\n";
  for (const auto& r : rows)
    s += std::to_string(r.site) + "," + detail::fmt_double(r.mx) + "," +
         detail::fmt_double(r.my) + "," + detail::fmt_double(r.mz) + "\n";
  write_text_file(path, s);
}

inline void write_trace_csv(const std::filesystem::path& path,
                            const std::vector<RestartOutcome>& restarts) {
  std::string s = "restart,iteration,objective\n";
  for (std::size_t r = 0; r < restarts.size(); ++r)
    for (const auto& [it, fv] : restarts[r].trace)
      s += std::to_string(r) + "," + std::to_string(it) + "," + detail::fmt_double(fv) + "\n";
  write_text_file(path, s);
}

// ---- CSV readers (for the plot command)

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(pos));
        break;
      }
      cells.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

} // namespace chainvqe
