#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "chainvqe/ansatz.hpp"
#include "chainvqe/bfgs.hpp"
#include "chainvqe/exact.hpp"
#include "chainvqe/pauli.hpp"

namespace chainvqe {

/// What the classical loop minimizes: the energy <psi|H|psi>, or the negative
/// squared overlap with a target ground space, -sum_k |<phi_k|psi>|^2 (the
/// latter is the VQE for H~ = -|phi><phi| summed over the basis).
struct VqeObjective {
  enum class Kind { energy, negative_fidelity } kind = Kind::energy;
  const Hamiltonian* hamiltonian = nullptr;
  std::vector<StateVector> targets;

  static VqeObjective energy(const Hamiltonian& h) {
    VqeObjective o;
    o.kind = Kind::energy;
    o.hamiltonian = &h;
    return o;
  }

  static VqeObjective negative_fidelity(std::vector<StateVector> basis) {
    if (basis.empty())
      throw std::invalid_argument("VqeObjective: empty target basis");
    for (const auto& t : basis)
      if (std::abs(t.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("VqeObjective: target state not normalized");
    VqeObjective o;
    o.kind = Kind::negative_fidelity;
    o.targets = std::move(basis);
    return o;
  }
};

enum class GradientMode { central_difference, adjoint_analytic };

struct OptimizerConfig {
  int max_iterations = 50000;
  GradientMode gradient_mode = GradientMode::central_difference;
  double fd_step = 1e-6;
  double grad_tol = 1e-6;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int restarts = 5;
  std::uint64_t base_seed = 1;
  int threads = 1;            // restarts run in parallel when > 1
  bool record_trace = false;
  std::vector<ParameterVector> warm_starts; // extra restarts from given angles
                                            // (e.g. zero-padded best of a
                                            // shallower ansatz)
};

namespace detail {

// effective "Hamiltonian" applied to psi: H|psi> or -P|psi> for the projector
inline StateVector apply_objective_operator(const VqeObjective& obj, const StateVector& psi) {
  if (obj.kind == VqeObjective::Kind::energy) return apply_hamiltonian(*obj.hamiltonian, psi);
  StateVector out(psi.n_qubits);
  for (const auto& phi : obj.targets) {
    const complex ov = inner_product(phi, psi);
    for (std::size_t k = 0; k < out.dim(); ++k)
      out.amplitudes[k] -= ov * phi.amplitudes[k];
  }
  return out;
}

// generator G of each gate (U = exp(-i theta G)): sigma_axis, or |1><1| (x) Y
inline void apply_generator(const GateRef& g, const StateVector& in, StateVector& out) {
  const complex* a = in.amplitudes.data();
  complex* o = out.amplitudes.data();
  const std::size_t dim = in.dim();
  if (g.kind == GateRef::Kind::rotation) {
    const std::size_t bit = std::size_t{1} << g.qubit;
    switch (g.axis) {
    case Axis::X:
      for (std::size_t k = 0; k < dim; ++k) o[k] = a[k ^ bit];
      break;
    case Axis::Y:
      for (std::size_t k = 0; k < dim; ++k)
        o[k] = (k & bit) ? complex{0, 1} * a[k ^ bit] : complex{0, -1} * a[k ^ bit];
      break;
    case Axis::Z:
      for (std::size_t k = 0; k < dim; ++k) o[k] = (k & bit) ? -a[k] : a[k];
      break;
    }
  } else {
    const std::size_t cbit = std::size_t{1} << g.qubit;
    const std::size_t tbit = std::size_t{1} << g.target;
    for (std::size_t k = 0; k < dim; ++k) {
      if (k & cbit)
        o[k] = (k & tbit) ? complex{0, 1} * a[k ^ tbit] : complex{0, -1} * a[k ^ tbit];
      else
        o[k] = complex{0, 0};
    }
  }
}

} // namespace detail

inline double evaluate_objective(const VqeObjective& obj, const AnsatzSpec& spec,
                                 const ParameterVector& theta) {
  const StateVector psi = prepare_state(spec, theta);
  if (obj.kind == VqeObjective::Kind::energy) return expectation(*obj.hamiltonian, psi);
  double f = 0.0;
  for (const auto& phi : obj.targets) f -= std::norm(inner_product(phi, psi));
  return f;
}

/// Reverse-sweep analytic gradient: d<psi|A|psi>/d theta_k = 2 Im <b_k|G_k|psi_k>
/// with A the objective operator, each gate undone in turn on bra and ket.
inline ParameterVector gradient_adjoint(const VqeObjective& obj, const AnsatzSpec& spec,
                                        const ParameterVector& theta) {
  const auto gates = circuit_gates(spec);
  StateVector ket = prepare_state(spec, theta);
  StateVector bra = detail::apply_objective_operator(obj, ket);
  StateVector scratch(spec.n_qubits);
  ParameterVector grad(theta.size(), 0.0);
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    detail::apply_generator(*it, ket, scratch);
    grad[static_cast<std::size_t>(it->param_index)] =
        2.0 * inner_product(bra, scratch).imag();
    const double th = theta[static_cast<std::size_t>(it->param_index)];
    apply_gate(ket, *it, -th);
    apply_gate(bra, *it, -th);
  }
  return grad;
}

inline ParameterVector gradient_central_difference(const VqeObjective& obj,
                                                   const AnsatzSpec& spec,
                                                   ParameterVector theta, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("gradient: fd step must be positive");
  ParameterVector grad(theta.size(), 0.0);
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double saved = theta[k];
    theta[k] = saved + step;
    const double fp = evaluate_objective(obj, spec, theta);
    theta[k] = saved - step;
    const double fm = evaluate_objective(obj, spec, theta);
    theta[k] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("gradient: non-finite objective while probing");
    grad[k] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

inline ParameterVector gradient(const VqeObjective& obj, const AnsatzSpec& spec,
                                const ParameterVector& theta, GradientMode mode,
                                double fd_step = 1e-6) {
  if (mode == GradientMode::adjoint_analytic) return gradient_adjoint(obj, spec, theta);
  return gradient_central_difference(obj, spec, theta, fd_step);
}

struct RestartOutcome {
  std::uint64_t seed = 0;
  double final_value = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  BfgsStatus status = BfgsStatus::iteration_cap;
  ParameterVector parameters;
  std::vector<std::pair<int, double>> trace;
  std::string error; // nonempty when the restart aborted
};

struct VqeResult {
  double best_energy = std::numeric_limits<double>::quiet_NaN();
  ParameterVector best_parameters;
  std::vector<RestartOutcome> per_restart;
  double mean_final = std::numeric_limits<double>::quiet_NaN();
  double std_final = std::numeric_limits<double>::quiet_NaN(); // sample std over restarts
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  bool has_metrics = false;
  double wall_time_s = 0.0;

  int best_restart() const {
    int best = -1;
    for (std::size_t r = 0; r < per_restart.size(); ++r)
      if (per_restart[r].error.empty() &&
          (best < 0 || per_restart[r].final_value < per_restart[static_cast<std::size_t>(best)].final_value))
        best = static_cast<int>(r);
    return best;
  }
};

/// Projector fidelity sum_k |<phi_k|psi>|^2 over an orthonormal ground-space basis.
inline double state_fidelity(const StateVector& psi, const std::vector<StateVector>& basis) {
  double f = 0.0;
  for (const auto& phi : basis) f += std::norm(inner_product(phi, psi));
  return f;
}

/// Multi-restart BFGS minimization from seeded random angles (seed base_seed + r).
/// Restarts are independent; failures are recorded without aborting the rest.
/// When an oracle spectrum is supplied, projector fidelity and delta are filled in.
inline VqeResult run_vqe(const VqeObjective& obj, const AnsatzSpec& spec,
                         const OptimizerConfig& cfg, const Spectrum* oracle = nullptr) {
  if (cfg.restarts < 1) throw std::invalid_argument("run_vqe: restarts >= 1 required");
  const auto t_start = std::chrono::steady_clock::now();

  const int total_runs = cfg.restarts + static_cast<int>(cfg.warm_starts.size());
  VqeResult result;
  result.per_restart.resize(static_cast<std::size_t>(total_runs));

  const auto run_one = [&](int r) {
    RestartOutcome& out = result.per_restart[static_cast<std::size_t>(r)];
    const bool warm = r >= cfg.restarts;
    out.seed = warm ? 0 : cfg.base_seed + static_cast<std::uint64_t>(r);
    try {
      ParameterVector theta0 =
          warm ? cfg.warm_starts[static_cast<std::size_t>(r - cfg.restarts)]
               : random_parameters(spec, out.seed);
      BfgsOptions bopt;
      bopt.max_iterations = cfg.max_iterations;
      bopt.grad_tol = cfg.grad_tol;
      bopt.wolfe_c1 = cfg.wolfe_c1;
      bopt.wolfe_c2 = cfg.wolfe_c2;
      bopt.record_trace = cfg.record_trace;
      const auto f = [&](const ParameterVector& th) { return evaluate_objective(obj, spec, th); };
      const auto g = [&](const ParameterVector& th) {
        return gradient(obj, spec, th, cfg.gradient_mode, cfg.fd_step);
      };
      BfgsResult br = minimize_bfgs(f, g, std::move(theta0), bopt);
      out.final_value = br.value;
      out.iterations = br.iterations;
      out.status = br.status;
      out.parameters = std::move(br.x);
      out.trace = std::move(br.trace);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  };

  const int workers = std::max(1, std::min(cfg.threads, total_runs));
  if (workers == 1) {
    for (int r = 0; r < total_runs; ++r) run_one(r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w]() {
        for (int r = w; r < total_runs; r += workers) run_one(r);
      });
    for (auto& th : pool) th.join();
  }

  // deterministic reduce ordered by restart index
  int n_ok = 0;
  double sum = 0.0, sumsq = 0.0;
  for (const auto& out : result.per_restart) {
    if (!out.error.empty()) continue;
    ++n_ok;
    sum += out.final_value;
    sumsq += out.final_value * out.final_value;
  }
  if (n_ok == 0) throw std::runtime_error("run_vqe: every restart failed");
  result.mean_final = sum / n_ok;
  result.std_final =
      n_ok > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / n_ok) / (n_ok - 1))) : 0.0;
  const int best = result.best_restart();
  result.best_energy = result.per_restart[static_cast<std::size_t>(best)].final_value;
  result.best_parameters = result.per_restart[static_cast<std::size_t>(best)].parameters;

  if (oracle != nullptr) {
    const StateVector psi = prepare_state(spec, result.best_parameters);
    const auto basis = ground_space_projector(*oracle, oracle->degeneracy_tol);
    result.fidelity = state_fidelity(psi, basis);
    if (obj.kind == VqeObjective::Kind::energy) {
      try {
        result.delta = delta_metric(result.best_energy, *oracle);
      } catch (const std::domain_error&) {
        // fully degenerate spectrum: delta undefined, left NaN
      }
    }
    result.has_metrics = true;
  }

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

} // namespace chainvqe
