// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
//   acceptance [--profile full|ci] [--out dir]
//
// The full profile runs the complete experiment protocol (5 restarts, 50 000
// BFGS iteration cap). The ci profile reduces criterion 4's sweep to
// 2 restarts / 5 000 iterations and asserts only its relaxed clause
// (delta < 1); the other optimizer-heavy criteria are skipped there.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "chainvqe/experiment.hpp"

using namespace chainvqe;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    } else {
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

struct Recorded {
  double energy;
  double e0;
};
std::vector<Recorded> g_recorded_energies; // for the variational-bound property

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

OptimizerConfig protocol(bool ci, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.max_iterations = ci ? 5000 : 50000;
  cfg.restarts = ci ? 2 : 5;
  cfg.base_seed = seed;
  cfg.gradient_mode = GradientMode::adjoint_analytic;
  cfg.threads = 2;
  return cfg;
}

VqeResult run_case(double dmi, double field, int layers, bool ci, std::uint64_t seed,
                   Spectrum& spectrum_out) {
  const ChainParams chain{10, 1.0, dmi, field, Boundary::open};
  const Hamiltonian h = build_chain_hamiltonian(chain);
  spectrum_out = lowest_eigenpairs(h, 2);
  const AnsatzSpec spec{10, layers, EntanglerTopology::ring};
  const VqeResult r = run_vqe(VqeObjective::energy(h), spec, protocol(ci, seed), &spectrum_out);
  for (const auto& o : r.per_restart)
    if (o.error.empty()) g_recorded_energies.push_back({o.final_value, spectrum_out.e0()});
  return r;
}

// 1. soliton analytics: kappa and period against the closed-form targets
Criterion criterion_soliton() {
  Criterion c{1, "soliton analytics"};
  const auto t0 = std::chrono::steady_clock::now();
  const auto sol = soliton_solution({1.0, 0.63, 3.36e-3, 1.0});
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!sol) {
    c.require(false, "no soliton solution found");
    return c;
  }
  c.require(std::abs(sol->kappa - 0.256) <= 0.002, "kappa=" + fmt(sol->kappa, 6) + " in 0.256+-0.002");
  c.require(std::abs(sol->period - 10.0) <= 0.2, "period=" + fmt(sol->period, 6) + " in 10.0+-0.2");
  c.require(dt < 1.0, "runtime " + fmt(dt, 3) + "s < 1s");
  return c;
}

// 2. exact oracle: 11-fold degeneracy and dense/Lanczos agreement
Criterion criterion_exact_oracle() {
  Criterion c{2, "exact oracle"};
  const auto t0 = std::chrono::steady_clock::now();

  const auto h10 = build_chain_hamiltonian({10, 1.0, 0.0, 0.0, Boundary::open});
  const auto dense10 = lowest_eigenpairs_dense(h10, 2);
  c.require(dense10.ground_degeneracy == 11,
            "dense N=10 ferromagnet degeneracy=" + std::to_string(dense10.ground_degeneracy));
  const auto lz10 = lowest_eigenpairs_lanczos(h10, 2);
  c.require(lz10.ground_degeneracy == 11,
            "lanczos degeneracy=" + std::to_string(lz10.ground_degeneracy));
  c.require(std::abs(lz10.e0() - dense10.e0()) < 1e-8 && std::abs(lz10.e1() - dense10.e1()) < 1e-8,
            "N=10 e0/e1 agreement to 1e-8");

  double worst = 0.0;
  for (int n : {4, 6, 8}) {
    for (auto [d, b] : std::vector<std::pair<double, double>>{
             {0.0, 0.0}, {0.63, 3.36e-3}, {1.0, 0.0}, {5.0, 5.0}, {0.0, 1.0}}) {
      const auto h = build_chain_hamiltonian({n, 1.0, d, b, Boundary::open});
      const auto sd = lowest_eigenpairs_dense(h, 3);
      const auto sl = lowest_eigenpairs_lanczos(h, 3);
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(sl.eigenvalues[static_cast<std::size_t>(k)] -
                                         sd.eigenvalues[static_cast<std::size_t>(k)]));
    }
  }
  c.require(worst < 1e-8, "grid dense-vs-lanczos max gap " + fmt(worst, 3));
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(dt < 30.0, "runtime " + fmt(dt, 3) + "s < 30s");
  return c;
}

// 3. trivial-regime VQE at a single layer
Criterion criterion_trivial_vqe(bool ci) {
  Criterion c{3, "trivial-regime VQE"};
  const auto t0 = std::chrono::steady_clock::now();
  Spectrum s1, s2;
  const auto r1 = run_case(0.0, 0.0, 1, ci, 310, s1);
  c.require(r1.fidelity >= 0.999, "D=B=0 fidelity=" + fmt(r1.fidelity, 6));
  const auto r2 = run_case(0.0, 1.0, 1, ci, 320, s2);
  c.require(r2.fidelity >= 0.999, "D=0,B=J fidelity=" + fmt(r2.fidelity, 6));
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(dt < 300.0, "runtime " + fmt(dt, 3) + "s < 5min");
  return c;
}

// 4. soliton-regime sweep, layers 1..6
Criterion criterion_sweep(bool ci) {
  Criterion c{4, ci ? "soliton sweep (ci profile, delta < 1)" : "soliton sweep"};
  Spectrum spectrum;
  double best_delta = std::numeric_limits<double>::infinity();
  double best6 = 0.0, fid6 = 0.0, e0 = 0.0;
  for (int layers = 1; layers <= 6; ++layers) {
    const auto r = run_case(0.63, 3.36e-3, layers, ci, 400 + 10u * static_cast<unsigned>(layers),
                            spectrum);
    best_delta = std::min(best_delta, r.delta);
    if (layers == 6) {
      best6 = r.best_energy;
      fid6 = r.fidelity;
      e0 = spectrum.e0();
    }
  }
  if (ci) {
    c.require(best_delta < 1.0, "best delta over sweep = " + fmt(best_delta, 4) + " < 1");
    return c;
  }
  const double relerr = std::abs(best6 - e0) / std::abs(e0);
  c.require(relerr <= 0.015, "6-layer best energy off E0 by " + fmt(100 * relerr, 3) + "% <= 1.5%");
  c.require(best_delta >= 0.5 && best_delta <= 0.9,
            "best delta over sweep = " + fmt(best_delta, 4) + " in [0.5, 0.9]");
  c.require(fid6 <= 0.8, "6-layer overlap = " + fmt(fid6, 4) + " <= 0.8");
  return c;
}

// 5. nine-layer fidelity maximization vs energy minimization
Criterion criterion_nine_layers(bool ci) {
  Criterion c{5, "nine-layer fidelity maximization"};
  const ChainParams chain{10, 1.0, 0.63, 3.36e-3, Boundary::open};
  const Hamiltonian h = build_chain_hamiltonian(chain);
  const Spectrum spectrum = lowest_eigenpairs(h, 2);
  const AnsatzSpec spec{10, 9, EntanglerTopology::ring};

  const auto basis = ground_space_projector(spectrum, spectrum.degeneracy_tol);
  const VqeResult rf =
      run_vqe(VqeObjective::negative_fidelity(basis), spec, protocol(ci, 510), &spectrum);
  c.require(rf.fidelity >= 0.97, "fidelity-max achieved " + fmt(rf.fidelity, 6) + " >= 0.97");

  Spectrum s2;
  const auto re = run_case(0.63, 3.36e-3, 9, ci, 520, s2);
  c.require(re.fidelity >= 0.55 && re.fidelity <= 0.75,
            "9-layer energy-mode fidelity = " + fmt(re.fidelity, 4) + " in [0.55, 0.75]");
  return c;
}

// 6. supplemental regimes at eight layers
Criterion criterion_supplemental(bool ci) {
  Criterion c{6, "supplemental regimes at 8 layers"};
  Spectrum s3;
  const auto r3 = run_case(1.0, 0.0, 8, ci, 610, s3);
  c.require(std::abs(r3.fidelity - 0.70) <= 0.10,
            "D=J,B=0 fidelity = " + fmt(r3.fidelity, 4) + " in 0.70+-0.10");
  c.require(std::abs(r3.delta - 0.40) <= 0.15,
            "D=J,B=0 delta = " + fmt(r3.delta, 4) + " in 0.40+-0.15");
  Spectrum s4;
  const auto r4 = run_case(5.0, 5.0, 8, ci, 620, s4);
  c.require(r4.fidelity >= 0.99, "D=B=5J fidelity = " + fmt(r4.fidelity, 4) + " >= 0.99");
  c.require(r4.delta <= 0.10, "D=B=5J delta = " + fmt(r4.delta, 4) + " <= 0.10");
  return c;
}

// 7. concurrence anchors, closed-form oracle, and the exact map's structure
Criterion criterion_concurrence() {
  Criterion c{7, "concurrence"};
  StateVector bell(2);
  bell.amplitudes[0] = 1.0 / std::numbers::sqrt2;
  bell.amplitudes[3] = 1.0 / std::numbers::sqrt2;
  const double cb = concurrence(reduced_density_matrix(bell, 0, 1));
  c.require(std::abs(cb - 1.0) <= 1e-10, "Bell C = " + fmt(cb, 12));

  std::mt19937_64 rng(777);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    StateVector psi(2);
    double norm = 0.0;
    for (auto& a : psi.amplitudes) {
      a = complex{gauss(rng), gauss(rng)};
      norm += std::norm(a);
    }
    for (auto& a : psi.amplitudes) a /= std::sqrt(norm);
    const double closed = 2.0 * std::abs(psi.amplitudes[0] * psi.amplitudes[3] -
                                         psi.amplitudes[1] * psi.amplitudes[2]);
    const double got = concurrence(reduced_density_matrix(psi, 0, 1));
    worst = std::max(worst, std::abs(got - closed));
  }
  c.require(worst < 1e-10, "pure-state oracle max gap " + fmt(worst, 3) + " over 1000 states");

  const auto h = build_chain_hamiltonian({10, 1.0, 0.63, 3.36e-3, Boundary::open});
  const auto spectrum = lowest_eigenpairs(h, 1);
  const auto cm = concurrence_matrix(spectrum.eigenvectors[0]);
  double min_nn = 1.0, max_far = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      if (j == i + 1) min_nn = std::min(min_nn, cm(i, j));
      if (j - i >= 3) max_far = std::max(max_far, cm(i, j));
    }
  c.require(min_nn > max_far, "exact map: min NN " + fmt(min_nn, 4) + " > max |i-j|>=3 " +
                                  fmt(max_far, 4));
  return c;
}

// 8. textures: negligible z components, and the classical-vs-continuum energy
Criterion criterion_texture() {
  Criterion c{8, "texture"};
  const ChainParams chain{10, 1.0, 0.63, 3.36e-3, Boundary::open};
  const auto h = build_chain_hamiltonian(chain);
  const auto spectrum = lowest_eigenpairs(h, 1);
  double max_mz = 0.0;
  for (const auto& r : magnetization_texture(spectrum.eigenvectors[0]))
    max_mz = std::max(max_mz, std::abs(r.mz));
  c.require(max_mz < 0.05, "exact ground state max |<sigma_z>| = " + fmt(max_mz, 3));

  // classical energy of the analytic texture against the continuum prediction:
  // epsilon is the energy density relative to the field-polarized chain, so the
  // lattice total is compared with E_polarized + epsilon * length
  const auto sol = soliton_solution({1.0, 0.63, 3.36e-3, 1.0});
  if (!sol) {
    c.require(false, "no soliton solution");
    return c;
  }
  const auto tex = analytic_texture(*sol, 10);
  const double e_lattice = classical_energy(tex, chain);
  std::vector<TextureRow> polarized;
  for (int j = 0; j < 10; ++j) polarized.push_back({j, 1.0, 0.0, 0.0});
  const double e_ref = classical_energy(polarized, chain);
  const double length = 9.0; // (N-1) bonds at a = 1
  const double e_pred = e_ref + sol->energy_per_period * length;
  const double rel = std::abs(e_lattice - e_pred) / std::abs(e_pred);
  c.require(rel <= 0.05, "lattice " + fmt(e_lattice, 6) + " vs continuum " + fmt(e_pred, 6) +
                             " off by " + fmt(100 * rel, 3) + "% <= 5%");
  return c;
}

// 9. always-on property suites
Criterion criterion_properties() {
  Criterion c{9, "property suites"};

  { // Pauli expectation vs dense oracle, N <= 8
    double worst = 0.0;
    for (int n : {2, 4, 6, 8}) {
      const auto h = build_chain_hamiltonian({n, 1.0, 0.63, 3.36e-3, Boundary::open});
      const Eigen::MatrixXcd dense = to_dense(h);
      std::mt19937_64 rng(static_cast<std::uint64_t>(n));
      std::normal_distribution<double> gauss(0.0, 1.0);
      StateVector psi(n);
      double norm = 0.0;
      for (auto& a : psi.amplitudes) {
        a = complex{gauss(rng), gauss(rng)};
        norm += std::norm(a);
      }
      for (auto& a : psi.amplitudes) a /= std::sqrt(norm);
      Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.dim()));
      for (std::size_t k = 0; k < psi.dim(); ++k)
        v(static_cast<Eigen::Index>(k)) = psi.amplitudes[k];
      const double want = (v.adjoint() * dense * v)(0, 0).real();
      worst = std::max(worst, std::abs(expectation(h, psi) - want));
    }
    c.require(worst < 1e-10, "expectation vs dense max gap " + fmt(worst, 3));
  }

  { // gradient cross-mode agreement
    const AnsatzSpec spec{4, 2, EntanglerTopology::ring};
    const auto h = build_chain_hamiltonian({4, 1.0, 0.63, 3.36e-3, Boundary::open});
    const auto obj = VqeObjective::energy(h);
    double worst = 0.0;
    for (std::uint64_t seed : {91ull, 92ull}) {
      const auto theta = random_parameters(spec, seed);
      const auto ga = gradient(obj, spec, theta, GradientMode::adjoint_analytic);
      const auto gc = gradient(obj, spec, theta, GradientMode::central_difference);
      for (std::size_t k = 0; k < ga.size(); ++k)
        worst = std::max(worst, std::abs(ga[k] - gc[k]));
    }
    c.require(worst < 1e-5, "gradient cross-mode max gap " + fmt(worst, 3));
  }

  { // gate unitarity / inversion / commutation
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector psi(5);
    double norm = 0.0;
    for (auto& a : psi.amplitudes) {
      a = complex{gauss(rng), gauss(rng)};
      norm += std::norm(a);
    }
    for (auto& a : psi.amplitudes) a /= std::sqrt(norm);
    const StateVector orig = psi;
    apply_rotation(psi, Axis::Y, 2, 0.83);
    const double unitary_drift = std::abs(psi.norm() - 1.0);
    apply_rotation(psi, Axis::Y, 2, -0.83);
    double inv_drift = 0.0;
    for (std::size_t k = 0; k < psi.dim(); ++k)
      inv_drift = std::max(inv_drift, std::abs(psi.amplitudes[k] - orig.amplitudes[k]));
    StateVector a = orig, b = orig;
    apply_rotation(a, Axis::X, 0, 0.37);
    apply_controlled_ry(a, 2, 3, 1.1);
    apply_controlled_ry(b, 2, 3, 1.1);
    apply_rotation(b, Axis::X, 0, 0.37);
    double comm_drift = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k)
      comm_drift = std::max(comm_drift, std::abs(a.amplitudes[k] - b.amplitudes[k]));
    c.require(unitary_drift < 1e-12 && inv_drift < 1e-12 && comm_drift < 1e-12,
              "gate invariants (drifts " + fmt(unitary_drift, 2) + ", " + fmt(inv_drift, 2) +
                  ", " + fmt(comm_drift, 2) + ")");
  }

  { // Legendre identities
    const double hstep = 4e-6;
    double worst = 0.0;
    for (double k : {0.2, 0.45, 0.7, 0.9}) {
      const double dE = (elliptic_E(k + hstep) - elliptic_E(k - hstep)) / (2 * hstep);
      const double dK = (elliptic_K(k + hstep) - elliptic_K(k - hstep)) / (2 * hstep);
      worst = std::max(worst, std::abs(k * dE - (elliptic_E(k) - elliptic_K(k))));
      worst = std::max(worst,
                       std::abs(k * dK - (elliptic_E(k) / (1 - k * k) - elliptic_K(k))));
    }
    c.require(worst < 1e-8, "Legendre identities max residual " + fmt(worst, 3));
  }

  { // variational bound over every VQE energy recorded in this run
    bool ok = true;
    for (const auto& r : g_recorded_energies) ok &= r.energy >= r.e0 - 1e-9;
    c.require(ok, "variational bound over " + std::to_string(g_recorded_energies.size()) +
                      " recorded energies");
  }

  { // seeded bitwise reproducibility of run outputs
    const auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    };
    const fs::path base = fs::temp_directory_path() / "chainvqe_acceptance_repro";
    fs::remove_all(base);
    ExperimentConfig cfg;
    cfg.chain = {4, 1.0, 0.63, 3.36e-3, Boundary::open};
    cfg.layers = {1};
    cfg.optimizer.restarts = 2;
    cfg.optimizer.max_iterations = 400;
    cfg.optimizer.gradient_mode = GradientMode::adjoint_analytic;
    cfg.optimizer.record_trace = true;
    cfg.seed = 99;
    cfg.outputs.directory = base / "a";
    run_experiment(cfg);
    cfg.outputs.directory = base / "b";
    cfg.optimizer.threads = 2;
    run_experiment(cfg);
    bool same = true;
    for (const char* f : {"sweep.csv", "vqe_L1.json", "trace_L1.csv"})
      same &= slurp(base / "a" / f) == slurp(base / "b" / f);
    fs::remove_all(base);
    c.require(same, "seeded byte-identical artifacts across reruns and thread counts");
  }
  return c;
}

} // namespace

int main(int argc, char** argv) {
  std::string profile = "full";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--profile" && i + 1 < argc) profile = argv[++i];
  }
  if (profile != "full" && profile != "ci") {
    std::cerr << "usage: acceptance [--profile full|ci]\n";
    return 2;
  }
  const bool ci = profile == "ci";

  std::vector<Criterion> results;
  results.push_back(criterion_soliton());
  results.push_back(criterion_exact_oracle());
  if (ci) {
    results.push_back(criterion_sweep(true));
  } else {
    results.push_back(criterion_trivial_vqe(false));
    results.push_back(criterion_sweep(false));
    results.push_back(criterion_nine_layers(false));
    results.push_back(criterion_supplemental(false));
  }
  results.push_back(criterion_concurrence());
  results.push_back(criterion_texture());
  results.push_back(criterion_properties());

  bool all = true;
  for (const auto& c : results) {
    all &= c.pass;
    std::printf("%s criterion %d: %s (%s)\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.detail.c_str());
  }
  return all ? 0 : 1;
}
