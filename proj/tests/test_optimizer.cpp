#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "chainvqe/bfgs.hpp"
#include "chainvqe/vqe.hpp"
#include "oracles.hpp"

using namespace chainvqe;
using Catch::Matchers::WithinAbs;

TEST_CASE("minimize_bfgs on a quadratic bowl") {
  std::vector<double> center{1.0, -2.0, 0.3, 4.0, -0.7, 2.2, -1.1, 0.05};
  const auto f = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - center[i]) * (x[i] - center[i]);
    return s;
  };
  const auto g = [&](const std::vector<double>& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2 * (x[i] - center[i]);
    return out;
  };
  std::vector<double> x0(8, 0.0);
  const auto r = minimize_bfgs(f, g, x0, {});
  CHECK(r.status == BfgsStatus::converged);
  CHECK(r.iterations < 50);
  for (std::size_t i = 0; i < 8; ++i) CHECK_THAT(r.x[i], WithinAbs(center[i], 1e-6));
}

TEST_CASE("minimize_bfgs on Rosenbrock from (-1.2, 1)") {
  const auto f = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto g = [](const std::vector<double>& x) {
    return std::vector<double>{
        -400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]),
        200 * (x[1] - x[0] * x[0])};
  };
  const auto r = minimize_bfgs(f, g, {-1.2, 1.0}, {});
  CHECK(r.value < 1e-8);
  CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-4));
  CHECK_THAT(r.x[1], WithinAbs(1.0, 1e-4));

  SECTION("trace is monotone non-increasing and ends at or below f(x0)") {
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& [it, fv] : r.trace) {
      CHECK(fv <= prev + 1e-12);
      prev = fv;
    }
    CHECK(r.value <= f({-1.2, 1.0}) + 1e-12);
  }
}

TEST_CASE("minimize_bfgs rejects bad Wolfe constants") {
  const auto f = [](const std::vector<double>& x) { return x[0] * x[0]; };
  const auto g = [](const std::vector<double>& x) { return std::vector<double>{2 * x[0]}; };
  BfgsOptions bad;
  bad.wolfe_c1 = 0.95;
  bad.wolfe_c2 = 0.9;
  CHECK_THROWS_AS(minimize_bfgs(f, g, {1.0}, bad), std::invalid_argument);
}

TEST_CASE("evaluate_objective") {
  const auto h = build_chain_hamiltonian({2, 1.0, 0.0, 0.0, Boundary::open});
  const AnsatzSpec spec{2, 1, EntanglerTopology::ring};

  SECTION("energy at zero angles is the |00> expectation") {
    const auto obj = VqeObjective::energy(h);
    CHECK_THAT(evaluate_objective(obj, spec, ParameterVector(8, 0.0)), WithinAbs(-0.25, 1e-12));
  }
  SECTION("negative fidelity against |00> at zero angles is -1") {
    const auto obj = VqeObjective::negative_fidelity({new_zero_state(2)});
    CHECK_THAT(evaluate_objective(obj, spec, ParameterVector(8, 0.0)), WithinAbs(-1.0, 1e-12));
  }
  SECTION("random angles stay inside the exact spectral range") {
    const auto h5 = build_chain_hamiltonian({5, 1.0, 0.63, 3.36e-3, Boundary::open});
    const AnsatzSpec spec5{5, 2, EntanglerTopology::ring};
    const auto s = lowest_eigenpairs_dense(h5, 1);
    const double emax = s.eigenvalues.back();
    const auto obj = VqeObjective::energy(h5);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const double e = evaluate_objective(obj, spec5, random_parameters(spec5, seed));
      CHECK(e >= s.e0() - 1e-9);
      CHECK(e <= emax + 1e-9);
    }
  }
}

TEST_CASE("gradient") {
  SECTION("vanishes at the fidelity optimum") {
    const AnsatzSpec spec{3, 1, EntanglerTopology::ring};
    const auto obj = VqeObjective::negative_fidelity({new_zero_state(3)});
    const auto g = gradient(obj, spec, ParameterVector(12, 0.0), GradientMode::adjoint_analytic);
    for (double v : g) CHECK_THAT(v, WithinAbs(0.0, 1e-6));
    const auto gfd =
        gradient(obj, spec, ParameterVector(12, 0.0), GradientMode::central_difference);
    for (double v : gfd) CHECK_THAT(v, WithinAbs(0.0, 1e-6));
  }

  SECTION("matches the derivative of the single-angle trigonometric fit") {
    const AnsatzSpec spec{2, 1, EntanglerTopology::ring};
    const auto h = build_chain_hamiltonian({2, 1.0, 0.63, 0.1, Boundary::open});
    const auto obj = VqeObjective::energy(h);
    const auto base = random_parameters(spec, 3);

    const std::size_t which = 1;
    std::vector<double> thetas, values;
    for (int s = 0; s < 16; ++s) {
      const double th = 2 * std::numbers::pi * s / 16.0;
      auto t = base;
      t[which] = th;
      thetas.push_back(th);
      values.push_back(evaluate_objective(obj, spec, t));
    }
    const auto fit = oracles::fit_two_harmonics(thetas, values);
    REQUIRE(fit.max_residual < 1e-8);

    const auto g = gradient(obj, spec, base, GradientMode::adjoint_analytic);
    CHECK_THAT(g[which], WithinAbs(fit.derivative(base[which]), 1e-6));
  }

  SECTION("central difference and adjoint agree on random inputs") {
    const AnsatzSpec spec{4, 2, EntanglerTopology::ring};
    const auto h = build_chain_hamiltonian({4, 1.0, 0.63, 3.36e-3, Boundary::open});
    const auto obj = VqeObjective::energy(h);
    for (std::uint64_t seed : {10ull, 11ull}) {
      const auto theta = random_parameters(spec, seed);
      const auto ga = gradient(obj, spec, theta, GradientMode::adjoint_analytic);
      const auto gc = gradient(obj, spec, theta, GradientMode::central_difference);
      for (std::size_t k = 0; k < ga.size(); ++k) CHECK_THAT(ga[k], WithinAbs(gc[k], 1e-5));
    }
    // fidelity-mode cross-check as well
    const auto s = lowest_eigenpairs_dense(h, 1);
    const auto objf = VqeObjective::negative_fidelity(ground_space_projector(s, s.degeneracy_tol));
    const auto theta = random_parameters(spec, 12);
    const auto ga = gradient(objf, spec, theta, GradientMode::adjoint_analytic);
    const auto gc = gradient(objf, spec, theta, GradientMode::central_difference);
    for (std::size_t k = 0; k < ga.size(); ++k) CHECK_THAT(ga[k], WithinAbs(gc[k], 1e-5));
  }
}

TEST_CASE("run_vqe on the N=2 Heisenberg chain reaches the triplet energy") {
  const auto h = build_chain_hamiltonian({2, 1.0, 0.0, 0.0, Boundary::open});
  const auto s = lowest_eigenpairs_dense(h, 4);
  const AnsatzSpec spec{2, 1, EntanglerTopology::ring};
  OptimizerConfig cfg;
  cfg.restarts = 3;
  cfg.base_seed = 7;
  cfg.gradient_mode = GradientMode::adjoint_analytic;
  cfg.max_iterations = 2000;
  const auto r = run_vqe(VqeObjective::energy(h), spec, cfg, &s);
  CHECK_THAT(r.best_energy, WithinAbs(-0.25, 1e-6));
  CHECK(r.best_energy >= s.e0() - 1e-9);
  CHECK(r.has_metrics);
  CHECK(r.fidelity >= 0.0);
  CHECK(r.fidelity <= 1.0 + 1e-10);
}

TEST_CASE("run_vqe determinism and restart bookkeeping") {
  const auto h = build_chain_hamiltonian({3, 1.0, 0.63, 3.36e-3, Boundary::open});
  const AnsatzSpec spec{3, 1, EntanglerTopology::ring};
  OptimizerConfig cfg;
  cfg.restarts = 3;
  cfg.base_seed = 42;
  cfg.gradient_mode = GradientMode::adjoint_analytic;
  cfg.max_iterations = 300;
  cfg.record_trace = true;

  const auto a = run_vqe(VqeObjective::energy(h), spec, cfg);
  const auto b = run_vqe(VqeObjective::energy(h), spec, cfg);
  REQUIRE(a.per_restart.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(a.per_restart[r].final_value == b.per_restart[r].final_value);
    CHECK(a.per_restart[r].trace == b.per_restart[r].trace);
  }
  CHECK(a.best_energy == b.best_energy);

  SECTION("parallel execution reproduces the sequential result") {
    auto cfg2 = cfg;
    cfg2.threads = 2;
    const auto c = run_vqe(VqeObjective::energy(h), spec, cfg2);
    for (std::size_t r = 0; r < 3; ++r)
      CHECK(a.per_restart[r].final_value == c.per_restart[r].final_value);
  }

  SECTION("best energy equals the minimum over single-restart runs") {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 3; ++r) {
      auto one = cfg;
      one.restarts = 1;
      one.base_seed = cfg.base_seed + static_cast<std::uint64_t>(r);
      best = std::min(best, run_vqe(VqeObjective::energy(h), spec, one).best_energy);
    }
    CHECK(a.best_energy == best);
  }
}

TEST_CASE("warm starts make depth growth monotone") {
  const auto h = build_chain_hamiltonian({3, 1.0, 0.63, 3.36e-3, Boundary::open});
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.base_seed = 11;
  cfg.gradient_mode = GradientMode::adjoint_analytic;
  cfg.max_iterations = 500;

  double prev = std::numeric_limits<double>::infinity();
  ParameterVector prev_best;
  for (int layers = 1; layers <= 3; ++layers) {
    const AnsatzSpec spec{3, layers, EntanglerTopology::ring};
    auto c = cfg;
    if (!prev_best.empty()) {
      ParameterVector padded = prev_best;
      padded.resize(static_cast<std::size_t>(param_count(spec)), 0.0);
      c.warm_starts.push_back(std::move(padded));
    }
    const auto r = run_vqe(VqeObjective::energy(h), spec, c);
    CHECK(r.best_energy <= prev + 1e-9);
    prev = r.best_energy;
    prev_best = r.best_parameters;
  }
}
