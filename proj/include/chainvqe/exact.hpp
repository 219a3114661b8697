#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "chainvqe/ansatz.hpp"
#include "chainvqe/pauli.hpp"

namespace chainvqe {

/// Lowest eigenpairs of a chain Hamiltonian. E1 under degeneracy is the first
/// eigenvalue strictly above the ground cluster (relative tolerance
/// 1e-8 max(1, |E0|)).
struct Spectrum {
  std::vector<double> eigenvalues;        // ascending; all computed values
  std::vector<StateVector> eigenvectors;  // for the lowest eigenvalues, same order
  std::vector<double> residuals;          // ||Hv - lambda v||_2 per returned vector
  int ground_degeneracy = 0;
  double degeneracy_tol = 0.0;

  double e0() const { return eigenvalues.at(0); }

  /// First eigenvalue strictly above the E0 cluster.
  double e1() const {
    for (double ev : eigenvalues)
      if (ev > e0() + degeneracy_tol) return ev;
    throw std::runtime_error("Spectrum: no level above the ground cluster was resolved");
  }
};

namespace detail {

inline double degeneracy_tolerance(double e0) { return 1e-8 * std::max(1.0, std::abs(e0)); }

inline int count_cluster(const std::vector<double>& evs, double tol) {
  int d = 0;
  for (double ev : evs)
    if (ev - evs[0] <= tol) ++d;
  return d;
}

inline StateVector column_to_state(const Eigen::MatrixXcd& vecs, Eigen::Index col, int n_qubits) {
  StateVector v(n_qubits);
  for (std::size_t k = 0; k < v.dim(); ++k)
    v.amplitudes[k] = vecs(static_cast<Eigen::Index>(k), col);
  return v;
}

inline double residual_norm(const Hamiltonian& h, const StateVector& v, double lambda) {
  StateVector hv = apply_hamiltonian(h, v);
  double s = 0.0;
  for (std::size_t k = 0; k < v.dim(); ++k)
    s += std::norm(hv.amplitudes[k] - lambda * v.amplitudes[k]);
  return std::sqrt(s);
}

} // namespace detail

/// Full Hermitian eigendecomposition of to_dense; n_qubits <= 12.
inline Spectrum lowest_eigenpairs_dense(const Hamiltonian& h, int m) {
  if (m < 1) throw std::invalid_argument("lowest_eigenpairs_dense: m >= 1 required");
  if (h.n_qubits > 12)
    throw std::invalid_argument("lowest_eigenpairs_dense: n_qubits > 12 (memory guard)");
  const Eigen::MatrixXcd dense = to_dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("lowest_eigenpairs_dense: eigensolver failed");

  Spectrum s;
  const auto& evs = solver.eigenvalues();
  s.eigenvalues.assign(evs.data(), evs.data() + evs.size());
  s.degeneracy_tol = detail::degeneracy_tolerance(s.eigenvalues[0]);
  s.ground_degeneracy = detail::count_cluster(s.eigenvalues, s.degeneracy_tol);

  const int keep = std::min<int>(static_cast<int>(s.eigenvalues.size()),
                                 std::max(m, s.ground_degeneracy + 1));
  for (int k = 0; k < keep; ++k) {
    s.eigenvectors.push_back(detail::column_to_state(solver.eigenvectors(), k, h.n_qubits));
    s.residuals.push_back(detail::residual_norm(h, s.eigenvectors.back(), s.eigenvalues[k]));
  }
  return s;
}

struct LanczosOptions {
  int max_krylov = 250;
  int max_cycles = 400;
  double residual_tol = 1e-10;
  std::uint64_t seed = 12345;
};

namespace detail {

using Vec = std::vector<complex>;

inline double dot_re(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += (std::conj(a[k]) * b[k]).real();
  return s;
}

inline complex dot_c(const Vec& a, const Vec& b) {
  complex s{0, 0};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

inline double nrm(const Vec& a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return std::sqrt(s);
}

inline void axpy(complex alpha, const Vec& x, Vec& y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

inline void scale(Vec& x, double alpha) {
  for (auto& v : x) v *= alpha;
}

// two-pass classical Gram-Schmidt against a set of vectors
inline void orthogonalize(Vec& v, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) axpy(-dot_c(b, v), b, v);
}

inline Vec random_unit(std::size_t dim, std::uint64_t seed) {
  chainvqe::detail::Splitmix64 rng(seed);
  Vec v(dim);
  for (auto& x : v) x = complex{rng.uniform01() - 0.5, rng.uniform01() - 0.5};
  scale(v, 1.0 / nrm(v));
  return v;
}

} // namespace detail

/// Matrix-free Lanczos with full reorthogonalization; converged eigenpairs are
/// locked and deflated, and fresh random restarts resolve degenerate clusters.
/// n_qubits <= 16.
inline Spectrum lowest_eigenpairs_lanczos(const Hamiltonian& h, int m,
                                          const LanczosOptions& opts = {}) {
  if (m < 1) throw std::invalid_argument("lowest_eigenpairs_lanczos: m >= 1 required");
  if (h.n_qubits > 16)
    throw std::invalid_argument("lowest_eigenpairs_lanczos: n_qubits > 16 (memory guard)");
  using detail::Vec;
  const std::size_t dim = std::size_t{1} << h.n_qubits;

  std::vector<Vec> locked; // converged eigenvectors (true eigenpairs, any order)
  std::vector<double> locked_vals;
  std::vector<double> locked_res;

  const auto apply_h = [&](const Vec& in) {
    StateVector psi(h.n_qubits);
    psi.amplitudes = in;
    return apply_hamiltonian(h, psi).amplitudes;
  };

  // A single Krylov window sees each degenerate eigenvalue once, so finding a
  // value above E0 inside one window proves nothing about the cluster. The
  // cluster is exhausted only when a *fresh* deflated random start converges
  // to something strictly above E0 + tol; restarts keep going until that
  // confirmation (or the space runs out).
  bool cluster_confirmed = false;
  const auto done = [&]() {
    if (locked.size() == dim) return true;
    return cluster_confirmed && static_cast<int>(locked.size()) >= m;
  };

  std::uint64_t restart_salt = opts.seed;
  int cycles = 0;

  while (!done()) {
    Vec v = detail::random_unit(dim, restart_salt++);
    detail::orthogonalize(v, locked);
    const double vn = detail::nrm(v);
    if (vn < 1e-10) continue; // freak collapse, draw again
    detail::scale(v, 1.0 / vn);

    // drive this fresh start until its lowest Ritz pair converges; that pair
    // is the lowest *remaining* eigenvalue of the deflated operator
    double fresh_lowest = std::numeric_limits<double>::quiet_NaN();
    while (std::isnan(fresh_lowest)) {
      if (locked.size() == dim) break; // space exhausted under deflation
      if (++cycles > opts.max_cycles)
        throw std::runtime_error("lowest_eigenpairs_lanczos: no convergence after " +
                                 std::to_string(opts.max_cycles) + " cycles");

      std::vector<Vec> basis;
      std::vector<double> alpha, beta; // tridiagonal T
      basis.push_back(v);
      const int kmax = static_cast<int>(std::min<std::size_t>(
          static_cast<std::size_t>(opts.max_krylov), dim - locked.size()));
      for (int j = 0; j < kmax; ++j) {
        Vec w = apply_h(basis.back());
        const double a = detail::dot_re(basis.back(), w);
        alpha.push_back(a);
        detail::orthogonalize(w, locked);
        detail::orthogonalize(w, basis);
        const double b = detail::nrm(w);
        if (b < 1e-13 || j + 1 == kmax) break; // invariant subspace or window full
        beta.push_back(b);
        detail::scale(w, 1.0 / b);
        basis.push_back(std::move(w));
      }

      const int k = static_cast<int>(alpha.size());
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
      for (int i = 0; i < k; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ts(t);

      // lock converged Ritz pairs in ascending order, stopping at the first
      // unconverged one
      Vec next_seed;
      for (int r = 0; r < k; ++r) {
        Vec ritz(dim, complex{0, 0});
        for (int j = 0; j < k; ++j)
          detail::axpy(complex{ts.eigenvectors()(j, r), 0.0},
                       basis[static_cast<std::size_t>(j)], ritz);
        detail::orthogonalize(ritz, locked);
        const double n = detail::nrm(ritz);
        if (n < 1e-8) continue; // collapsed onto locked space
        detail::scale(ritz, 1.0 / n);
        StateVector rv(h.n_qubits);
        rv.amplitudes = ritz;
        const double lambda = detail::dot_re(ritz, apply_h(ritz));
        const double res = detail::residual_norm(h, rv, lambda);
        if (res < opts.residual_tol * std::max(1.0, std::abs(lambda))) {
          locked.push_back(std::move(ritz));
          locked_vals.push_back(lambda);
          locked_res.push_back(res);
          if (std::isnan(fresh_lowest)) fresh_lowest = lambda;
        } else {
          next_seed = std::move(ritz); // steer towards the lowest unconverged pair
          break;
        }
      }

      if (std::isnan(fresh_lowest)) {
        if (!next_seed.empty()) {
          detail::orthogonalize(next_seed, locked);
          const double n = detail::nrm(next_seed);
          if (n > 1e-10) {
            v = std::move(next_seed);
            detail::scale(v, 1.0 / n);
            continue;
          }
        }
        v = detail::random_unit(dim, restart_salt++);
        detail::orthogonalize(v, locked);
        detail::scale(v, 1.0 / detail::nrm(v));
      }
    }

    if (locked_vals.empty()) continue;
    const double e0 = *std::min_element(locked_vals.begin(), locked_vals.end());
    if (!std::isnan(fresh_lowest) && fresh_lowest > e0 + detail::degeneracy_tolerance(e0))
      cluster_confirmed = true;
  }

  // ascending order
  std::vector<std::size_t> order(locked.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return locked_vals[a] < locked_vals[b]; });

  Spectrum s;
  for (std::size_t i : order) {
    s.eigenvalues.push_back(locked_vals[i]);
    StateVector sv(h.n_qubits);
    sv.amplitudes = std::move(locked[i]);
    s.eigenvectors.push_back(std::move(sv));
    s.residuals.push_back(locked_res[i]);
  }
  s.degeneracy_tol = detail::degeneracy_tolerance(s.eigenvalues[0]);
  s.ground_degeneracy = detail::count_cluster(s.eigenvalues, s.degeneracy_tol);
  return s;
}

/// Ground-truth oracle: dense path up to 12 qubits, Lanczos beyond.
inline Spectrum lowest_eigenpairs(const Hamiltonian& h, int m) {
  if (h.n_qubits <= 12) return lowest_eigenpairs_dense(h, m);
  return lowest_eigenpairs_lanczos(h, m);
}

/// Orthonormal basis of the E0 eigenspace under tolerance tol.
inline std::vector<StateVector> ground_space_projector(const Spectrum& spec, double tol) {
  if (spec.eigenvalues.empty()) throw std::invalid_argument("ground_space_projector: empty spectrum");
  const double e0 = spec.e0();
  int d = 0;
  for (double ev : spec.eigenvalues)
    if (ev - e0 <= tol) ++d;
  if (d >= static_cast<int>(spec.eigenvalues.size()))
    throw std::invalid_argument(
        "ground_space_projector: spectrum does not resolve any level above E0 + tol");
  // the strict cluster under the spectrum's own tolerance must not be merged with E1
  if (spec.e1() - e0 < tol)
    throw std::invalid_argument("ground_space_projector: tol = " + std::to_string(tol) +
                                " merges E0 and E1 (gap " + std::to_string(spec.e1() - e0) + ")");
  if (d > static_cast<int>(spec.eigenvectors.size()))
    throw std::invalid_argument("ground_space_projector: eigenvectors missing for the cluster");

  std::vector<StateVector> basis;
  for (int i = 0; i < d; ++i) {
    StateVector v = spec.eigenvectors[static_cast<std::size_t>(i)];
    for (const auto& b : basis) { // safety re-orthonormalization
      const complex ov = inner_product(b, v);
      for (std::size_t k = 0; k < v.dim(); ++k) v.amplitudes[k] -= ov * b.amplitudes[k];
    }
    const double n = v.norm();
    if (n < 1e-8)
      throw std::runtime_error("ground_space_projector: degenerate basis collapse");
    for (auto& a : v.amplitudes) a /= n;
    basis.push_back(std::move(v));
  }
  return basis;
}

/// delta = (E_VQE - E0) / (E1 - E0); below 1 means the variational energy beats
/// the first excited level.
inline double delta_metric(double e_vqe, const Spectrum& spec) {
  const double e0 = spec.e0();
  double e1 = 0.0;
  try {
    e1 = spec.e1();
  } catch (const std::runtime_error&) {
    throw std::domain_error("delta_metric: spectrum is fully degenerate within tolerance");
  }
  return (e_vqe - e0) / (e1 - e0);
}

} // namespace chainvqe
