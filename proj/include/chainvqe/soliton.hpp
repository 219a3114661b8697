#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainvqe/elliptic.hpp"
#include "chainvqe/pauli.hpp"

namespace chainvqe {

/// Continuum description of the chain: pitch vector k0 = D/(aJ) and field
/// scale m = sqrt(2B/(a^2 J)).
struct ContinuumParams {
  double j_exchange = 1.0;
  double dmi = 0.0;
  double field = 0.0;
  double lattice_const = 1.0;

  double k0() const { return dmi / (lattice_const * j_exchange); }
  double m_field() const {
    return std::sqrt(2.0 * field / (lattice_const * lattice_const * j_exchange));
  }

  void validate() const {
    if (!(j_exchange > 0.0))
      throw std::invalid_argument("ContinuumParams: j_exchange must be positive");
    if (field < 0.0) throw std::invalid_argument("ContinuumParams: field must be >= 0");
    if (!(lattice_const > 0.0))
      throw std::invalid_argument("ContinuumParams: lattice_const must be positive");
  }
};

/// Chiral soliton lattice solution: elliptic modulus kappa, spatial period
/// ell = (2 kappa / m) K(kappa), and the lattice energy density epsilon.
struct SolitonSolution {
  double kappa = 0.0;
  double period = 0.0;
  double energy_per_period = 0.0;
  ContinuumParams params;

  /// Soliton phase profile phi(z) = 2 am(m z / kappa, kappa), unwrapped.
  double phi(double z) const {
    return 2.0 * jacobi_am(params.m_field() * z / kappa, kappa);
  }
};

/// Root of pi kappa k0 = 4 m E(kappa) on (0,1). A soliton lattice exists only
/// when pi k0 > 4 m; below that the chain untwists and there is no solution,
/// reported as nullopt rather than an error.
inline std::optional<double> solve_kappa(const ContinuumParams& p) {
  p.validate();
  const double k0 = p.k0();
  const double m = p.m_field();
  if (!(m > 0.0))
    throw std::invalid_argument("solve_kappa: zero field has no finite-period solution");
  if (!(std::numbers::pi * k0 > 4.0 * m)) return std::nullopt;

  const auto f = [&](double kap) {
    return std::numbers::pi * kap * k0 - 4.0 * m * elliptic_E(kap);
  };
  // f is strictly increasing (linear LHS, decreasing E): bisect, then polish.
  double lo = 0.0, hi = 1.0 - 1e-16;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  double kap = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    // dE/dkappa = (E - K)/kappa
    const double e = elliptic_E(kap);
    const double k = elliptic_K(kap);
    const double df = std::numbers::pi * k0 - 4.0 * m * (e - k) / kap;
    const double step = (std::numbers::pi * kap * k0 - 4.0 * m * e) / df;
    kap = std::clamp(kap - step, 1e-300, 1.0 - 1e-16);
    if (std::abs(step) < 1e-16) break;
  }
  if (std::abs(f(kap)) > 1e-12)
    throw std::runtime_error("solve_kappa: residual " + std::to_string(std::abs(f(kap))) +
                             " exceeds 1e-12");
  return kap;
}

/// Energy density of the soliton lattice, measured per unit length relative to
/// the field-polarized state:
///   epsilon = (a m^2 J / 2) (2E/(kappa^2 K) - 1/kappa^2 - (pi/2m) k0/(kappa K)).
inline double soliton_energy_density(const ContinuumParams& p, double kappa) {
  const double m = p.m_field();
  const double K = elliptic_K(kappa);
  const double E = elliptic_E(kappa);
  return (p.lattice_const * m * m * p.j_exchange / 2.0) *
         (2.0 * E / (kappa * kappa * K) - 1.0 / (kappa * kappa) -
          (std::numbers::pi / (2.0 * m)) * p.k0() / (kappa * K));
}

inline std::optional<SolitonSolution> soliton_solution(const ContinuumParams& p) {
  const auto kap = solve_kappa(p);
  if (!kap) return std::nullopt;
  SolitonSolution sol;
  sol.kappa = *kap;
  sol.period = 2.0 * *kap / p.m_field() * elliptic_K(*kap);
  sol.energy_per_period = soliton_energy_density(p, *kap);
  sol.params = p;
  return sol;
}

/// Row of a magnetic texture: unit (or sub-unit, for quantum states) moment.
struct TextureRow {
  int site = 0;
  double mx = 0.0, my = 0.0, mz = 0.0;
};

/// In-plane analytic texture (cos phi, sin phi, 0) sampled at z_j = j a.
inline std::vector<TextureRow> analytic_texture(const SolitonSolution& sol, int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("analytic_texture: need at least 2 sites");
  std::vector<TextureRow> rows;
  rows.reserve(static_cast<std::size_t>(n_sites));
  for (int j = 0; j < n_sites; ++j) {
    const double phi = sol.phi(j * sol.params.lattice_const);
    rows.push_back({j, std::cos(phi), std::sin(phi), 0.0});
  }
  return rows;
}

/// Classical lattice energy of a unit-vector texture, matching the quantum
/// chain termwise (spin-coherent product-state expectation of Eq.-(1) form):
///   H = -(J/4) sum n_i.n_j - (D/4) sum (n_i x n_j)_z + (B/2) sum n_j^x.
inline double classical_energy(const std::vector<TextureRow>& texture, const ChainParams& p) {
  const int n = static_cast<int>(texture.size());
  if (n != p.n_qubits)
    throw std::invalid_argument("classical_energy: texture size does not match chain");
  for (const auto& r : texture) {
    const double len = std::sqrt(r.mx * r.mx + r.my * r.my + r.mz * r.mz);
    if (std::abs(len - 1.0) > 1e-6)
      throw std::invalid_argument("classical_energy: non-unit vector at site " +
                                  std::to_string(r.site));
  }
  const int nb = p.boundary == Boundary::periodic ? n : n - 1;
  double e = 0.0;
  for (int b = 0; b < nb; ++b) {
    const auto& u = texture[static_cast<std::size_t>(b)];
    const auto& v = texture[static_cast<std::size_t>((b + 1) % n)];
    e += -p.j_exchange / 4.0 * (u.mx * v.mx + u.my * v.my + u.mz * v.mz);
    e += -p.dmi / 4.0 * (u.mx * v.my - u.my * v.mx);
  }
  for (const auto& r : texture) e += p.field / 2.0 * r.mx;
  return e;
}

} // namespace chainvqe
