#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chainvqe {

// Complete elliptic integrals and the Jacobi amplitude in the modulus
// convention: K(kappa) = int_0^{pi/2} dphi / sqrt(1 - kappa^2 sin^2 phi).
// All three go through the arithmetic-geometric mean; no external
// special-function dependency.

namespace detail {

struct AgmLadder {
  static constexpr int max_steps = 64;
  std::array<double, max_steps> a{}, c{};
  int steps = 0; // c[steps] is the first negligible defect
};

inline AgmLadder agm_ladder(double kappa) {
  AgmLadder l;
  double a = 1.0;
  double b = std::sqrt((1.0 - kappa) * (1.0 + kappa));
  double c = kappa;
  int n = 0;
  l.a[0] = a;
  l.c[0] = c;
  while (std::abs(c) > 1e-17 * a && n + 1 < AgmLadder::max_steps) {
    const double an = 0.5 * (a + b);
    const double cn = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    c = cn;
    ++n;
    l.a[n] = a;
    l.c[n] = c;
  }
  l.steps = n;
  return l;
}

} // namespace detail

/// Complete elliptic integral of the first kind, K(kappa) = pi / (2 AGM(1, kappa')).
inline double elliptic_K(double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0))
    throw std::invalid_argument("elliptic_K: modulus " + std::to_string(kappa) +
                                " outside [0, 1)");
  const auto l = detail::agm_ladder(kappa);
  return std::numbers::pi / (2.0 * l.a[l.steps]);
}

/// Complete elliptic integral of the second kind via E = K (1 - sum 2^{n-1} c_n^2).
inline double elliptic_E(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw std::invalid_argument("elliptic_E: modulus " + std::to_string(kappa) +
                                " outside [0, 1]");
  if (kappa == 1.0) return 1.0;
  const auto l = detail::agm_ladder(kappa);
  double sum = 0.0;
  double pow2 = 0.5; // 2^{n-1} at n = 0
  for (int n = 0; n <= l.steps; ++n) {
    sum += pow2 * l.c[n] * l.c[n];
    pow2 *= 2.0;
  }
  return elliptic_K(kappa) * (1.0 - sum);
}

/// Jacobi amplitude am(u, kappa), continuous and monotone in u (no mod-2pi
/// folding), so sn u = sin am(u) and am(u + 2K) = am(u) + pi. Descending
/// Landen transformation on the AGM ladder.
inline double jacobi_am(double u, double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0))
    throw std::invalid_argument("jacobi_am: modulus " + std::to_string(kappa) +
                                " outside [0, 1)");
  if (!std::isfinite(u)) throw std::invalid_argument("jacobi_am: non-finite argument");
  if (kappa == 0.0) return u; // am degenerates to the identity
  const auto l = detail::agm_ladder(kappa);
  double phi = std::ldexp(l.a[l.steps] * u, l.steps); // 2^n a_n u
  for (int n = l.steps; n >= 1; --n)
    phi = 0.5 * (phi + std::asin(std::clamp(l.c[n] / l.a[n] * std::sin(phi), -1.0, 1.0)));
  return phi;
}

} // namespace chainvqe
