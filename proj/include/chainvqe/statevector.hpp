#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chainvqe {

using complex = std::complex<double>;

enum class Axis { X, Y, Z };

inline char axis_name(Axis a) {
  switch (a) {
  case Axis::X: return 'X';
  case Axis::Y: return 'Y';
  default: return 'Z';
  }
}

/// Dense 2^n-amplitude pure state. Qubit j maps to bit j of the basis-state
/// index (little-endian); this convention is shared by every module.
struct StateVector {
  int n_qubits = 0;
  std::vector<complex> amplitudes;

  StateVector() = default;
  explicit StateVector(int n) : n_qubits(n) {
    if (n < 1 || n > 24)
      throw std::invalid_argument("StateVector: qubit count " + std::to_string(n) +
                                  " outside supported range [1, 24]");
    amplitudes.assign(std::size_t{1} << n, complex{0.0, 0.0});
  }

  std::size_t dim() const { return amplitudes.size(); }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }
};

/// |0...0> on n qubits.
inline StateVector new_zero_state(int n_qubits) {
  StateVector psi(n_qubits);
  psi.amplitudes[0] = complex{1.0, 0.0};
  return psi;
}

namespace detail {

inline void check_qubit(const StateVector& psi, int q, const char* who) {
  if (q < 0 || q >= psi.n_qubits)
    throw std::out_of_range(std::string(who) + ": qubit index " + std::to_string(q) +
                            " out of range for " + std::to_string(psi.n_qubits) + " qubits");
}

// In-place 2x2 update on the stride-paired amplitudes (k, k + 2^q).
inline void apply_single_qubit(StateVector& psi, int q, complex m00, complex m01,
                               complex m10, complex m11) {
  const std::size_t step = std::size_t{1} << q;
  const std::size_t dim = psi.dim();
  complex* a = psi.amplitudes.data();
  for (std::size_t base = 0; base < dim; base += 2 * step) {
    for (std::size_t k = base; k < base + step; ++k) {
      const complex lo = a[k];
      const complex hi = a[k + step];
      a[k] = m00 * lo + m01 * hi;
      a[k + step] = m10 * lo + m11 * hi;
    }
  }
}

} // namespace detail

/// R_alpha(theta) = exp(-i theta sigma_alpha) = cos(theta) I - i sin(theta) sigma_alpha.
/// Full-angle convention (no half angle): the parameter domain [0, 2pi) covers the orbit.
inline void apply_rotation(StateVector& psi, Axis axis, int qubit, double theta) {
  detail::check_qubit(psi, qubit, "apply_rotation");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  switch (axis) {
  case Axis::X:
    detail::apply_single_qubit(psi, qubit, {c, 0}, {0, -s}, {0, -s}, {c, 0});
    break;
  case Axis::Y:
    detail::apply_single_qubit(psi, qubit, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
    break;
  case Axis::Z: {
    // diagonal: exp(-i theta) on bit 0, exp(+i theta) on bit 1
    const complex lo{c, -s}, hi{c, s};
    const std::size_t step = std::size_t{1} << qubit;
    complex* a = psi.amplitudes.data();
    for (std::size_t base = 0; base < psi.dim(); base += 2 * step) {
      for (std::size_t k = base; k < base + step; ++k) {
        a[k] *= lo;
        a[k + step] *= hi;
      }
    }
    break;
  }
  }
}

/// Controlled R_Y(theta) on target amplitudes whose control bit is 1;
/// identity on the control-0 subspace. Same full-angle convention.
inline void apply_controlled_ry(StateVector& psi, int control, int target, double theta) {
  detail::check_qubit(psi, control, "apply_controlled_ry");
  detail::check_qubit(psi, target, "apply_controlled_ry");
  if (control == target)
    throw std::invalid_argument("apply_controlled_ry: control and target coincide");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  complex* a = psi.amplitudes.data();
  const std::size_t dim = psi.dim();
  for (std::size_t k = 0; k < dim; ++k) {
    if ((k & cbit) && !(k & tbit)) {
      const complex lo = a[k];
      const complex hi = a[k | tbit];
      a[k] = c * lo - s * hi;
      a[k | tbit] = s * lo + c * hi;
    }
  }
}

/// <a|b> with conjugation on a.
inline complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits != b.n_qubits)
    throw std::invalid_argument("inner_product: dimension mismatch");
  complex s{0.0, 0.0};
  for (std::size_t k = 0; k < a.dim(); ++k)
    s += std::conj(a.amplitudes[k]) * b.amplitudes[k];
  return s;
}

/// Two-qubit reduced density matrix, basis order |q_i q_j> with q_i the high bit.
struct DensityMatrix2Q {
  Eigen::Matrix4cd entries;
  int qubit_i = 0;
  int qubit_j = 0;
};

inline DensityMatrix2Q reduced_density_matrix(const StateVector& psi, int i, int j) {
  detail::check_qubit(psi, i, "reduced_density_matrix");
  detail::check_qubit(psi, j, "reduced_density_matrix");
  if (i >= j)
    throw std::invalid_argument("reduced_density_matrix: requires i < j");
  const std::size_t ibit = std::size_t{1} << i;
  const std::size_t jbit = std::size_t{1} << j;
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const complex* a = psi.amplitudes.data();
  for (std::size_t k = 0; k < psi.dim(); ++k) {
    if (k & (ibit | jbit)) continue; // enumerate bit patterns of the traced-out rest
    const complex v[4] = {a[k], a[k | jbit], a[k | ibit], a[k | ibit | jbit]};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        rho(r, c) += v[r] * std::conj(v[c]);
  }
  return DensityMatrix2Q{rho, i, j};
}

/// Per-site Pauli expectations <sigma_x>, <sigma_y>, <sigma_z>.
inline void single_qubit_expectations(const StateVector& psi, int qubit, double& mx,
                                      double& my, double& mz) {
  detail::check_qubit(psi, qubit, "single_qubit_expectations");
  const std::size_t step = std::size_t{1} << qubit;
  const complex* a = psi.amplitudes.data();
  double x = 0.0, y = 0.0, z = 0.0;
  for (std::size_t base = 0; base < psi.dim(); base += 2 * step) {
    for (std::size_t k = base; k < base + step; ++k) {
      const complex lo = a[k];
      const complex hi = a[k + step];
      const complex cross = std::conj(lo) * hi;
      x += 2.0 * cross.real();
      y += 2.0 * cross.imag();
      z += std::norm(lo) - std::norm(hi);
    }
  }
  mx = x;
  my = y;
  mz = z;
}

/// Debug/replay dump: 8-byte qubit count then (real, imag) 64-bit floats, little-endian.
inline void write_amplitudes(const StateVector& psi, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_amplitudes: cannot open " + path);
  const std::uint64_t n = static_cast<std::uint64_t>(psi.n_qubits);
  out.write(reinterpret_cast<const char*>(&n), 8);
  for (const auto& a : psi.amplitudes) {
    const double re = a.real(), im = a.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
}

inline StateVector read_amplitudes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_amplitudes: cannot open " + path);
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  if (!in || n < 1 || n > 24) throw std::runtime_error("read_amplitudes: bad qubit count");
  StateVector psi(static_cast<int>(n));
  for (auto& a : psi.amplitudes) {
    double re = 0.0, im = 0.0;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    a = complex{re, im};
  }
  if (!in) throw std::runtime_error("read_amplitudes: truncated file");
  return psi;
}

} // namespace chainvqe
