#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "chainvqe/soliton.hpp"
#include "chainvqe/statevector.hpp"

namespace chainvqe {

namespace detail {

inline Eigen::Matrix4cd sigma_y_pair() {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // sigma_y (x) sigma_y in the |q_i q_j> basis
  yy(0, 3) = complex{-1, 0};
  yy(1, 2) = complex{1, 0};
  yy(2, 1) = complex{1, 0};
  yy(3, 0) = complex{-1, 0};
  return yy;
}

} // namespace detail

/// Wootters concurrence of a two-qubit density matrix:
/// C = max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)} with l1 >= ... >= l4
/// the eigenvalues of R = rho rho~, rho~ = (sy (x) sy) rho* (sy (x) sy).
///
/// Writing rho = X X^dagger (X from the Hermitian eigendecomposition), the
/// sqrt(l_i) are exactly the singular values of the symmetric matrix
/// tau = X^T (sy (x) sy) X: rho rho~ = X tau* X^T (sy (x) sy) shares its
/// nonzero spectrum with tau^dagger tau. The SVD route evaluates the same
/// quantity without squaring, so the near-zero roots come out at machine
/// precision where a general eigensolve of R only reaches ~1e-9.
inline double concurrence(const DensityMatrix2Q& rho) {
  if ((rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("concurrence: density matrix is not Hermitian (corrupted?)");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.entries);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("concurrence: eigenvalue solve failed");

  Eigen::Matrix4cd x = es.eigenvectors();
  for (int k = 0; k < 4; ++k) {
    const double w = es.eigenvalues()(k);
    if (w < -1e-10)
      throw std::runtime_error("concurrence: density matrix not positive semidefinite");
    x.col(k) *= std::sqrt(std::max(0.0, w));
  }

  const Eigen::Matrix4cd tau = x.transpose() * detail::sigma_y_pair() * x;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
  const auto& s = svd.singularValues(); // descending
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

/// Symmetric N x N concurrence map with zero diagonal.
struct ConcurrenceMatrix {
  int n = 0;
  std::vector<double> values; // row-major n x n

  double operator()(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(j)];
  }
  double& at(int i, int j) {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(j)];
  }
};

inline ConcurrenceMatrix concurrence_matrix(const StateVector& psi) {
  ConcurrenceMatrix m;
  m.n = psi.n_qubits;
  m.values.assign(static_cast<std::size_t>(m.n) * static_cast<std::size_t>(m.n), 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) {
      const double c = concurrence(reduced_density_matrix(psi, i, j));
      m.at(i, j) = c;
      m.at(j, i) = c;
    }
  return m;
}

/// Elementwise ratio vqe/exact where the exact entry exceeds 1e-6; entries
/// below the threshold are NaN sentinels (serialized as null, never a number).
inline std::vector<double> relative_concurrence(const ConcurrenceMatrix& vqe,
                                                const ConcurrenceMatrix& exact) {
  if (vqe.n != exact.n)
    throw std::invalid_argument("relative_concurrence: shape mismatch");
  std::vector<double> ratio(vqe.values.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < ratio.size(); ++k)
    if (exact.values[k] > 1e-6) ratio[k] = vqe.values[k] / exact.values[k];
  return ratio;
}

/// Per-site magnetic moments (<sigma_x>, <sigma_y>, <sigma_z>).
inline std::vector<TextureRow> magnetization_texture(const StateVector& psi) {
  std::vector<TextureRow> rows;
  rows.reserve(static_cast<std::size_t>(psi.n_qubits));
  for (int q = 0; q < psi.n_qubits; ++q) {
    TextureRow r;
    r.site = q;
    single_qubit_expectations(psi, q, r.mx, r.my, r.mz);
    rows.push_back(r);
  }
  return rows;
}

} // namespace chainvqe
