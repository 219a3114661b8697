#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chainvqe/statevector.hpp"

namespace chainvqe {

/// One real-weighted Pauli string; identity is implied on unlisted qubits.
/// Qubit indices are strictly increasing within a term.
struct PauliTerm {
  double coefficient = 0.0;
  std::vector<std::pair<int, Axis>> operators;

  PauliTerm() = default;
  PauliTerm(double coeff, std::vector<std::pair<int, Axis>> ops)
      : coefficient(coeff), operators(std::move(ops)) {
    if (!std::isfinite(coefficient))
      throw std::invalid_argument("PauliTerm: non-finite coefficient");
    for (std::size_t k = 0; k < operators.size(); ++k) {
      if (operators[k].first < 0)
        throw std::invalid_argument("PauliTerm: negative qubit index");
      if (k > 0 && operators[k].first <= operators[k - 1].first)
        throw std::invalid_argument("PauliTerm: qubit indices must be strictly increasing");
    }
  }
};

/// Hermitian operator as a merged sum of Pauli strings.
struct Hamiltonian {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;
};

enum class Boundary { open, periodic };

struct ChainParams {
  int n_qubits = 0;
  double j_exchange = 0.0; // J
  double dmi = 0.0;        // D, Dzyaloshinskii vector along z
  double field = 0.0;      // B, transverse field along x
  Boundary boundary = Boundary::open;
};

namespace detail {

inline std::string term_key(const std::vector<std::pair<int, Axis>>& ops) {
  std::string key;
  for (const auto& [q, ax] : ops) {
    key += std::to_string(q);
    key += axis_name(ax);
  }
  return key;
}

} // namespace detail

/// Merge duplicate operator lists by coefficient addition, dropping terms with
/// |coefficient| < 1e-15 after the merge.
inline Hamiltonian make_hamiltonian(int n_qubits, std::vector<PauliTerm> raw) {
  if (n_qubits < 1)
    throw std::invalid_argument("Hamiltonian: need at least one qubit");
  std::map<std::string, PauliTerm> merged;
  for (auto& t : raw) {
    if (!t.operators.empty() && t.operators.back().first >= n_qubits)
      throw std::invalid_argument("Hamiltonian: term qubit index exceeds register");
    auto key = detail::term_key(t.operators);
    auto it = merged.find(key);
    if (it == merged.end())
      merged.emplace(std::move(key), std::move(t));
    else
      it->second.coefficient += t.coefficient;
  }
  Hamiltonian h;
  h.n_qubits = n_qubits;
  for (auto& [key, t] : merged)
    if (std::abs(t.coefficient) >= 1e-15) h.terms.push_back(std::move(t));
  return h;
}

/// Spin chain of Eq.-(1) form with S = sigma/2, D along z, B along x:
/// per bond <i,i+1>  -(J/4)(XX + YY + ZZ) - (D/4)(X_i Y_{i+1} - Y_i X_{i+1}),
/// per site          +(B/2) X_j.
/// Open boundary has N-1 bonds, periodic N (the wrap bond runs N-1 -> 0).
inline Hamiltonian build_chain_hamiltonian(const ChainParams& p) {
  if (p.n_qubits < 2)
    throw std::invalid_argument("build_chain_hamiltonian: need n_qubits >= 2");
  std::vector<PauliTerm> terms;
  const int nb = p.boundary == Boundary::periodic ? p.n_qubits : p.n_qubits - 1;
  for (int b = 0; b < nb; ++b) {
    const int i = b;
    const int j = (b + 1) % p.n_qubits;
    const int lo = std::min(i, j);
    const int hi = std::max(i, j);
    if (p.j_exchange != 0.0) {
      for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
        terms.emplace_back(-p.j_exchange / 4.0,
                           std::vector<std::pair<int, Axis>>{{lo, ax}, {hi, ax}});
    }
    if (p.dmi != 0.0) {
      // antisymmetric under bond reversal; the wrap bond has i > j
      const double s = (i < j) ? 1.0 : -1.0;
      terms.emplace_back(-s * p.dmi / 4.0,
                         std::vector<std::pair<int, Axis>>{{lo, Axis::X}, {hi, Axis::Y}});
      terms.emplace_back(s * p.dmi / 4.0,
                         std::vector<std::pair<int, Axis>>{{lo, Axis::Y}, {hi, Axis::X}});
    }
  }
  if (p.field != 0.0)
    for (int q = 0; q < p.n_qubits; ++q)
      terms.emplace_back(p.field / 2.0, std::vector<std::pair<int, Axis>>{{q, Axis::X}});
  return make_hamiltonian(p.n_qubits, std::move(terms));
}

namespace detail {

// P|k> = phase(k)|k ^ flip>: X/Y flip the bit, Y contributes i*(-1)^bit, Z (-1)^bit.
struct CompiledTerm {
  double coeff;
  std::size_t flip_mask;
  std::size_t sign_mask; // Y and Z bits
  complex base_phase;    // i^{#Y}
};

inline CompiledTerm compile_term(const PauliTerm& t) {
  CompiledTerm c{t.coefficient, 0, 0, {1.0, 0.0}};
  int n_y = 0;
  for (const auto& [q, ax] : t.operators) {
    const std::size_t bit = std::size_t{1} << q;
    switch (ax) {
    case Axis::X: c.flip_mask |= bit; break;
    case Axis::Y:
      c.flip_mask |= bit;
      c.sign_mask |= bit;
      ++n_y;
      break;
    case Axis::Z: c.sign_mask |= bit; break;
    }
  }
  static const complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  c.base_phase = ipow[n_y % 4];
  return c;
}

// out += coeff * P|psi>
inline void accumulate_term(const CompiledTerm& c, const std::vector<complex>& in,
                            std::vector<complex>& out) {
  const std::size_t dim = in.size();
  for (std::size_t k = 0; k < dim; ++k) {
    const bool neg = std::popcount(k & c.sign_mask) & 1;
    const complex ph = neg ? -c.base_phase : c.base_phase;
    out[k ^ c.flip_mask] += c.coeff * ph * in[k];
  }
}

} // namespace detail

/// Matrix-free H|psi>.
inline StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& psi) {
  if (h.n_qubits != psi.n_qubits)
    throw std::invalid_argument("apply_hamiltonian: dimension mismatch");
  StateVector out(psi.n_qubits);
  for (const auto& t : h.terms)
    detail::accumulate_term(detail::compile_term(t), psi.amplitudes, out.amplitudes);
  return out;
}

/// <psi|H|psi>. The imaginary residue is asserted below 1e-10 and discarded.
inline double expectation(const Hamiltonian& h, const StateVector& psi) {
  if (h.n_qubits != psi.n_qubits)
    throw std::invalid_argument("expectation: dimension mismatch");
  complex acc{0.0, 0.0};
  const auto& a = psi.amplitudes;
  for (const auto& t : h.terms) {
    const auto c = detail::compile_term(t);
    complex term{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) {
      const bool neg = std::popcount(k & c.sign_mask) & 1;
      const complex ph = neg ? -c.base_phase : c.base_phase;
      term += std::conj(a[k ^ c.flip_mask]) * ph * a[k];
    }
    acc += c.coeff * term;
  }
  if (std::abs(acc.imag()) > 1e-10)
    throw std::runtime_error("expectation: non-real value, |imag| = " +
                             std::to_string(std::abs(acc.imag())));
  return acc.real();
}

/// Kronecker-expanded dense matrix; oracle for tests and the dense eigensolver.
inline Eigen::MatrixXcd to_dense(const Hamiltonian& h) {
  if (h.n_qubits > 14)
    throw std::invalid_argument("to_dense: refusing n_qubits > 14 (memory guard)");
  const std::size_t dim = std::size_t{1} << h.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (const auto& t : h.terms) {
    const auto c = detail::compile_term(t);
    for (std::size_t k = 0; k < dim; ++k) {
      const bool neg = std::popcount(k & c.sign_mask) & 1;
      const complex ph = neg ? -c.base_phase : c.base_phase;
      m(static_cast<Eigen::Index>(k ^ c.flip_mask), static_cast<Eigen::Index>(k)) +=
          t.coefficient * ph;
    }
  }
  return m;
}

} // namespace chainvqe
