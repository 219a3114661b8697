#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainvqe/statevector.hpp"

namespace chainvqe {

enum class EntanglerTopology { ring, linear };

/// Layered hardware-efficient ansatz: per layer, every qubit gets the rotation
/// sequence R_X R_Z R_X, then a cascade of controlled-Y entanglers
/// (q -> q+1 for q = 0..N-2, plus the wrap N-1 -> 0 for ring topology).
/// Ring gives 3N + N parameters per layer (16 for N = 4).
struct AnsatzSpec {
  int n_qubits = 0;
  int n_layers = 1;
  EntanglerTopology topology = EntanglerTopology::ring;
};

using ParameterVector = std::vector<double>;

inline int params_per_layer(const AnsatzSpec& spec) {
  const int entanglers =
      spec.topology == EntanglerTopology::ring ? spec.n_qubits : spec.n_qubits - 1;
  return 3 * spec.n_qubits + entanglers;
}

inline int param_count(const AnsatzSpec& spec) {
  if (spec.n_qubits < 2 || spec.n_layers < 1)
    throw std::invalid_argument("AnsatzSpec: need n_qubits >= 2 and n_layers >= 1");
  const long long total =
      static_cast<long long>(spec.n_layers) * params_per_layer(spec);
  if (total > (1ll << 24))
    throw std::invalid_argument("AnsatzSpec: parameter count " + std::to_string(total) +
                                " exceeds the supported limit");
  return static_cast<int>(total);
}

/// One parametrized gate of the unrolled circuit. Each gate consumes exactly
/// one angle; param_index is its position in the ParameterVector.
struct GateRef {
  enum class Kind { rotation, controlled_ry } kind;
  Axis axis;  // rotation only
  int qubit;  // rotation target, or entangler control
  int target; // entangler target
  int param_index;
};

/// Frozen gate/parameter order: qubit-major rotations (X, Z, X per qubit),
/// then the entangler cascade, layer by layer. Replayable across runs.
inline std::vector<GateRef> circuit_gates(const AnsatzSpec& spec) {
  const int total = param_count(spec);
  std::vector<GateRef> gates;
  gates.reserve(static_cast<std::size_t>(total));
  int k = 0;
  for (int layer = 0; layer < spec.n_layers; ++layer) {
    for (int q = 0; q < spec.n_qubits; ++q) {
      gates.push_back({GateRef::Kind::rotation, Axis::X, q, -1, k++});
      gates.push_back({GateRef::Kind::rotation, Axis::Z, q, -1, k++});
      gates.push_back({GateRef::Kind::rotation, Axis::X, q, -1, k++});
    }
    for (int q = 0; q + 1 < spec.n_qubits; ++q)
      gates.push_back({GateRef::Kind::controlled_ry, Axis::Y, q, q + 1, k++});
    if (spec.topology == EntanglerTopology::ring)
      gates.push_back({GateRef::Kind::controlled_ry, Axis::Y, spec.n_qubits - 1, 0, k++});
  }
  return gates;
}

inline void apply_gate(StateVector& psi, const GateRef& g, double theta) {
  if (g.kind == GateRef::Kind::rotation)
    apply_rotation(psi, g.axis, g.qubit, theta);
  else
    apply_controlled_ry(psi, g.qubit, g.target, theta);
}

/// |psi(theta)> = U(theta)|0...0>.
inline StateVector prepare_state(const AnsatzSpec& spec, const ParameterVector& theta) {
  if (static_cast<int>(theta.size()) != param_count(spec))
    throw std::invalid_argument("prepare_state: expected " + std::to_string(param_count(spec)) +
                                " parameters, got " + std::to_string(theta.size()));
  StateVector psi = new_zero_state(spec.n_qubits);
  for (const auto& g : circuit_gates(spec))
    apply_gate(psi, g, theta[static_cast<std::size_t>(g.param_index)]);
  return psi;
}

namespace detail {

// splitmix64-seeded xoshiro-free uniform doubles; bit-identical on any platform
struct Splitmix64 {
  std::uint64_t state;
  explicit Splitmix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace detail

/// Uniform i.i.d. angles in [0, 2pi), deterministic for a fixed seed.
inline ParameterVector random_parameters(const AnsatzSpec& spec, std::uint64_t seed) {
  detail::Splitmix64 rng(seed);
  ParameterVector theta(static_cast<std::size_t>(param_count(spec)));
  for (auto& t : theta) t = 2.0 * std::numbers::pi * rng.uniform01();
  return theta;
}

/// Angles reduced to [0, 2pi) for reporting; optimization itself is unconstrained.
inline ParameterVector wrap_angles(ParameterVector theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (auto& t : theta) {
    t = std::fmod(t, two_pi);
    if (t < 0.0) t += two_pi;
  }
  return theta;
}

} // namespace chainvqe
