#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "graphmerge/errors.hpp"
#include "graphmerge/graphs.hpp"
#include "graphmerge/sim/clifford.hpp"
#include "graphmerge/sim/state_vector.hpp"
#include "graphmerge/sim/tableau.hpp"

namespace graphmerge::sim {

static_assert(QuantumBackend<Tableau>);
static_assert(QuantumBackend<StateVector>);

namespace detail {

template <QuantumBackend B>
bool measure_z(B& state, std::size_t q, OutcomeSource& outcomes) {
  const bool bit = outcomes.draw(state.probability_one(q));
  state.collapse(q, bit);
  return bit;
}

// Unitary part of an op; returns false for measurements.
template <QuantumBackend B>
bool apply_unitary(B& state, const CliffordOp& o) {
  return std::visit(
      [&state](const auto& g) -> bool {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, op::H>) state.h(g.q);
        else if constexpr (std::is_same_v<T, op::S>) state.s(g.q);
        else if constexpr (std::is_same_v<T, op::Sdg>) state.sdg(g.q);
        else if constexpr (std::is_same_v<T, op::X>) state.x(g.q);
        else if constexpr (std::is_same_v<T, op::Y>) state.y(g.q);
        else if constexpr (std::is_same_v<T, op::Z>) state.z(g.q);
        else if constexpr (std::is_same_v<T, op::Cnot>) state.cnot(g.control, g.target);
        else if constexpr (std::is_same_v<T, op::Cz>) state.cz(g.a, g.b);
        else if constexpr (std::is_same_v<T, op::Swap>) state.swap(g.a, g.b);
        else return false;
        return true;
      },
      o);
}

// A circuit lowered to unitaries and single-qubit Z measurements.
struct Step {
  CliffordOp unitary;
  bool is_measurement = false;
  std::size_t qubit = 0;
};

inline void lower(const CliffordOp& o, std::vector<Step>& out) {
  auto u = [&out](CliffordOp g) { out.push_back({g, false, 0}); };
  auto m = [&out](std::size_t q) { out.push_back({op::H{q}, true, q}); };
  if (const auto* g = std::get_if<op::MeasureZ>(&o)) {
    m(g->q);
  } else if (const auto* g = std::get_if<op::MeasureX>(&o)) {
    u(op::H{g->q});
    m(g->q);
    u(op::H{g->q});
  } else if (const auto* g = std::get_if<op::MeasureY>(&o)) {
    u(op::Sdg{g->q});
    u(op::H{g->q});
    m(g->q);
    u(op::H{g->q});
    u(op::S{g->q});
  } else if (const auto* g = std::get_if<op::BellMeasure>(&o)) {
    if (g->q1 == g->q2) {
      throw InvalidParameters("Bell measurement on a single qubit " + std::to_string(g->q1));
    }
    u(op::Cnot{g->q1, g->q2});
    u(op::H{g->q1});
    m(g->q1);
    m(g->q2);
  } else {
    u(o);
  }
}

} // namespace detail

/// Applies one op, drawing measurement results from `outcomes`.
/// Returns the outcome bits the op produced (none for gates).
template <QuantumBackend B>
std::vector<std::uint8_t> apply(B& state, const CliffordOp& o, OutcomeSource& outcomes) {
  std::vector<detail::Step> steps;
  detail::lower(o, steps);
  std::vector<std::uint8_t> bits;
  for (const auto& s : steps) {
    if (s.is_measurement) {
      bits.push_back(detail::measure_z(state, s.qubit, outcomes) ? 1 : 0);
    } else {
      detail::apply_unitary(state, s.unitary);
    }
  }
  return bits;
}

template <QuantumBackend B>
std::vector<std::uint8_t> run(B& state, std::span<const CliffordOp> circuit, OutcomeSource& outcomes) {
  std::vector<std::uint8_t> bits;
  for (const auto& o : circuit) {
    const auto b = apply(state, o, outcomes);
    bits.insert(bits.end(), b.begin(), b.end());
  }
  return bits;
}

template <QuantumBackend B>
std::vector<std::uint8_t> run(B& state, std::span<const CliffordOp> circuit, const OutcomePolicy& policy) {
  OutcomeSource outcomes(policy);
  return run(state, circuit, outcomes);
}

template <QuantumBackend B>
struct Branch {
  std::vector<std::uint8_t> bits;
  double probability = 0.0;
  B state;
};

/// Every outcome sequence of nonzero probability, with its post-measurement
/// state. Refuses circuits with more than `max_measurements` outcome bits.
template <QuantumBackend B>
std::vector<Branch<B>> enumerate_branches(std::span<const CliffordOp> circuit, const B& initial,
                                          std::size_t max_measurements = 12) {
  const auto count = outcome_bits(Circuit(circuit.begin(), circuit.end()));
  if (count > max_measurements) {
    throw CapacityExceeded(std::to_string(count) + " measurements exceeds the enumeration cap of " +
                           std::to_string(max_measurements));
  }
  std::vector<detail::Step> steps;
  for (const auto& o : circuit) {
    detail::lower(o, steps);
  }
  std::vector<Branch<B>> out;
  std::vector<std::uint8_t> bits;
  auto walk = [&](auto&& self, B state, std::size_t from, double prob) -> void {
    for (std::size_t i = from; i < steps.size(); ++i) {
      if (!steps[i].is_measurement) {
        detail::apply_unitary(state, steps[i].unitary);
        continue;
      }
      const double p1 = state.probability_one(steps[i].qubit);
      for (int bit = 0; bit < 2; ++bit) {
        const double p = bit == 1 ? p1 : 1.0 - p1;
        if (p < OutcomeSource::impossible_below) {
          continue;
        }
        B next = state;
        next.collapse(steps[i].qubit, bit == 1);
        bits.push_back(static_cast<std::uint8_t>(bit));
        self(self, std::move(next), i + 1, prob * p);
        bits.pop_back();
      }
      return;
    }
    out.push_back({bits, prob, std::move(state)});
  };
  walk(walk, initial, 0, 1.0);
  return out;
}

/// Turns fresh |0⟩ qubits offset..offset+n-1 into the graph state of g.
template <QuantumBackend B>
void prepare_graph_state(B& state, const Graph& g, std::size_t offset = 0) {
  for (std::size_t v = 0; v < g.size(); ++v) {
    state.h(offset + v);
  }
  for (const auto& [a, b] : g.edges()) {
    state.cz(offset + a, offset + b);
  }
}

template <QuantumBackend B>
B make_graph_state(const Graph& g) {
  B state(g.size());
  prepare_graph_state(state, g);
  return state;
}

/// Applies the Hermitian Pauli `p`, sign included.
inline void apply_pauli(StateVector& sv, const PauliString& p) {
  for (std::size_t q = 0; q < p.size(); ++q) {
    switch (p.letter(q)) {
      case 'X': sv.x(q); break;
      case 'Y': sv.y(q); break;
      case 'Z': sv.z(q); break;
      default: break;
    }
  }
  if (p.negative) {
    // ZXZX = -I.
    sv.z(0);
    sv.x(0);
    sv.z(0);
    sv.x(0);
  }
}

/// Amplitudes of the stabilizer state, up to global phase.
inline StateVector to_state_vector(const Tableau& t, std::size_t cap = StateVector::process_cap()) {
  const std::size_t n = t.num_qubits();
  // Find a basis state in the support by sampling Z outcomes on a copy.
  Tableau probe = t;
  std::uint64_t index = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const bool bit = probe.probability_one(q) > 0.75;
    probe.collapse(q, bit);
    if (bit) index |= std::uint64_t{1} << q;
  }
  StateVector sv = StateVector::basis(n, index, cap);
  for (const auto& s : t.stabilizers()) {
    StateVector moved = sv;
    apply_pauli(moved, s);
    auto amps = std::vector<StateVector::amplitude>(sv.amplitudes().begin(), sv.amplitudes().end());
    const auto other = moved.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
      amps[i] = 0.5 * (amps[i] + other[i]);
    }
    sv = StateVector::from_amplitudes(std::move(amps), cap);
  }
  const double norm = std::sqrt(sv.norm_squared());
  auto amps = std::vector<StateVector::amplitude>(sv.amplitudes().begin(), sv.amplitudes().end());
  for (auto& a : amps) {
    a /= norm;
  }
  return StateVector::from_amplitudes(std::move(amps), cap);
}

/// cos θ |0…0⟩ + sin θ |1…1⟩.
inline StateVector theta_state(std::size_t n, double theta, std::size_t cap = StateVector::process_cap()) {
  if (n == 0) {
    throw InvalidParameters("theta state needs at least one qubit");
  }
  std::vector<StateVector::amplitude> amps(std::size_t{1} << n, 0.0);
  amps.front() = std::cos(theta);
  amps.back() += std::sin(theta);
  return StateVector::from_amplitudes(std::move(amps), cap);
}

inline StateVector ghz_state(std::size_t n, std::size_t cap = StateVector::process_cap()) {
  return theta_state(n, std::acos(-1.0) / 4.0, cap);
}

} // namespace graphmerge::sim
