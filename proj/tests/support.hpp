#pragma once

// Shared helpers for the test binaries: brute-force oracles and random
// circuit generation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "graphmerge/graphs.hpp"
#include "graphmerge/rng.hpp"
#include "graphmerge/sim/circuit.hpp"

namespace graphmerge::test_util {

/// Graph state from its amplitude formula: ⟨k|G⟩ = (-1)^{#edges inside k} / 2^{n/2}.
inline sim::StateVector graph_state_by_formula(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::complex<double>> amps(std::size_t{1} << n);
  const double norm = std::pow(2.0, -static_cast<double>(n) / 2.0);
  for (std::uint64_t k = 0; k < amps.size(); ++k) {
    int parity = 0;
    for (const auto& [a, b] : g.edges()) {
      parity ^= static_cast<int>(((k >> a) & 1U) & ((k >> b) & 1U));
    }
    amps[k] = parity ? -norm : norm;
  }
  return sim::StateVector::from_amplitudes(std::move(amps));
}

/// Random Clifford circuit with occasional measurements of every kind.
inline sim::Circuit random_clifford_circuit(std::size_t n, std::size_t length, std::size_t max_meas,
                                            CounterRng& rng) {
  sim::Circuit c;
  std::size_t meas = 0;
  for (std::size_t i = 0; i < length; ++i) {
    const auto q = static_cast<std::size_t>(rng.uniform(n));
    auto other = [&] {
      auto t = static_cast<std::size_t>(rng.uniform(n - 1));
      return t >= q ? t + 1 : t;
    };
    const auto kind = rng.uniform(n > 1 ? 13 : 10);
    switch (kind) {
      case 0: c.emplace_back(sim::op::H{q}); break;
      case 1: c.emplace_back(sim::op::S{q}); break;
      case 2: c.emplace_back(sim::op::Sdg{q}); break;
      case 3: c.emplace_back(sim::op::X{q}); break;
      case 4: c.emplace_back(sim::op::Y{q}); break;
      case 5: c.emplace_back(sim::op::Z{q}); break;
      case 6:
      case 7:
      case 8:
        if (meas < max_meas) {
          ++meas;
          if (kind == 6) c.emplace_back(sim::op::MeasureZ{q});
          else if (kind == 7) c.emplace_back(sim::op::MeasureX{q});
          else c.emplace_back(sim::op::MeasureY{q});
        } else {
          c.emplace_back(sim::op::H{q});
        }
        break;
      case 9: c.emplace_back(sim::op::H{q}); break;
      case 10: c.emplace_back(sim::op::Cnot{q, other()}); break;
      case 11: c.emplace_back(sim::op::Cz{q, other()}); break;
      default:
        if (meas + 2 <= max_meas) {
          meas += 2;
          c.emplace_back(sim::op::BellMeasure{q, other()});
        } else {
          c.emplace_back(sim::op::Swap{q, other()});
        }
        break;
    }
  }
  return c;
}

} // namespace graphmerge::test_util
