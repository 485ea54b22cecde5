#pragma once

// Merging two copies of a graph state into one: ξ_σ measures the M part of
// copy 1 together with the H part of copy 2, and ξ_H applies the Pauli
// correction to the H part of copy 1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphmerge/errors.hpp"
#include "graphmerge/gf2.hpp"
#include "graphmerge/graphs.hpp"
#include "graphmerge/sim/circuit.hpp"

namespace graphmerge {

struct MergePlan {
  Graph graph;
  Partition partition;
  GraphBlocks blocks;
  gf2::PivotDecomposition pivot;
  BitMat u_inv;
  gf2::CnotSwapCircuit v_inv_circuit; // on register M
  gf2::CnotSwapCircuit u_circuit;     // on register H

  [[nodiscard]] std::size_t n() const noexcept { return graph.size(); }
  [[nodiscard]] std::size_t h_size() const noexcept { return partition.h().size(); }
  [[nodiscard]] std::size_t m_size() const noexcept { return partition.m().size(); }
  [[nodiscard]] std::size_t r() const noexcept { return pivot.r; }
  /// Nothing to merge when H is empty.
  [[nodiscard]] bool trivial() const noexcept { return partition.h().empty(); }
};

inline MergePlan plan(const Graph& g, const Partition& p) {
  MergePlan out{g, p, blocks(g, p), {}, {}, {}, {}};
  out.pivot = gf2::pivot_decompose(out.blocks.gamma);
  out.u_inv = gf2::invert(out.pivot.u);
  out.v_inv_circuit = gf2::synthesize_cnot_swap(gf2::invert(out.pivot.v));
  out.u_circuit = gf2::synthesize_cnot_swap(out.pivot.u);
  return out;
}

struct MergeOutcome {
  BitVec a; // |M|-r X outcomes
  BitVec b; // r Bell outcomes, M side
  BitVec c; // r Bell outcomes, H side
  BitVec d; // |H|-r Z outcomes
  PauliCorrection correction;

  friend bool operator==(const MergeOutcome&, const MergeOutcome&) = default;
};

/// x = U^{-1} [c ⊕ R d ; 0],  z = U^T [b ; R^T b] ⊕ G_H x.
inline PauliCorrection correction_from(const MergePlan& pl, const BitVec& b, const BitVec& c,
                                       const BitVec& d) {
  const std::size_t r = pl.r();
  const std::size_t h = pl.h_size();
  if (b.size() != r || c.size() != r || d.size() != h - r) {
    throw DimensionMismatch("outcome lengths do not match the plan");
  }
  const auto top = c ^ (pl.pivot.r_block * d);
  const auto x = pl.u_inv * top.concat(BitVec(h - r));
  const auto w = b.concat(pl.pivot.r_block.transpose() * b);
  auto z = pl.pivot.u.transpose() * w;
  z ^= pl.blocks.g_h * x;
  return {x, z};
}

/// Splits the flat outcome list of xi_sigma_circuit: b0 c0 b1 c1 … then a, then d.
inline MergeOutcome decode(const MergePlan& pl, std::span<const std::uint8_t> bits) {
  const std::size_t r = pl.r();
  if (bits.size() != pl.n()) {
    throw DimensionMismatch("expected " + std::to_string(pl.n()) + " outcome bits, got " +
                            std::to_string(bits.size()));
  }
  MergeOutcome out{BitVec(pl.m_size() - r), BitVec(r), BitVec(r), BitVec(pl.h_size() - r), {}};
  std::size_t k = 0;
  for (std::size_t i = 0; i < r; ++i) {
    out.b.set(i, bits[k++] != 0);
    out.c.set(i, bits[k++] != 0);
  }
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a.set(i, bits[k++] != 0);
  for (std::size_t i = 0; i < out.d.size(); ++i) out.d.set(i, bits[k++] != 0);
  out.correction = correction_from(pl, out.b, out.c, out.d);
  return out;
}

namespace detail {

inline void append_linear(sim::Circuit& out, const gf2::CnotSwapCircuit& c,
                          std::span<const std::size_t> wires) {
  for (const auto& g : c.gates) {
    if (const auto* x = std::get_if<gf2::Cnot>(&g)) {
      out.emplace_back(sim::op::Cnot{wires[x->control], wires[x->target]});
    } else {
      const auto& s = std::get<gf2::Swap>(g);
      out.emplace_back(sim::op::Swap{wires[s.a], wires[s.b]});
    }
  }
}

inline void require_register(std::span<const std::size_t> reg, std::size_t size, const char* name) {
  if (reg.size() != size) {
    throw DimensionMismatch(std::string("register ") + name + " has " + std::to_string(reg.size()) +
                            " qubits, expected " + std::to_string(size));
  }
}

} // namespace detail

/// The ξ_σ circuit. `m_reg[i]` holds copy 1's vertex partition.m()[i];
/// `h_reg[j]` holds copy 2's vertex partition.h()[j].
inline sim::Circuit xi_sigma_circuit(const MergePlan& pl, std::span<const std::size_t> m_reg,
                                     std::span<const std::size_t> h_reg) {
  detail::require_register(m_reg, pl.m_size(), "M");
  detail::require_register(h_reg, pl.h_size(), "H");
  sim::Circuit c;
  for (std::size_t i = 0; i < pl.h_size(); ++i)
    for (std::size_t j = i + 1; j < pl.h_size(); ++j)
      if (pl.blocks.g_h.get(i, j)) c.emplace_back(sim::op::Cz{h_reg[i], h_reg[j]});
  for (std::size_t i = 0; i < pl.m_size(); ++i)
    for (std::size_t j = i + 1; j < pl.m_size(); ++j)
      if (pl.blocks.g_m.get(i, j)) c.emplace_back(sim::op::Cz{m_reg[i], m_reg[j]});
  for (auto q : m_reg) c.emplace_back(sim::op::H{q});
  detail::append_linear(c, pl.v_inv_circuit, m_reg);
  detail::append_linear(c, pl.u_circuit, h_reg);
  const std::size_t r = pl.r();
  for (std::size_t i = 0; i < r; ++i) c.emplace_back(sim::op::BellMeasure{m_reg[i], h_reg[i]});
  for (std::size_t i = r; i < pl.m_size(); ++i) c.emplace_back(sim::op::MeasureX{m_reg[i]});
  for (std::size_t i = r; i < pl.h_size(); ++i) c.emplace_back(sim::op::MeasureZ{h_reg[i]});
  return c;
}

template <sim::QuantumBackend B>
MergeOutcome xi_sigma(const MergePlan& pl, B& state, std::span<const std::size_t> m_reg,
                      std::span<const std::size_t> h_reg, sim::OutcomeSource& outcomes) {
  const auto c = xi_sigma_circuit(pl, m_reg, h_reg);
  const auto bits = sim::run(state, c, outcomes);
  return decode(pl, bits);
}

/// Z^z then X^x on the listed qubits.
template <sim::QuantumBackend B>
void xi_h(B& state, std::span<const std::size_t> h_reg, const PauliCorrection& corr) {
  if (corr.x.size() != h_reg.size() || corr.z.size() != h_reg.size()) {
    throw DimensionMismatch("correction of length " + std::to_string(corr.x.size()) +
                            " for register of " + std::to_string(h_reg.size()) + " qubits");
  }
  for (std::size_t i = 0; i < h_reg.size(); ++i) {
    if (corr.z.get(i)) state.z(h_reg[i]);
    if (corr.x.get(i)) state.x(h_reg[i]);
  }
}

/// Qubit layout of the two-copy merge: copy 1 on 0..n-1, copy 2 on n..2n-1.
struct MergeLayout {
  std::vector<std::size_t> m_reg;  // copy 1, vertices of M
  std::vector<std::size_t> h_reg;  // copy 2, vertices of H
  std::vector<std::size_t> h_out;  // copy 1, vertices of H (ξ_H acts here)
  std::vector<std::size_t> output; // output[v] carries vertex v of the merged state

  static MergeLayout two_copies(const Partition& p) {
    const std::size_t n = p.size();
    MergeLayout l;
    for (auto v : p.m()) l.m_reg.push_back(v);
    for (auto v : p.h()) l.h_reg.push_back(n + v);
    for (auto v : p.h()) l.h_out.push_back(v);
    for (std::size_t v = 0; v < n; ++v) l.output.push_back(p.is_honest(v) ? v : n + v);
    return l;
  }
};

template <sim::QuantumBackend B>
struct MergeResult {
  B state; // full 2n-qubit state after ξ_H
  MergeLayout layout;
  MergeOutcome outcome;
  std::vector<std::uint8_t> bits;
  double probability = 1.0;
};

template <sim::QuantumBackend B>
B two_graph_copies(const Graph& g) {
  B state(2 * g.size());
  sim::prepare_graph_state(state, g, 0);
  sim::prepare_graph_state(state, g, g.size());
  return state;
}

/// One sampled run of ξ_σ followed by ξ_H on two fresh copies of |G⟩.
template <sim::QuantumBackend B>
MergeResult<B> merge_full(const Graph& g, const Partition& p, const sim::OutcomePolicy& policy) {
  const auto pl = plan(g, p);
  MergeResult<B> res{two_graph_copies<B>(g), MergeLayout::two_copies(p), {}, {}, 1.0};
  sim::OutcomeSource outcomes(policy);
  const auto c = xi_sigma_circuit(pl, res.layout.m_reg, res.layout.h_reg);
  res.bits = sim::run(res.state, c, outcomes);
  res.outcome = decode(pl, res.bits);
  xi_h(res.state, res.layout.h_out, res.outcome.correction);
  return res;
}

/// Every measurement branch of the merge, each already corrected by ξ_H.
template <sim::QuantumBackend B>
std::vector<MergeResult<B>> merge_branches(const Graph& g, const Partition& p,
                                           std::size_t max_measurements = 12) {
  const auto pl = plan(g, p);
  const auto layout = MergeLayout::two_copies(p);
  const auto c = xi_sigma_circuit(pl, layout.m_reg, layout.h_reg);
  std::vector<MergeResult<B>> out;
  for (auto& br : sim::enumerate_branches(c, two_graph_copies<B>(g), max_measurements)) {
    MergeResult<B> res{std::move(br.state), layout, decode(pl, br.bits), br.bits, br.probability};
    xi_h(res.state, res.layout.h_out, res.outcome.correction);
    out.push_back(std::move(res));
  }
  return out;
}

/// Does the output register hold exactly |G⟩?
inline bool holds_graph_state(const sim::Tableau& state, std::span<const std::size_t> output,
                              const Graph& g) {
  const auto reduced = state.reduced_state(output);
  return reduced && sim::same_state(*reduced, sim::make_graph_state<sim::Tableau>(g));
}

/// Fidelity of the output register with |G⟩.
inline double graph_state_fidelity(const sim::StateVector& state, std::span<const std::size_t> output,
                                   const Graph& g) {
  return sim::fidelity_reduced(state, output, sim::make_graph_state<sim::StateVector>(g));
}

// ---------------------------------------------------------------------------
// GHZ shortcut

struct GhzOutcome {
  bool x = false;
  bool z = false;
  std::vector<std::uint8_t> bits; // Bell (z0, x), then the X outcomes
  PauliCorrection correction;     // X^x on every H qubit, Z^z on the first
};

/// Qubits consumed by the GHZ shortcut, in measurement order. `m_reg` are
/// copy 1's M qubits, `h_reg` copy 2's H qubits.
inline sim::Circuit ghz_merge_circuit(std::span<const std::size_t> m_reg,
                                      std::span<const std::size_t> h_reg) {
  if (h_reg.empty()) {
    throw EmptyHonestSet("GHZ merge needs at least one honest qubit");
  }
  sim::Circuit c;
  if (m_reg.empty()) {
    return c;
  }
  c.emplace_back(sim::op::BellMeasure{m_reg.back(), h_reg.front()});
  for (std::size_t i = 0; i + 1 < m_reg.size(); ++i) c.emplace_back(sim::op::MeasureX{m_reg[i]});
  for (std::size_t i = 1; i < h_reg.size(); ++i) c.emplace_back(sim::op::MeasureX{h_reg[i]});
  return c;
}

inline GhzOutcome ghz_decode(std::size_t h_size, std::span<const std::uint8_t> bits) {
  GhzOutcome out;
  out.bits.assign(bits.begin(), bits.end());
  out.correction = PauliCorrection::identity(h_size);
  if (bits.empty()) {
    return out;
  }
  out.x = bits[1] != 0;
  bool z = bits[0] != 0;
  for (std::size_t i = 2; i < bits.size(); ++i) z ^= bits[i] != 0;
  out.z = z;
  for (std::size_t i = 0; i < h_size; ++i) out.correction.x.set(i, out.x);
  out.correction.z.set(0, out.z);
  return out;
}

template <sim::QuantumBackend B>
GhzOutcome ghz_merge(B& state, std::span<const std::size_t> m_reg, std::span<const std::size_t> h_reg,
                     sim::OutcomeSource& outcomes) {
  const auto c = ghz_merge_circuit(m_reg, h_reg);
  return ghz_decode(h_reg.size(), sim::run(state, c, outcomes));
}

/// Two GHZ_n copies on 0..n-1 and n..2n-1.
template <sim::QuantumBackend B>
B two_ghz_copies(std::size_t n) {
  B state(2 * n);
  for (std::size_t copy = 0; copy < 2; ++copy) {
    const std::size_t o = copy * n;
    state.h(o);
    for (std::size_t i = 1; i < n; ++i) state.cnot(o, o + i);
  }
  return state;
}

template <sim::QuantumBackend B>
std::vector<MergeResult<B>> ghz_merge_branches(std::size_t n, const Partition& p,
                                               std::size_t max_measurements = 12) {
  if (p.size() != n) {
    throw BadPartition("partition of " + std::to_string(p.size()) + " vertices for GHZ_" +
                       std::to_string(n));
  }
  const auto layout = MergeLayout::two_copies(p);
  const auto c = ghz_merge_circuit(layout.m_reg, layout.h_reg);
  std::vector<MergeResult<B>> out;
  for (auto& br : sim::enumerate_branches(c, two_ghz_copies<B>(n), max_measurements)) {
    const auto g = ghz_decode(p.h().size(), br.bits);
    MergeResult<B> res{std::move(br.state), layout, {}, br.bits, br.probability};
    res.outcome.correction = g.correction;
    xi_h(res.state, res.layout.h_out, g.correction);
    out.push_back(std::move(res));
  }
  return out;
}

} // namespace graphmerge
