#pragma once

// Monte-Carlo simulation of the n-party GHZ verification protocol.
//
// Party i measures its qubit in the X basis when x_i = 0 and in the Y basis
// when x_i = 1. A verification round accepts iff ⊕y_i = (Σx_i / 2) mod 2.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graphmerge/errors.hpp"
#include "graphmerge/rng.hpp"
#include "graphmerge/sim/circuit.hpp"

namespace graphmerge::ghz {

struct HonestSource {};

struct PureStateSource {
  sim::StateVector state;
};

/// Produces the round's state from the round generator.
struct CustomSource {
  std::function<sim::StateVector(std::size_t n, CounterRng& rng)> make;
};

using SourceModel = std::variant<HonestSource, PureStateSource, CustomSource>;

/// Answer y_i of a corrupted party; nullopt means measure honestly.
using PartyHook = std::function<std::optional<std::uint8_t>(std::size_t party, std::uint8_t x,
                                                            sim::StateVector& state, CounterRng& rng)>;

enum class OutputTrigger {
  ExactLoop, // draw all S bits of r every round
  Geometric, // draw the gap to the next r = 0^S directly
};

struct VerifConfig {
  std::size_t n = 3;
  std::size_t S = 10;
  std::uint64_t seed = 0;
  std::size_t trials = 1; // rounds
  SourceModel source = HonestSource{};
  std::vector<std::size_t> corrupted;
  PartyHook party_hook;
  OutputTrigger trigger = OutputTrigger::Geometric;
  bool record = false;

  void validate() const {
    if (n < 2) throw InvalidParameters("GHZ verification needs n >= 2, got " + std::to_string(n));
    if (trials < 1) throw InvalidParameters("trials must be >= 1");
    for (auto c : corrupted) {
      if (c >= n) throw BadPartition("corrupted party " + std::to_string(c) + " out of range");
    }
    if (const auto* p = std::get_if<PureStateSource>(&source); p && p->state.num_qubits() != n) {
      throw DimensionMismatch("source state has " + std::to_string(p->state.num_qubits()) +
                              " qubits for " + std::to_string(n) + " parties");
    }
  }
};

enum class RoundKind { Output, Accept, Reject };

struct RoundRecord {
  RoundKind kind;
  std::size_t verifier = 0;
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> y;
  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct RunStats {
  std::size_t rounds = 0;
  std::size_t accepts = 0;
  std::size_t rejects = 0;
  std::size_t outputs = 0;

  /// Rejects over verification rounds.
  [[nodiscard]] double reject_rate() const {
    const auto v = accepts + rejects;
    return v == 0 ? 0.0 : static_cast<double>(rejects) / static_cast<double>(v);
  }
  /// Half-width of the normal-approximation 95% interval: 1.96·√(p(1−p)/N).
  [[nodiscard]] double ci95() const {
    const auto v = accepts + rejects;
    if (v == 0) return 0.0;
    const double p = reject_rate();
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(v));
  }
};

struct RunResult {
  RunStats stats;
  std::vector<RoundRecord> transcript;
};

/// Measures in the X (x=0) or Y (x=1) basis and returns b_out (0 accept, 1 reject).
inline std::uint8_t run_round(const VerifConfig& cfg, sim::StateVector& state, std::size_t verifier,
                              const std::vector<std::uint8_t>& x, CounterRng& rng,
                              std::vector<std::uint8_t>* y_out = nullptr) {
  if (state.num_qubits() != cfg.n || x.size() != cfg.n) {
    throw DimensionMismatch("round needs " + std::to_string(cfg.n) + " qubits and inputs");
  }
  if (verifier >= cfg.n) throw OutOfRange("verifier index " + std::to_string(verifier));
  std::size_t weight = 0;
  for (auto b : x) weight += b;
  if (weight % 2 != 0) throw OddInputSum("input weight " + std::to_string(weight) + " is odd");

  sim::OutcomeSource outcomes(rng.split(1));
  std::uint8_t parity = 0;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    std::optional<std::uint8_t> y;
    const bool corrupt = std::find(cfg.corrupted.begin(), cfg.corrupted.end(), i) != cfg.corrupted.end();
    if (corrupt && cfg.party_hook) y = cfg.party_hook(i, x[i], state, rng);
    if (!y) {
      const auto bits = x[i] ? sim::apply(state, sim::op::MeasureY{i}, outcomes)
                             : sim::apply(state, sim::op::MeasureX{i}, outcomes);
      y = bits.front();
    }
    if (y_out) y_out->push_back(*y & 1U);
    parity ^= *y & 1U;
  }
  return static_cast<std::uint8_t>(parity != (weight / 2) % 2);
}

/// Uniform x with even weight.
inline std::vector<std::uint8_t> sample_inputs(std::size_t n, CounterRng& rng) {
  std::vector<std::uint8_t> x(n);
  std::uint8_t parity = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    x[i] = rng.bit() ? 1 : 0;
    parity ^= x[i];
  }
  x[n - 1] = parity;
  return x;
}

namespace detail {

inline sim::StateVector source_state(const VerifConfig& cfg, CounterRng& rng) {
  return std::visit(
      [&](const auto& s) -> sim::StateVector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HonestSource>) {
          return sim::ghz_state(cfg.n);
        } else if constexpr (std::is_same_v<T, PureStateSource>) {
          return s.state;
        } else {
          auto st = s.make(cfg.n, rng);
          if (st.num_qubits() != cfg.n) throw DimensionMismatch("custom source returned wrong size");
          return st;
        }
      },
      cfg.source);
}

/// Rounds until the next r = 0^S, counting that round, under p = 2^{-S}.
inline std::uint64_t geometric_gap(std::size_t S, CounterRng& rng) {
  if (S == 0) return 1;
  const double p = std::ldexp(1.0, -static_cast<int>(S));
  const double u = 1.0 - rng.uniform01(); // (0, 1]
  const double k = std::floor(std::log(u) / std::log1p(-p));
  if (!(k < 9.0e18)) return UINT64_MAX;
  return static_cast<std::uint64_t>(k) + 1;
}

inline bool r_is_zero(std::size_t S, CounterRng& rng) {
  for (std::size_t done = 0; done < S; done += 64) {
    const auto take = std::min<std::size_t>(64, S - done);
    auto word = rng();
    if (take < 64) word &= (std::uint64_t{1} << take) - 1;
    if (word != 0) return false;
  }
  return true;
}

} // namespace detail

/// Repeats rounds: fresh source state, verifier index, r; output when r = 0^S,
/// otherwise a verification round. Every round is a function of (seed, index).
inline RunResult run_protocol(const VerifConfig& cfg) {
  cfg.validate();
  RunResult res;
  const CounterRng root(cfg.seed);
  CounterRng trigger_rng = root.split(0);
  std::uint64_t next_output = cfg.trigger == OutputTrigger::Geometric
                                  ? detail::geometric_gap(cfg.S, trigger_rng)
                                  : 0;
  for (std::size_t round = 1; round <= cfg.trials; ++round) {
    CounterRng rng = root.split(round);
    ++res.stats.rounds;
    const auto verifier = static_cast<std::size_t>(rng.uniform(cfg.n));
    bool output = false;
    if (cfg.trigger == OutputTrigger::ExactLoop) {
      output = detail::r_is_zero(cfg.S, rng);
    } else if (round == next_output) {
      output = true;
      const auto gap = detail::geometric_gap(cfg.S, trigger_rng);
      next_output = gap > UINT64_MAX - next_output ? UINT64_MAX : next_output + gap;
    }
    if (output) {
      ++res.stats.outputs;
      if (cfg.record) res.transcript.push_back({RoundKind::Output, verifier, {}, {}});
      continue;
    }
    auto state = detail::source_state(cfg, rng);
    const auto x = sample_inputs(cfg.n, rng);
    std::vector<std::uint8_t> y;
    const auto b = run_round(cfg, state, verifier, x, rng, cfg.record ? &y : nullptr);
    if (b) ++res.stats.rejects;
    else ++res.stats.accepts;
    if (cfg.record) res.transcript.push_back({b ? RoundKind::Reject : RoundKind::Accept, verifier, x, y});
  }
  return res;
}

/// √(1 − |⟨GHZ|ψ⟩|²), defined here only without corrupted parties.
inline double tau_pure(const sim::StateVector& state, const std::vector<std::size_t>& corrupted = {}) {
  if (!corrupted.empty()) {
    throw UnsupportedCorruption("tau_pure covers only the all-honest case");
  }
  const double f = sim::fidelity(sim::ghz_state(state.num_qubits(), state.cap()), state);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

/// Exact probability that the round with inputs x rejects ψ.
inline double reject_probability(const sim::StateVector& state, const std::vector<std::uint8_t>& x) {
  const std::size_t n = state.num_qubits();
  if (x.size() != n) throw DimensionMismatch("input length does not match the state");
  std::size_t weight = 0;
  for (auto b : x) weight += b;
  if (weight % 2 != 0) throw OddInputSum("input weight " + std::to_string(weight) + " is odd");
  auto s = state;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i]) s.sdg(i);
    s.h(i);
  }
  const auto target = static_cast<int>((weight / 2) % 2);
  double reject = 0.0;
  const auto& amps = s.amplitudes();
  for (std::uint64_t k = 0; k < amps.size(); ++k) {
    if (std::popcount(k) % 2 != target) reject += std::norm(amps[k]);
  }
  return reject;
}

/// reject_probability averaged over the uniform even-weight inputs.
inline double exact_reject_probability(const sim::StateVector& state) {
  const std::size_t n = state.num_qubits();
  double total = 0.0;
  std::size_t count = 0;
  std::vector<std::uint8_t> x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1U;
    total += reject_probability(state, x);
    ++count;
  }
  return total / static_cast<double>(count);
}

} // namespace graphmerge::ghz
