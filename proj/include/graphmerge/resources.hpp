#pragma once

// Executable ideal resources (Verif^f, Verif, CoinFlip), the stabilizer
// twirl that turns Verif^f into Verif, and the correction completion used by
// its simulator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graphmerge/errors.hpp"
#include "graphmerge/graphs.hpp"
#include "graphmerge/merge.hpp"
#include "graphmerge/rng.hpp"
#include "graphmerge/sim/circuit.hpp"

namespace graphmerge {

/// Party i, or the source.
struct PartyId {
  std::optional<std::size_t> index;

  static PartyId source() { return {}; }
  static PartyId party(std::size_t i) { return {i}; }
  [[nodiscard]] bool is_source() const noexcept { return !index; }
  [[nodiscard]] std::string to_string() const {
    return index ? "P" + std::to_string(*index) : std::string("S");
  }
  friend bool operator==(const PartyId&, const PartyId&) = default;
};

enum class Signal { Top, Bot };

/// c_i for Verif^f: 0 honest, 1 malicious, ⊥ abort.
enum class PartyChoice { Honest, Malicious, Abort };

struct Abort {
  friend bool operator==(const Abort&, const Abort&) = default;
};
struct QubitHandle {
  std::size_t qubit;
  friend bool operator==(const QubitHandle&, const QubitHandle&) = default;
};
struct ChoiceMsg {
  PartyChoice choice;
  friend bool operator==(const ChoiceMsg&, const ChoiceMsg&) = default;
};
struct SignalMsg {
  Signal signal;
  friend bool operator==(const SignalMsg&, const SignalMsg&) = default;
};
struct CorrectionMsg {
  PauliCorrection correction;
  friend bool operator==(const CorrectionMsg&, const CorrectionMsg&) = default;
};
struct BitsMsg {
  BitVec bits;
  friend bool operator==(const BitsMsg&, const BitsMsg&) = default;
};

using Payload = std::variant<Abort, QubitHandle, ChoiceMsg, SignalMsg, CorrectionMsg, BitsMsg>;

/// One message between an interface and the resource. `party` is the
/// interface; `to_resource` gives the direction.
struct Event {
  PartyId party;
  bool to_resource = false;
  Payload payload;
  friend bool operator==(const Event&, const Event&) = default;
};

class Transcript {
public:
  void to_resource(PartyId who, Payload p) { push({who, true, std::move(p)}); }
  void from_resource(PartyId who, Payload p) { push({who, false, std::move(p)}); }

  /// ⊥ on every party interface; no output may follow.
  void abort_all(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) from_resource(PartyId::party(i), Abort{});
    aborted_ = true;
  }

  [[nodiscard]] bool aborted() const noexcept { return aborted_; }
  [[nodiscard]] const std::vector<Event>& events() const noexcept { return events_; }

  /// Final output of party i: a qubit handle, ⊥, or nothing.
  [[nodiscard]] std::optional<Payload> output_of(std::size_t i) const {
    std::optional<Payload> last;
    for (const auto& e : events_) {
      if (!e.to_resource && e.party == PartyId::party(i) &&
          (std::holds_alternative<QubitHandle>(e.payload) || std::holds_alternative<Abort>(e.payload) ||
           std::holds_alternative<BitsMsg>(e.payload))) {
        last = e.payload;
      }
    }
    return last;
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;

private:
  void push(Event e) {
    if (aborted_) {
      throw InvalidParameters("event after abort");
    }
    events_.push_back(std::move(e));
  }

  std::vector<Event> events_;
  bool aborted_ = false;
};

// ---------------------------------------------------------------------------
// Adversary: one global hook object spanning every corrupted interface.

template <sim::QuantumBackend B>
class Adversary {
public:
  virtual ~Adversary() = default;

  /// c_S, asked only when the source is corrupted.
  virtual Signal source_signal() { return Signal::Top; }

  /// c_i for Verif^f, asked for each corrupted party.
  virtual PartyChoice choice(std::size_t /*party*/) { return PartyChoice::Malicious; }

  /// Called with the qubits of the parties that declared themselves
  /// malicious (`delivered[k]` belongs to `malicious[k]`). The adversary may
  /// act on them and may append qubits of its own. Returns one correction
  /// (a_i, b_i) per malicious party, each of length |H|.
  virtual std::vector<PauliCorrection> corrections(B& state, const Graph& g, const Partition& p,
                                                   const std::vector<std::size_t>& delivered) {
    static_cast<void>(state);
    static_cast<void>(g);
    static_cast<void>(delivered);
    return std::vector<PauliCorrection>(p.m().size(), PauliCorrection::identity(p.h().size()));
  }

  /// First abort bit c_i for Verif and CoinFlip.
  virtual Signal first_signal(std::size_t /*party*/) { return Signal::Top; }

  /// Second abort bit c'_i, after early delivery. For CoinFlip `seen` is x;
  /// for Verif it is empty and the early qubit is in the state.
  virtual Signal second_signal(std::size_t /*party*/, const BitVec& /*seen*/) { return Signal::Top; }
};

/// Runs ξ_σ on the delivered qubits against a private copy of |G⟩ and
/// reports the merge correction as the first malicious party's (a, b).
template <sim::QuantumBackend B>
class MergeAdversary : public Adversary<B> {
public:
  explicit MergeAdversary(std::uint64_t seed) : outcomes_(CounterRng(seed)) {}

  std::vector<PauliCorrection> corrections(B& state, const Graph& g, const Partition& p,
                                           const std::vector<std::size_t>& delivered) override {
    const std::size_t offset = state.num_qubits();
    state.append(sim::make_graph_state<B>(g));
    std::vector<std::size_t> h_reg;
    for (auto v : p.h()) h_reg.push_back(offset + v);
    copy_m_.clear();
    for (auto v : p.m()) copy_m_.push_back(offset + v);
    last_ = xi_sigma(plan(g, p), state, delivered, h_reg, outcomes_);
    std::vector<PauliCorrection> out(p.m().size(), PauliCorrection::identity(p.h().size()));
    if (!out.empty()) out.front() = last_.correction;
    return out;
  }

  [[nodiscard]] const MergeOutcome& last_outcome() const noexcept { return last_; }
  /// Qubits of the adversary's copy that stand in for the M vertices.
  [[nodiscard]] const std::vector<std::size_t>& copy_m_qubits() const noexcept { return copy_m_; }

private:
  sim::OutcomeSource outcomes_;
  MergeOutcome last_;
  std::vector<std::size_t> copy_m_;
};

/// Session output. `qubit_of[i]` is the handle of vertex i in `state`.
template <sim::QuantumBackend B>
struct Session {
  Transcript transcript;
  B state;
  std::vector<std::size_t> qubit_of;
  std::optional<Partition> partition; // Verif^f: H = {c_i = 0}, M = {c_i = 1}
  PauliCorrection applied;            // Verif^f: (x, z) applied to H
  [[nodiscard]] bool aborted() const noexcept { return transcript.aborted(); }
};

struct Corruption {
  std::vector<std::size_t> parties;
  bool source = false;

  [[nodiscard]] bool has(std::size_t i) const {
    return std::find(parties.begin(), parties.end(), i) != parties.end();
  }
};

namespace detail {

inline void check_corruption(const Corruption& c, std::size_t n) {
  for (auto i : c.parties) {
    if (i >= n) throw BadPartition("corrupted party " + std::to_string(i) + " out of range");
  }
}

template <sim::QuantumBackend B>
Session<B> fresh_session(const Graph& g) {
  Session<B> s{{}, sim::make_graph_state<B>(g), {}, std::nullopt, {}};
  for (std::size_t v = 0; v < g.size(); ++v) s.qubit_of.push_back(v);
  return s;
}

} // namespace detail

/// Verif^f: source check, |G⟩, c_i ∈ {0,1,⊥}, early delivery to M,
/// corrections x = ⊕a_i, z = ⊕b_i, validation by f, Z^z X^x on H, delivery.
template <sim::QuantumBackend B>
Session<B> run_verif_f(const Graph& g, const Corruption& corrupt, Adversary<B>& adv) {
  const std::size_t n = g.size();
  detail::check_corruption(corrupt, n);
  Session<B> s{{}, B(0), {}, std::nullopt, {}};
  auto& t = s.transcript;

  const Signal c_s = corrupt.source ? adv.source_signal() : Signal::Top;
  t.to_resource(PartyId::source(), SignalMsg{c_s});
  if (c_s == Signal::Bot) {
    t.abort_all(n);
    return s;
  }

  auto fresh = detail::fresh_session<B>(g);
  s.state = std::move(fresh.state);
  s.qubit_of = std::move(fresh.qubit_of);

  std::vector<std::size_t> h;
  std::vector<std::size_t> m;
  bool any_abort = false;
  for (std::size_t i = 0; i < n; ++i) {
    const PartyChoice c = corrupt.has(i) ? adv.choice(i) : PartyChoice::Honest;
    t.to_resource(PartyId::party(i), ChoiceMsg{c});
    if (c == PartyChoice::Abort) any_abort = true;
    else if (c == PartyChoice::Malicious) m.push_back(i);
    else h.push_back(i);
  }
  if (any_abort) {
    t.abort_all(n);
    return s;
  }
  const Partition p(n, h, m);
  s.partition = p;

  std::vector<std::size_t> delivered;
  for (auto i : m) {
    delivered.push_back(s.qubit_of[i]);
    t.from_resource(PartyId::party(i), QubitHandle{s.qubit_of[i]});
  }

  PauliCorrection total = PauliCorrection::identity(h.size());
  if (!m.empty()) {
    const auto corr = adv.corrections(s.state, g, p, delivered);
    if (corr.size() != m.size()) {
      throw DimensionMismatch("adversary sent " + std::to_string(corr.size()) +
                              " corrections for " + std::to_string(m.size()) + " malicious parties");
    }
    for (std::size_t k = 0; k < m.size(); ++k) {
      t.to_resource(PartyId::party(m[k]), CorrectionMsg{corr[k]});
      if (corr[k].size() != h.size() || corr[k].z.size() != h.size()) {
        throw DimensionMismatch("correction length does not match |H|");
      }
      total ^= corr[k];
    }
    if (!validate_f(g, p, total).accepted) {
      t.abort_all(n);
      return s;
    }
  }
  s.applied = total;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (total.z.get(k)) s.state.z(s.qubit_of[h[k]]);
    if (total.x.get(k)) s.state.x(s.qubit_of[h[k]]);
  }
  for (auto i : h) t.from_resource(PartyId::party(i), QubitHandle{s.qubit_of[i]});
  return s;
}

/// Verif: |G⟩, c_i ∈ {⊤,⊥}; parties sending ⊥ get their qubit early and
/// then send c'_i; any c'_i = ⊥ aborts everyone, otherwise the rest receive.
template <sim::QuantumBackend B>
Session<B> run_verif(const Graph& g, const Corruption& corrupt, Adversary<B>& adv) {
  const std::size_t n = g.size();
  detail::check_corruption(corrupt, n);
  auto s = detail::fresh_session<B>(g);
  auto& t = s.transcript;
  std::vector<Signal> first(n, Signal::Top);
  for (std::size_t i = 0; i < n; ++i) {
    first[i] = corrupt.has(i) ? adv.first_signal(i) : Signal::Top;
    t.to_resource(PartyId::party(i), SignalMsg{first[i]});
  }
  bool abort = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (first[i] == Signal::Bot) {
      t.from_resource(PartyId::party(i), QubitHandle{s.qubit_of[i]});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (first[i] == Signal::Bot) {
      const Signal second = adv.second_signal(i, BitVec{});
      t.to_resource(PartyId::party(i), SignalMsg{second});
      abort = abort || second == Signal::Bot;
    }
  }
  if (abort) {
    t.abort_all(n);
    return s;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (first[i] == Signal::Top) t.from_resource(PartyId::party(i), QubitHandle{s.qubit_of[i]});
  }
  return s;
}

struct CoinFlipResult {
  Transcript transcript;
  BitVec x;
  [[nodiscard]] bool aborted() const noexcept { return transcript.aborted(); }
};

/// CoinFlip: x ←$ {0,1}^bits, then the same two-stage abort handshake.
template <sim::QuantumBackend B>
CoinFlipResult run_coinflip(std::size_t n_parties, std::size_t bits, const Corruption& corrupt,
                            Adversary<B>& adv, std::uint64_t seed) {
  detail::check_corruption(corrupt, n_parties);
  CounterRng rng(seed);
  CoinFlipResult out{{}, BitVec::random(bits, rng)};
  auto& t = out.transcript;
  std::vector<Signal> first(n_parties, Signal::Top);
  for (std::size_t i = 0; i < n_parties; ++i) {
    first[i] = corrupt.has(i) ? adv.first_signal(i) : Signal::Top;
    t.to_resource(PartyId::party(i), SignalMsg{first[i]});
  }
  bool abort = false;
  for (std::size_t i = 0; i < n_parties; ++i) {
    if (first[i] == Signal::Bot) t.from_resource(PartyId::party(i), BitsMsg{out.x});
  }
  for (std::size_t i = 0; i < n_parties; ++i) {
    if (first[i] == Signal::Bot) {
      const Signal second = adv.second_signal(i, out.x);
      t.to_resource(PartyId::party(i), SignalMsg{second});
      abort = abort || second == Signal::Bot;
    }
  }
  if (abort) {
    t.abort_all(n_parties);
    return out;
  }
  for (std::size_t i = 0; i < n_parties; ++i) {
    if (first[i] == Signal::Top) t.from_resource(PartyId::party(i), BitsMsg{out.x});
  }
  return out;
}

/// Each honest party i applies X^{x_i} Z^{(Gx)_i} to its qubit.
template <sim::QuantumBackend B>
B twirl_protocol(const Graph& g, const Session<B>& verif_f, const CoinFlipResult& coin,
                 const std::vector<std::size_t>& honest) {
  if (verif_f.aborted() || coin.aborted()) {
    throw AbortedUpstream(verif_f.aborted() ? "Verif^f aborted" : "CoinFlip aborted");
  }
  if (coin.x.size() != g.size()) {
    throw DimensionMismatch("coin of length " + std::to_string(coin.x.size()) + " for " +
                            std::to_string(g.size()) + " parties");
  }
  const auto s = stabilizer_of(g, coin.x);
  B state = verif_f.state;
  for (auto i : honest) {
    const auto q = verif_f.qubit_of.at(i);
    if (s.x.get(i)) state.x(q);
    if (s.z.get(i)) state.z(q);
  }
  return state;
}

/// x' = [x'_H ; x'_M] in vertex order, with x'_H = x_h and
/// x'_M = (V^T)^{-1} [b ; 0], b the witness of f. Then (G x')_H = z_h.
inline BitVec complete_correction(const Graph& g, const Partition& p, const BitVec& x_h,
                                  const BitVec& z_h) {
  const CorrectionValidator f(g, p);
  const auto res = f({x_h, z_h});
  if (!res.accepted) {
    throw InvalidCorrection("correction (" + x_h.to_string() + ", " + z_h.to_string() +
                            ") is rejected by f");
  }
  const std::size_t m = p.m().size();
  const auto padded = res.witness->concat(BitVec(m - f.pivot.r));
  const auto x_m = gf2::invert(f.pivot.v.transpose()) * padded;
  BitVec full(g.size());
  for (std::size_t k = 0; k < p.h().size(); ++k) full.set(p.h()[k], x_h.get(k));
  for (std::size_t k = 0; k < m; ++k) full.set(p.m()[k], x_m.get(k));
  return full;
}

/// Restriction of a vertex-indexed vector to the listed vertices.
inline BitVec restrict_to(const BitVec& v, const std::vector<std::size_t>& vertices) {
  BitVec out(vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k) out.set(k, v.get(vertices[k]));
  return out;
}

/// The simulator's bookkeeping, checked on states: with x̂ = x ⊕ x', the real
/// world (correction (x_h, z_h) from Verif^f, then the twirl by x on H) equals
/// |G⟩ with X^{x̂_M} Z^{(Gx̂)_M} applied on the corrupted side only.
inline bool twirl_real_matches_ideal(const Graph& g, const Partition& p, const BitVec& x_h,
                                     const BitVec& z_h, const BitVec& coin) {
  const auto x_prime = complete_correction(g, p, x_h, z_h);
  auto x_hat = coin;
  x_hat ^= x_prime;
  const auto twirl = stabilizer_of(g, coin);
  const auto hat = stabilizer_of(g, x_hat);

  auto real = sim::make_graph_state<sim::Tableau>(g);
  for (std::size_t k = 0; k < p.h().size(); ++k) {
    const auto v = p.h()[k];
    if (z_h.get(k)) real.z(v);
    if (x_h.get(k)) real.x(v);
    if (twirl.x.get(v)) real.x(v);
    if (twirl.z.get(v)) real.z(v);
  }
  auto ideal = sim::make_graph_state<sim::Tableau>(g);
  for (auto v : p.m()) {
    if (hat.x.get(v)) ideal.x(v);
    if (hat.z.get(v)) ideal.z(v);
  }
  return sim::same_state(real, ideal);
}

// ---------------------------------------------------------------------------
// Black-box impossibility: the distinguisher measures both halves of what it
// believes is one Bell pair in the computational basis.

struct ImpossibilityStats {
  std::size_t trials = 0;
  double real_equal_rate = 0.0;
  double ideal_equal_rate = 0.0;
  double advantage = 0.0;
  double ci95 = 0.0;
};

inline ImpossibilityStats impossibility_demo(std::size_t trials, std::uint64_t seed) {
  if (trials == 0) {
    throw InvalidParameters("impossibility demo needs at least one trial");
  }
  sim::OutcomeSource outcomes{CounterRng(seed)};
  std::size_t real_equal = 0;
  std::size_t ideal_equal = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    // Real world: one shared Bell pair.
    sim::Tableau real(2);
    real.h(0);
    real.cnot(0, 1);
    const auto a = sim::apply(real, sim::op::MeasureZ{0}, outcomes);
    const auto b = sim::apply(real, sim::op::MeasureZ{1}, outcomes);
    real_equal += a == b ? 1 : 0;
    // Simulator world: halves of two independent Bell pairs.
    sim::Tableau ideal(4);
    ideal.h(0);
    ideal.cnot(0, 1);
    ideal.h(2);
    ideal.cnot(2, 3);
    const auto c = sim::apply(ideal, sim::op::MeasureZ{0}, outcomes);
    const auto d = sim::apply(ideal, sim::op::MeasureZ{2}, outcomes);
    ideal_equal += c == d ? 1 : 0;
  }
  ImpossibilityStats s;
  s.trials = trials;
  s.real_equal_rate = static_cast<double>(real_equal) / static_cast<double>(trials);
  s.ideal_equal_rate = static_cast<double>(ideal_equal) / static_cast<double>(trials);
  s.advantage = s.real_equal_rate - s.ideal_equal_rate;
  const auto var = [trials](double p) { return p * (1.0 - p) / static_cast<double>(trials); };
  s.ci95 = 1.96 * std::sqrt(var(s.real_equal_rate) + var(s.ideal_equal_rate));
  return s;
}

} // namespace graphmerge
