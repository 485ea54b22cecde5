#pragma once

#include <algorithm>
#include <concepts>
#include <type_traits>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "graphmerge/errors.hpp"
#include "graphmerge/rng.hpp"

namespace graphmerge::sim {

// Gate and measurement vocabulary shared by both backends.
namespace op {
struct H { std::size_t q; };
struct S { std::size_t q; };
struct Sdg { std::size_t q; };
struct X { std::size_t q; };
struct Y { std::size_t q; };
struct Z { std::size_t q; };
struct Cnot { std::size_t control; std::size_t target; };
struct Cz { std::size_t a; std::size_t b; };
struct Swap { std::size_t a; std::size_t b; };
/// Outcome d: projection onto |d⟩.
struct MeasureZ { std::size_t q; };
/// Outcome a: projection onto H|a⟩.
struct MeasureX { std::size_t q; };
/// Outcome 0 for the +1 eigenstate of Y.
struct MeasureY { std::size_t q; };
/// Outcomes (b, c): projection onto |0c⟩ + (-1)^b |1c̄⟩, realized as
/// CNOT(q1→q2), H(q1), MeasureZ(q1) → b, MeasureZ(q2) → c.
struct BellMeasure { std::size_t q1; std::size_t q2; };
} // namespace op

using CliffordOp = std::variant<op::H, op::S, op::Sdg, op::X, op::Y, op::Z, op::Cnot, op::Cz,
                                op::Swap, op::MeasureZ, op::MeasureX, op::MeasureY,
                                op::BellMeasure>;

using Circuit = std::vector<CliffordOp>;

/// Number of outcome bits the op produces.
inline std::size_t outcome_bits(const CliffordOp& o) {
  if (std::holds_alternative<op::BellMeasure>(o)) {
    return 2;
  }
  if (std::holds_alternative<op::MeasureZ>(o) || std::holds_alternative<op::MeasureX>(o) ||
      std::holds_alternative<op::MeasureY>(o)) {
    return 1;
  }
  return 0;
}

inline std::size_t outcome_bits(const Circuit& c) {
  std::size_t total = 0;
  for (const auto& o : c) {
    total += outcome_bits(o);
  }
  return total;
}

/// Largest wire index used by the op, plus one.
inline std::size_t wire_span(const CliffordOp& o) {
  return std::visit(
      [](const auto& g) -> std::size_t {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, op::Cnot>) {
          return std::max(g.control, g.target) + 1;
        } else if constexpr (std::is_same_v<T, op::Cz> || std::is_same_v<T, op::Swap>) {
          return std::max(g.a, g.b) + 1;
        } else if constexpr (std::is_same_v<T, op::BellMeasure>) {
          return std::max(g.q1, g.q2) + 1;
        } else {
          return g.q + 1;
        }
      },
      o);
}

struct RandomOutcomes {
  std::uint64_t seed = 0;
};

struct ForcedOutcomes {
  std::vector<std::uint8_t> bits;
};

using OutcomePolicy = std::variant<RandomOutcomes, ForcedOutcomes>;

/// Stateful reader over an OutcomePolicy: hands out one bit per measurement.
class OutcomeSource {
public:
  /// Probabilities below this are treated as impossible branches.
  static constexpr double impossible_below = 1e-12;

  explicit OutcomeSource(const OutcomePolicy& policy) {
    if (const auto* r = std::get_if<RandomOutcomes>(&policy)) {
      rng_ = CounterRng(r->seed);
    } else {
      forced_ = std::get<ForcedOutcomes>(policy).bits;
      is_forced_ = true;
    }
  }

  explicit OutcomeSource(CounterRng rng) : rng_(rng) {}

  /// Draws the outcome of a measurement whose result is 1 with probability p_one.
  bool draw(double p_one) {
    ++consumed_;
    if (!is_forced_) {
      if (p_one <= impossible_below) {
        return false;
      }
      if (p_one >= 1.0 - impossible_below) {
        return true;
      }
      return rng_.uniform01() < p_one;
    }
    if (next_ >= forced_.size()) {
      throw PolicyExhausted("forced outcome list has only " + std::to_string(forced_.size()) +
                            " entries");
    }
    const bool bit = forced_[next_++] != 0;
    const double p = bit ? p_one : 1.0 - p_one;
    if (p <= impossible_below) {
      throw ForcedOutcomeImpossible("measurement " + std::to_string(consumed_ - 1) +
                                    " cannot yield " + std::to_string(bit));
    }
    return bit;
  }

  [[nodiscard]] std::size_t consumed() const noexcept { return consumed_; }
  [[nodiscard]] bool is_forced() const noexcept { return is_forced_; }

private:
  CounterRng rng_{0};
  std::vector<std::uint8_t> forced_;
  bool is_forced_ = false;
  std::size_t next_ = 0;
  std::size_t consumed_ = 0;
};

/// Primitive interface both simulators implement. Measurements other than Z
/// and all composite ops are built on top of it in circuit.hpp.
template <class B>
concept QuantumBackend = std::copyable<B> && requires(B b, const B cb, std::size_t q, bool bit) {
  { cb.num_qubits() } -> std::convertible_to<std::size_t>;
  b.h(q);
  b.s(q);
  b.sdg(q);
  b.x(q);
  b.y(q);
  b.z(q);
  b.cnot(q, q);
  b.cz(q, q);
  b.swap(q, q);
  { cb.probability_one(q) } -> std::convertible_to<double>;
  b.collapse(q, bit);
  b.append(cb);
};

inline std::string to_string(const CliffordOp& o) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        auto q1 = [](const char* name, std::size_t q) { return std::string(name) + "(" + std::to_string(q) + ")"; };
        auto q2 = [](const char* name, std::size_t a, std::size_t b) {
          return std::string(name) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
        };
        if constexpr (std::is_same_v<T, op::H>) return q1("H", g.q);
        else if constexpr (std::is_same_v<T, op::S>) return q1("S", g.q);
        else if constexpr (std::is_same_v<T, op::Sdg>) return q1("Sdg", g.q);
        else if constexpr (std::is_same_v<T, op::X>) return q1("X", g.q);
        else if constexpr (std::is_same_v<T, op::Y>) return q1("Y", g.q);
        else if constexpr (std::is_same_v<T, op::Z>) return q1("Z", g.q);
        else if constexpr (std::is_same_v<T, op::Cnot>) return q2("CNOT", g.control, g.target);
        else if constexpr (std::is_same_v<T, op::Cz>) return q2("CZ", g.a, g.b);
        else if constexpr (std::is_same_v<T, op::Swap>) return q2("SWAP", g.a, g.b);
        else if constexpr (std::is_same_v<T, op::MeasureZ>) return q1("MZ", g.q);
        else if constexpr (std::is_same_v<T, op::MeasureX>) return q1("MX", g.q);
        else if constexpr (std::is_same_v<T, op::MeasureY>) return q1("MY", g.q);
        else return q2("BELL", g.q1, g.q2);
      },
      o);
}

} // namespace graphmerge::sim
