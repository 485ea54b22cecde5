#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphmerge/errors.hpp"

namespace graphmerge::sim {

/// Dense amplitude vector. Qubit q is bit q of the basis index.
class StateVector {
public:
  using amplitude = std::complex<double>;

  static constexpr std::size_t default_cap = 20;
  /// Cap used when none is passed. Starts at default_cap.
  static std::size_t& process_cap() noexcept {
    static std::size_t cap = default_cap;
    return cap;
  }
  /// Branches with probability below this are rejected by collapse().
  static constexpr double impossible_below = 1e-12;

  StateVector() : StateVector(0) {}

  explicit StateVector(std::size_t n, std::size_t cap = process_cap()) : n_(n), cap_(cap) {
    require_cap(n);
    amps_.assign(std::size_t{1} << n, amplitude{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static StateVector basis(std::size_t n, std::uint64_t index, std::size_t cap = process_cap()) {
    StateVector sv(n, cap);
    if (index >= sv.amps_.size()) {
      throw OutOfRange("basis index " + std::to_string(index));
    }
    sv.amps_[0] = 0.0;
    sv.amps_[index] = 1.0;
    return sv;
  }

  /// Takes the amplitudes as given; they are not renormalized.
  static StateVector from_amplitudes(std::vector<amplitude> amps, std::size_t cap = process_cap()) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < amps.size()) {
      ++n;
    }
    if ((std::size_t{1} << n) != amps.size()) {
      throw DimensionMismatch(std::to_string(amps.size()) + " amplitudes is not a power of two");
    }
    StateVector sv(0, cap);
    sv.require_cap(n);
    sv.n_ = n;
    sv.amps_ = std::move(amps);
    return sv;
  }

  [[nodiscard]] std::size_t num_qubits() const noexcept { return n_; }
  [[nodiscard]] std::size_t cap() const noexcept { return cap_; }
  [[nodiscard]] std::span<const amplitude> amplitudes() const noexcept { return amps_; }
  [[nodiscard]] amplitude amplitude_at(std::uint64_t index) const { return amps_.at(index); }

  void h(std::size_t q) {
    const auto m = mask(q);
    const double k = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & m) == 0) {
        const auto a = amps_[i];
        const auto b = amps_[i | m];
        amps_[i] = k * (a + b);
        amps_[i | m] = k * (a - b);
      }
    }
  }

  void s(std::size_t q) { phase_on_one(q, {0.0, 1.0}); }
  void sdg(std::size_t q) { phase_on_one(q, {0.0, -1.0}); }
  void z(std::size_t q) { phase_on_one(q, {-1.0, 0.0}); }

  void x(std::size_t q) {
    const auto m = mask(q);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & m) == 0) {
        std::swap(amps_[i], amps_[i | m]);
      }
    }
  }

  void y(std::size_t q) {
    // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩.
    const auto m = mask(q);
    const amplitude i_unit{0.0, 1.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & m) == 0) {
        const auto a0 = amps_[i];
        const auto a1 = amps_[i | m];
        amps_[i] = -i_unit * a1;
        amps_[i | m] = i_unit * a0;
      }
    }
  }

  void cnot(std::size_t c, std::size_t t) {
    const auto mc = mask(c);
    const auto mt = mask(t);
    require_distinct(c, t);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & mc) != 0 && (i & mt) == 0) {
        std::swap(amps_[i], amps_[i | mt]);
      }
    }
  }

  void cz(std::size_t a, std::size_t b) {
    const auto both = mask(a) | mask(b);
    require_distinct(a, b);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & both) == both) {
        amps_[i] = -amps_[i];
      }
    }
  }

  void swap(std::size_t a, std::size_t b) {
    const auto ma = mask(a);
    const auto mb = mask(b);
    require_distinct(a, b);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & ma) != 0 && (i & mb) == 0) {
        std::swap(amps_[i], amps_[(i & ~ma) | mb]);
      }
    }
  }

  [[nodiscard]] double probability_one(std::size_t q) const {
    const auto m = mask(q);
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & m) != 0) {
        p += std::norm(amps_[i]);
      }
    }
    return p / norm_squared();
  }

  /// Projects qubit q onto |bit⟩ and renormalizes.
  void collapse(std::size_t q, bool bit) {
    const double p = bit ? probability_one(q) : 1.0 - probability_one(q);
    if (p < impossible_below) {
      throw ForcedOutcomeImpossible("qubit " + std::to_string(q) + " has probability " +
                                    std::to_string(p) + " of yielding " + std::to_string(bit));
    }
    const auto m = mask(q);
    const double scale = 1.0 / std::sqrt(p * norm_squared());
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (((i & m) != 0) == bit) {
        amps_[i] *= scale;
      } else {
        amps_[i] = 0.0;
      }
    }
  }

  /// Tensor product: `other`'s qubits are placed after this state's.
  void append(const StateVector& other) {
    require_cap(n_ + other.n_);
    std::vector<amplitude> out(amps_.size() * other.amps_.size());
    for (std::size_t j = 0; j < other.amps_.size(); ++j) {
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        out[i | (j << n_)] = amps_[i] * other.amps_[j];
      }
    }
    amps_ = std::move(out);
    n_ += other.n_;
  }

  [[nodiscard]] double norm_squared() const {
    double total = 0.0;
    for (const auto& a : amps_) {
      total += std::norm(a);
    }
    return total;
  }

  /// ⟨this|other⟩.
  [[nodiscard]] amplitude inner(const StateVector& other) const {
    if (other.n_ != n_) {
      throw DimensionMismatch("inner product of " + std::to_string(n_) + " and " +
                              std::to_string(other.n_) + " qubit states");
    }
    amplitude acc{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      acc += std::conj(amps_[i]) * other.amps_[i];
    }
    return acc;
  }

private:
  void require_cap(std::size_t n) const {
    if (n > cap_) {
      throw CapacityExceeded(std::to_string(n) + " qubits exceeds the state-vector cap of " +
                             std::to_string(cap_));
    }
  }

  [[nodiscard]] std::size_t mask(std::size_t q) const {
    if (q >= n_) {
      throw OutOfRange("qubit " + std::to_string(q) + " on " + std::to_string(n_) + " qubits");
    }
    return std::size_t{1} << q;
  }

  static void require_distinct(std::size_t a, std::size_t b) {
    if (a == b) {
      throw InvalidParameters("two-qubit gate on a single qubit " + std::to_string(a));
    }
  }

  void phase_on_one(std::size_t q, amplitude phase) {
    const auto m = mask(q);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & m) != 0) {
        amps_[i] *= phase;
      }
    }
  }

  std::size_t n_ = 0;
  std::size_t cap_ = process_cap();
  std::vector<amplitude> amps_;
};

/// |⟨a|b⟩| for normalized states.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::abs(a.inner(b)) / std::sqrt(a.norm_squared() * b.norm_squared());
}

/// Square root of ⟨target|ρ_keep|target⟩, where ρ_keep is the state of the
/// listed qubits (target qubit k is state qubit keep[k]).
inline double fidelity_reduced(const StateVector& state, std::span<const std::size_t> keep,
                               const StateVector& target) {
  const std::size_t n = state.num_qubits();
  if (target.num_qubits() != keep.size()) {
    throw DimensionMismatch("target has " + std::to_string(target.num_qubits()) +
                            " qubits, keep lists " + std::to_string(keep.size()));
  }
  std::vector<bool> kept(n, false);
  for (auto q : keep) {
    if (q >= n || kept[q]) {
      throw InvalidParameters("bad keep list entry " + std::to_string(q));
    }
    kept[q] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t q = 0; q < n; ++q) {
    if (!kept[q]) {
      rest.push_back(q);
    }
  }
  const auto amps = state.amplitudes();
  const auto tgt = target.amplitudes();
  double total = 0.0;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << rest.size()); ++r) {
    std::uint64_t base = 0;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if ((r >> j) & 1U) base |= std::uint64_t{1} << rest[j];
    }
    StateVector::amplitude overlap{0.0, 0.0};
    for (std::uint64_t k = 0; k < tgt.size(); ++k) {
      std::uint64_t idx = base;
      for (std::size_t j = 0; j < keep.size(); ++j) {
        if ((k >> j) & 1U) idx |= std::uint64_t{1} << keep[j];
      }
      overlap += std::conj(tgt[k]) * amps[idx];
    }
    total += std::norm(overlap);
  }
  return std::sqrt(total / (state.norm_squared() * target.norm_squared()));
}

} // namespace graphmerge::sim
