#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphmerge/errors.hpp"
#include "graphmerge/gf2.hpp"

namespace graphmerge::sim {

using gf2::BitVec;

/// Hermitian Pauli operator ±P_0⊗…⊗P_{n-1} in (x, z) form: Y is x=z=1.
struct PauliString {
  BitVec x;
  BitVec z;
  bool negative = false;

  PauliString() = default;
  explicit PauliString(std::size_t n) : x(n), z(n) {}

  /// Parses "+XIZ", "-YY", "ZZI" (qubit 0 first).
  static PauliString parse(std::string_view text) {
    bool neg = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      neg = text.front() == '-';
      text.remove_prefix(1);
    }
    PauliString p(text.size());
    p.negative = neg;
    for (std::size_t q = 0; q < text.size(); ++q) {
      switch (text[q]) {
        case 'I': break;
        case 'X': p.x.set(q); break;
        case 'Z': p.z.set(q); break;
        case 'Y': p.x.set(q); p.z.set(q); break;
        default: throw ParseError("bad Pauli letter '" + std::string(1, text[q]) + "'");
      }
    }
    return p;
  }

  static PauliString single(std::size_t n, std::size_t q, char letter) {
    PauliString p(n);
    if (letter == 'X' || letter == 'Y') p.x.set(q);
    if (letter == 'Z' || letter == 'Y') p.z.set(q);
    return p;
  }

  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }

  [[nodiscard]] char letter(std::size_t q) const {
    const bool xb = x.get(q);
    const bool zb = z.get(q);
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }

  [[nodiscard]] bool commutes_with(const PauliString& o) const {
    return x.dot(o.z) == z.dot(o.x);
  }

  [[nodiscard]] bool is_identity() const { return x.none() && z.none(); }

  /// Power of i picked up by the product (lhs)(rhs), ignoring signs. Mod 4.
  static int product_phase(const PauliString& lhs, const PauliString& rhs) {
    const auto x1 = lhs.x.words();
    const auto z1 = lhs.z.words();
    const auto x2 = rhs.x.words();
    const auto z2 = rhs.z.words();
    int sum = 0;
    for (std::size_t w = 0; w < x1.size(); ++w) {
      const auto a = x1[w], b = z1[w], c = x2[w], d = z2[w];
      // XY, YZ, ZX give +i; the reverse orders give -i.
      const auto plus = (a & ~b & c & d) | (a & b & ~c & d) | (~a & b & c & ~d);
      const auto minus = (a & ~b & ~c & d) | (a & b & c & ~d) | (~a & b & c & d);
      sum += std::popcount(plus) - std::popcount(minus);
    }
    return ((sum % 4) + 4) % 4;
  }

  /// this ← rhs · this. Only the sign of a Hermitian result is kept.
  void left_multiply(const PauliString& rhs) {
    const int phase = (2 * static_cast<int>(negative) + 2 * static_cast<int>(rhs.negative) +
                       product_phase(rhs, *this)) % 4;
    negative = phase == 2;
    x ^= rhs.x;
    z ^= rhs.z;
  }

  [[nodiscard]] std::string to_string() const {
    std::string out(1, negative ? '-' : '+');
    for (std::size_t q = 0; q < size(); ++q) {
      out.push_back(letter(q));
    }
    return out;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

  friend std::ostream& operator<<(std::ostream& os, const PauliString& p) {
    return os << p.to_string();
  }
};

/// Column of the symplectic matrix: the x or z bit of one qubit.
struct PauliColumn {
  std::size_t qubit;
  bool is_z;
};

/// Reduced row echelon form of commuting Pauli rows under the given column
/// order. Signs are tracked through every row product. Returns the pivot
/// position (index into `order`) of each nonzero row; zero rows sink to the end.
inline std::vector<std::size_t> pauli_rref(std::vector<PauliString>& rows,
                                           std::span<const PauliColumn> order) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  auto bit = [](const PauliString& p, const PauliColumn& c) {
    return c.is_z ? p.z.get(c.qubit) : p.x.get(c.qubit);
  };
  for (std::size_t col = 0; col < order.size() && row < rows.size(); ++col) {
    std::size_t found = row;
    while (found < rows.size() && !bit(rows[found], order[col])) {
      ++found;
    }
    if (found == rows.size()) {
      continue;
    }
    std::swap(rows[row], rows[found]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != row && bit(rows[i], order[col])) {
        rows[i].left_multiply(rows[row]);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Aaronson-Gottesman stabilizer tableau: n destabilizer rows and n
/// stabilizer rows. Starts in |0…0⟩.
class Tableau {
public:
  Tableau() = default;

  explicit Tableau(std::size_t n) : n_(n) {
    destab_.reserve(n);
    stab_.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
      destab_.push_back(PauliString::single(n, q, 'X'));
      stab_.push_back(PauliString::single(n, q, 'Z'));
    }
  }

  /// Builds the canonical tableau of the state stabilized by `generators`.
  /// Generators must be n independent commuting Paulis on n qubits.
  static Tableau from_stabilizers(std::vector<PauliString> generators) {
    const std::size_t n = generators.size();
    for (const auto& g : generators) {
      if (g.size() != n) {
        throw DimensionMismatch("stabilizer of length " + std::to_string(g.size()) +
                                " for " + std::to_string(n) + " generators");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!generators[i].commutes_with(generators[j])) {
          throw InvalidParameters("stabilizer generators " + std::to_string(i) + " and " +
                                  std::to_string(j) + " anticommute");
        }
      }
    }
    const auto order = default_order(n);
    const auto pivots = pauli_rref(generators, order);
    if (pivots.size() != n) {
      throw InvalidParameters("stabilizer generators are not independent");
    }
    for (const auto& g : generators) {
      if (g.negative && g.is_identity()) {
        throw InvalidParameters("-I in the stabilizer group");
      }
    }

    Tableau t;
    t.n_ = n;
    t.stab_ = std::move(generators);
    t.destab_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = order[pivots[i]];
      // The dual Pauli anticommutes only with the row owning this pivot.
      t.destab_.push_back(PauliString::single(n, c.qubit, c.is_z ? 'X' : 'Z'));
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        if (!t.destab_[j].commutes_with(t.destab_[i])) {
          t.destab_[j].left_multiply(t.stab_[i]);
        }
      }
      t.destab_[j].negative = false;
    }
    return t;
  }

  [[nodiscard]] std::size_t num_qubits() const noexcept { return n_; }
  [[nodiscard]] const std::vector<PauliString>& stabilizers() const noexcept { return stab_; }
  [[nodiscard]] const std::vector<PauliString>& destabilizers() const noexcept { return destab_; }

  void h(std::size_t q) {
    check(q);
    for_rows([q](PauliString& p) {
      const bool xb = p.x.get(q);
      const bool zb = p.z.get(q);
      p.negative ^= xb && zb;
      p.x.set(q, zb);
      p.z.set(q, xb);
    });
  }

  void s(std::size_t q) {
    check(q);
    for_rows([q](PauliString& p) {
      const bool xb = p.x.get(q);
      const bool zb = p.z.get(q);
      p.negative ^= xb && zb;
      p.z.set(q, zb != xb);
    });
  }

  void sdg(std::size_t q) {
    check(q);
    for_rows([q](PauliString& p) {
      const bool xb = p.x.get(q);
      const bool zb = p.z.get(q);
      p.negative ^= xb && !zb;
      p.z.set(q, zb != xb);
    });
  }

  void x(std::size_t q) {
    check(q);
    for_rows([q](PauliString& p) { p.negative ^= p.z.get(q); });
  }

  void y(std::size_t q) {
    check(q);
    for_rows([q](PauliString& p) { p.negative ^= p.x.get(q) != p.z.get(q); });
  }

  void z(std::size_t q) {
    check(q);
    for_rows([q](PauliString& p) { p.negative ^= p.x.get(q); });
  }

  void cnot(std::size_t c, std::size_t t) {
    check_pair(c, t);
    for_rows([c, t](PauliString& p) {
      const bool xc = p.x.get(c), zc = p.z.get(c), xt = p.x.get(t), zt = p.z.get(t);
      p.negative ^= xc && zt && (xt == zc);
      p.x.set(t, xt != xc);
      p.z.set(c, zc != zt);
    });
  }

  void cz(std::size_t a, std::size_t b) {
    check_pair(a, b);
    for_rows([a, b](PauliString& p) {
      const bool xa = p.x.get(a), za = p.z.get(a), xb = p.x.get(b), zb = p.z.get(b);
      p.negative ^= xa && xb && (za != zb);
      p.z.set(a, za != xb);
      p.z.set(b, zb != xa);
    });
  }

  void swap(std::size_t a, std::size_t b) {
    check_pair(a, b);
    for_rows([a, b](PauliString& p) {
      const bool xa = p.x.get(a), za = p.z.get(a);
      p.x.set(a, p.x.get(b));
      p.z.set(a, p.z.get(b));
      p.x.set(b, xa);
      p.z.set(b, za);
    });
  }

  /// Probability that a Z measurement of q yields 1: 0, 1/2 or 1.
  [[nodiscard]] double probability_one(std::size_t q) const {
    check(q);
    if (random_pivot(q)) {
      return 0.5;
    }
    return deterministic_outcome(q) ? 1.0 : 0.0;
  }

  /// Projects qubit q onto |bit⟩.
  void collapse(std::size_t q, bool bit) {
    check(q);
    if (const auto p = random_pivot(q)) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (i != *p && stab_[i].x.get(q)) {
          stab_[i].left_multiply(stab_[*p]);
        }
        if (i != *p && destab_[i].x.get(q)) {
          destab_[i].left_multiply(stab_[*p]);
        }
      }
      destab_[*p] = stab_[*p];
      stab_[*p] = PauliString::single(n_, q, 'Z');
      stab_[*p].negative = bit;
      return;
    }
    if (deterministic_outcome(q) != bit) {
      throw ForcedOutcomeImpossible("qubit " + std::to_string(q) + " is deterministically " +
                                    std::to_string(!bit));
    }
  }

  /// ⟨P⟩ on the current state: +1, -1 or 0.
  [[nodiscard]] int expectation(const PauliString& pauli) const {
    if (pauli.size() != n_) {
      throw DimensionMismatch("Pauli of length " + std::to_string(pauli.size()) + " on " +
                              std::to_string(n_) + " qubits");
    }
    for (const auto& s : stab_) {
      if (!s.commutes_with(pauli)) {
        return 0;
      }
    }
    PauliString acc(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (!destab_[i].commutes_with(pauli)) {
        acc.left_multiply(stab_[i]);
      }
    }
    return acc.negative == pauli.negative ? 1 : -1;
  }

  /// Tensor product: `other`'s qubits are placed after this tableau's.
  void append(const Tableau& other) {
    const std::size_t n = n_ + other.n_;
    auto widen = [n](const PauliString& p, std::size_t offset) {
      PauliString out(n);
      out.negative = p.negative;
      for (std::size_t q = 0; q < p.size(); ++q) {
        out.x.set(offset + q, p.x.get(q));
        out.z.set(offset + q, p.z.get(q));
      }
      return out;
    };
    std::vector<PauliString> d;
    std::vector<PauliString> s;
    d.reserve(n);
    s.reserve(n);
    for (const auto& p : destab_) d.push_back(widen(p, 0));
    for (const auto& p : other.destab_) d.push_back(widen(p, n_));
    for (const auto& p : stab_) s.push_back(widen(p, 0));
    for (const auto& p : other.stab_) s.push_back(widen(p, n_));
    destab_ = std::move(d);
    stab_ = std::move(s);
    n_ = n;
  }

  /// Unique representative of the stabilized state.
  [[nodiscard]] Tableau canonical() const { return from_stabilizers(stab_); }

  /// State of the `keep` qubits (in the listed order) when that state is pure
  /// and unentangled from the rest; nullopt otherwise.
  [[nodiscard]] std::optional<Tableau> reduced_state(std::span<const std::size_t> keep) const {
    std::vector<bool> kept(n_, false);
    for (auto q : keep) {
      check(q);
      if (kept[q]) {
        throw InvalidParameters("qubit " + std::to_string(q) + " listed twice");
      }
      kept[q] = true;
    }
    std::vector<PauliColumn> order;
    for (std::size_t q = 0; q < n_; ++q) {
      if (!kept[q]) {
        order.push_back({q, false});
        order.push_back({q, true});
      }
    }
    const std::size_t traced_cols = order.size();
    for (auto q : keep) {
      order.push_back({q, false});
      order.push_back({q, true});
    }
    auto rows = stab_;
    const auto pivots = pauli_rref(rows, order);
    std::vector<PauliString> local;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      if (pivots[i] < traced_cols) {
        continue;
      }
      PauliString p(keep.size());
      p.negative = rows[i].negative;
      for (std::size_t k = 0; k < keep.size(); ++k) {
        p.x.set(k, rows[i].x.get(keep[k]));
        p.z.set(k, rows[i].z.get(keep[k]));
      }
      local.push_back(std::move(p));
    }
    if (local.size() != keep.size()) {
      return std::nullopt;
    }
    return from_stabilizers(std::move(local));
  }

  /// Raw row equality. Use same_state() to compare states.
  friend bool operator==(const Tableau&, const Tableau&) = default;

  [[nodiscard]] std::string to_string() const {
    std::string out;
    for (const auto& p : destab_) out += "D " + p.to_string() + "\n";
    for (const auto& p : stab_) out += "S " + p.to_string() + "\n";
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const Tableau& t) { return os << t.to_string(); }

private:
  static std::vector<PauliColumn> default_order(std::size_t n) {
    std::vector<PauliColumn> order;
    order.reserve(2 * n);
    for (std::size_t q = 0; q < n; ++q) order.push_back({q, false});
    for (std::size_t q = 0; q < n; ++q) order.push_back({q, true});
    return order;
  }

  template <class F>
  void for_rows(F&& f) {
    for (auto& p : destab_) f(p);
    for (auto& p : stab_) f(p);
  }

  void check(std::size_t q) const {
    if (q >= n_) {
      throw OutOfRange("qubit " + std::to_string(q) + " on " + std::to_string(n_) + " qubits");
    }
  }

  void check_pair(std::size_t a, std::size_t b) const {
    check(a);
    check(b);
    if (a == b) {
      throw InvalidParameters("two-qubit gate on a single qubit " + std::to_string(a));
    }
  }

  [[nodiscard]] std::optional<std::size_t> random_pivot(std::size_t q) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (stab_[i].x.get(q)) {
        return i;
      }
    }
    return std::nullopt;
  }

  [[nodiscard]] bool deterministic_outcome(std::size_t q) const {
    PauliString acc(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (destab_[i].x.get(q)) {
        acc.left_multiply(stab_[i]);
      }
    }
    return acc.negative;
  }

  std::size_t n_ = 0;
  std::vector<PauliString> destab_;
  std::vector<PauliString> stab_;
};

inline Tableau canonical_form(const Tableau& t) { return t.canonical(); }

inline bool same_state(const Tableau& a, const Tableau& b) {
  return a.num_qubits() == b.num_qubits() && a.canonical().stabilizers() == b.canonical().stabilizers();
}

} // namespace graphmerge::sim
