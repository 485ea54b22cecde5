#pragma once

// Dense GF(2) linear algebra: packed bit vectors and matrices, rank,
// inversion, the pivot decomposition Γ = V·[[I_r, R], [0, 0]]·U, and
// synthesis of invertible matrices into CNOT/SWAP circuits.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "graphmerge/errors.hpp"
#include "graphmerge/rng.hpp"

namespace graphmerge::gf2 {

class BitVec {
public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  BitVec() = default;
  explicit BitVec(std::size_t len) : len_(len), words_(word_count(len), 0) {}

  static BitVec zeros(std::size_t len) { return BitVec(len); }

  static BitVec unit(std::size_t len, std::size_t i) {
    BitVec v(len);
    v.set(i);
    return v;
  }

  /// Parses "0101"; character i is entry i.
  static BitVec from_string(std::string_view bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i);
      } else if (bits[i] != '0') {
        throw ParseError("bit string may contain only '0' and '1'");
      }
    }
    return v;
  }

  static BitVec from_bits(std::initializer_list<int> bits) {
    BitVec v(bits.size());
    std::size_t i = 0;
    for (int b : bits) {
      v.set(i++, b != 0);
    }
    return v;
  }

  /// Low `len` bits of `value`, entry i = bit i.
  static BitVec from_word(std::size_t len, std::uint64_t value) {
    BitVec v(len);
    for (std::size_t i = 0; i < len && i < word_bits; ++i) {
      v.set(i, ((value >> i) & 1U) != 0);
    }
    return v;
  }

  static BitVec random(std::size_t len, CounterRng& rng) {
    BitVec v(len);
    for (auto& w : v.words_) {
      w = rng();
    }
    v.trim();
    return v;
  }

  [[nodiscard]] std::size_t size() const noexcept { return len_; }
  [[nodiscard]] bool empty() const noexcept { return len_ == 0; }

  [[nodiscard]] bool get(std::size_t i) const {
    check_index(i);
    return ((words_[i / word_bits] >> (i % word_bits)) & 1U) != 0;
  }
  [[nodiscard]] bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool value = true) {
    check_index(i);
    const word_type mask = word_type{1} << (i % word_bits);
    if (value) {
      words_[i / word_bits] |= mask;
    } else {
      words_[i / word_bits] &= ~mask;
    }
  }

  void flip(std::size_t i) {
    check_index(i);
    words_[i / word_bits] ^= word_type{1} << (i % word_bits);
  }

  BitVec& operator^=(const BitVec& other) {
    require_same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      words_[w] ^= other.words_[w];
    }
    return *this;
  }

  BitVec& operator&=(const BitVec& other) {
    require_same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      words_[w] &= other.words_[w];
    }
    return *this;
  }

  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }

  friend bool operator==(const BitVec& a, const BitVec& b) = default;

  /// Inner product over GF(2).
  [[nodiscard]] bool dot(const BitVec& other) const {
    require_same_length(other);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      acc ^= words_[w] & other.words_[w];
    }
    return (std::popcount(acc) & 1) != 0;
  }

  [[nodiscard]] std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) {
      c += static_cast<std::size_t>(std::popcount(w));
    }
    return c;
  }

  [[nodiscard]] bool any() const noexcept {
    return std::any_of(words_.begin(), words_.end(), [](word_type w) { return w != 0; });
  }
  [[nodiscard]] bool none() const noexcept { return !any(); }

  [[nodiscard]] BitVec slice(std::size_t begin, std::size_t length) const {
    if (begin + length > len_) {
      throw DimensionMismatch("slice exceeds vector length");
    }
    BitVec out(length);
    for (std::size_t i = 0; i < length; ++i) {
      out.set(i, get(begin + i));
    }
    return out;
  }

  /// [this ; tail]
  [[nodiscard]] BitVec concat(const BitVec& tail) const {
    BitVec out(len_ + tail.len_);
    for (std::size_t i = 0; i < len_; ++i) {
      out.set(i, get(i));
    }
    for (std::size_t i = 0; i < tail.len_; ++i) {
      out.set(len_ + i, tail.get(i));
    }
    return out;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i) {
      if (get(i)) {
        s[i] = '1';
      }
    }
    return s;
  }

  [[nodiscard]] std::span<const word_type> words() const noexcept { return words_; }

  friend std::ostream& operator<<(std::ostream& os, const BitVec& v) {
    return os << v.to_string();
  }

private:
  static std::size_t word_count(std::size_t len) { return (len + word_bits - 1) / word_bits; }

  void check_index(std::size_t i) const {
    if (i >= len_) {
      throw std::out_of_range("BitVec index " + std::to_string(i) + " out of range for length " +
                              std::to_string(len_));
    }
  }

  void require_same_length(const BitVec& other) const {
    if (other.len_ != len_) {
      throw DimensionMismatch("bit vectors of length " + std::to_string(len_) + " and " +
                              std::to_string(other.len_));
    }
  }

  void trim() {
    if (len_ % word_bits != 0 && !words_.empty()) {
      words_.back() &= (word_type{1} << (len_ % word_bits)) - 1;
    }
  }

  std::size_t len_ = 0;
  std::vector<word_type> words_;
};

/// Row-major packed matrix over GF(2). Zero-sized dimensions are legal.
class BitMat {
public:
  BitMat() = default;
  BitMat(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows, BitVec(cols)) {}

  static BitMat zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  static BitMat identity(std::size_t n) {
    BitMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m.set(i, i);
    }
    return m;
  }

  /// Rows given as '0'/'1' strings of equal length.
  static BitMat from_rows(std::initializer_list<std::string_view> rows) {
    return from_rows(std::vector<std::string_view>(rows));
  }

  static BitMat from_rows(const std::vector<std::string_view>& rows) {
    const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
    BitMat m(rows.size(), cols);
    std::size_t r = 0;
    for (auto row : rows) {
      if (row.size() != cols) {
        throw ParseError("ragged matrix rows");
      }
      m.data_[r++] = BitVec::from_string(row);
    }
    return m;
  }

  static BitMat random(std::size_t rows, std::size_t cols, CounterRng& rng) {
    BitMat m(rows, cols);
    for (auto& row : m.data_) {
      row = BitVec::random(cols, rng);
    }
    return m;
  }

  /// Random matrix with the given dimensions drawn until it is invertible.
  static BitMat random_invertible(std::size_t n, CounterRng& rng);

  [[nodiscard]] std::size_t rows() const noexcept { return data_.size(); }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows() == cols_; }

  [[nodiscard]] bool get(std::size_t r, std::size_t c) const { return row_at(r).get(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { row_at(r).set(c, value); }

  [[nodiscard]] const BitVec& row(std::size_t r) const { return row_at(r); }
  [[nodiscard]] BitVec column(std::size_t c) const {
    BitVec out(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
      out.set(r, get(r, c));
    }
    return out;
  }

  void add_row(std::size_t target, std::size_t source) { row_at(target) ^= row_at(source); }
  void swap_rows(std::size_t a, std::size_t b) { std::swap(row_at(a), row_at(b)); }
  void add_col(std::size_t target, std::size_t source) {
    for (auto& row : data_) {
      if (row.get(source)) {
        row.flip(target);
      }
    }
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (auto& row : data_) {
      const bool va = row.get(a);
      row.set(a, row.get(b));
      row.set(b, va);
    }
  }

  [[nodiscard]] BitMat transpose() const {
    BitMat t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        if (get(r, c)) {
          t.set(c, r);
        }
      }
    }
    return t;
  }

  [[nodiscard]] BitVec operator*(const BitVec& v) const {
    if (v.size() != cols_) {
      throw DimensionMismatch("matrix has " + std::to_string(cols_) + " columns, vector has length " +
                              std::to_string(v.size()));
    }
    BitVec out(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
      out.set(r, data_[r].dot(v));
    }
    return out;
  }

  [[nodiscard]] BitMat operator*(const BitMat& other) const {
    if (other.rows() != cols_) {
      throw DimensionMismatch("cannot multiply " + shape() + " by " + other.shape());
    }
    BitMat out(rows(), other.cols());
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t k = 0; k < cols_; ++k) {
        if (get(r, k)) {
          out.data_[r] ^= other.data_[k];
        }
      }
    }
    return out;
  }

  BitMat& operator^=(const BitMat& other) {
    if (other.rows() != rows() || other.cols() != cols_) {
      throw DimensionMismatch("cannot add " + shape() + " and " + other.shape());
    }
    for (std::size_t r = 0; r < rows(); ++r) {
      data_[r] ^= other.data_[r];
    }
    return *this;
  }
  friend BitMat operator^(BitMat a, const BitMat& b) { return a ^= b; }

  friend bool operator==(const BitMat& a, const BitMat& b) {
    return a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  [[nodiscard]] BitMat submatrix(std::size_t row0, std::size_t col0, std::size_t nrows,
                                 std::size_t ncols) const {
    if (row0 + nrows > rows() || col0 + ncols > cols_) {
      throw DimensionMismatch("submatrix exceeds " + shape());
    }
    BitMat out(nrows, ncols);
    for (std::size_t r = 0; r < nrows; ++r) {
      for (std::size_t c = 0; c < ncols; ++c) {
        out.set(r, c, get(row0 + r, col0 + c));
      }
    }
    return out;
  }

  /// Picks rows and columns by index: out[i][j] = this[rows[i]][cols[j]].
  [[nodiscard]] BitMat select(std::span<const std::size_t> row_idx,
                              std::span<const std::size_t> col_idx) const {
    BitMat out(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
      for (std::size_t j = 0; j < col_idx.size(); ++j) {
        out.set(i, j, get(row_idx[i], col_idx[j]));
      }
    }
    return out;
  }

  [[nodiscard]] bool is_identity() const { return is_square() && *this == identity(rows()); }
  [[nodiscard]] bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BitVec& r) { return r.none(); });
  }

  [[nodiscard]] std::string shape() const {
    return std::to_string(rows()) + "x" + std::to_string(cols_);
  }

  /// Row strings, e.g. {"10", "01"}.
  friend std::ostream& operator<<(std::ostream& os, const BitMat& m) {
    os << '[';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      os << (r ? " " : "") << m.row(r);
    }
    return os << ']';
  }

  [[nodiscard]] std::vector<std::string> row_strings() const {
    std::vector<std::string> out;
    out.reserve(rows());
    for (const auto& r : data_) {
      out.push_back(r.to_string());
    }
    return out;
  }

private:
  [[nodiscard]] const BitVec& row_at(std::size_t r) const {
    if (r >= rows()) {
      throw std::out_of_range("row " + std::to_string(r) + " out of range for " + shape());
    }
    return data_[r];
  }
  BitVec& row_at(std::size_t r) {
    if (r >= rows()) {
      throw std::out_of_range("row " + std::to_string(r) + " out of range for " + shape());
    }
    return data_[r];
  }

  std::size_t cols_ = 0;
  std::vector<BitVec> data_;
};

/// [[top_left, top_right], [bottom_left, bottom_right]] with conforming blocks.
inline BitMat block(const BitMat& tl, const BitMat& tr, const BitMat& bl, const BitMat& br) {
  if (tl.rows() != tr.rows() || bl.rows() != br.rows() || tl.cols() != bl.cols() ||
      tr.cols() != br.cols()) {
    throw DimensionMismatch("non-conforming blocks");
  }
  BitMat out(tl.rows() + bl.rows(), tl.cols() + tr.cols());
  auto paste = [&out](const BitMat& b, std::size_t r0, std::size_t c0) {
    for (std::size_t r = 0; r < b.rows(); ++r) {
      for (std::size_t c = 0; c < b.cols(); ++c) {
        if (b.get(r, c)) {
          out.set(r0 + r, c0 + c);
        }
      }
    }
  };
  paste(tl, 0, 0);
  paste(tr, 0, tl.cols());
  paste(bl, tl.rows(), 0);
  paste(br, tl.rows(), tl.cols());
  return out;
}

inline std::size_t rank(BitMat m) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && !m.get(p, col)) {
      ++p;
    }
    if (p == m.rows()) {
      continue;
    }
    m.swap_rows(row, p);
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      if (m.get(i, col)) {
        m.add_row(i, row);
      }
    }
    ++row;
  }
  return row;
}

/// Throws SingularMatrix when m is not invertible.
inline BitMat invert(const BitMat& m) {
  if (!m.is_square()) {
    throw DimensionMismatch("cannot invert non-square " + m.shape() + " matrix");
  }
  const std::size_t n = m.rows();
  BitMat work = m;
  BitMat inv = BitMat::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && !work.get(p, col)) {
      ++p;
    }
    if (p == n) {
      throw SingularMatrix("rank of " + m.shape() + " matrix is below its dimension");
    }
    if (p != col) {
      work.swap_rows(p, col);
      inv.swap_rows(p, col);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i != col && work.get(i, col)) {
        work.add_row(i, col);
        inv.add_row(i, col);
      }
    }
  }
  return inv;
}

inline BitMat BitMat::random_invertible(std::size_t n, CounterRng& rng) {
  while (true) {
    auto m = random(n, n, rng);
    if (rank(m) == n) {
      return m;
    }
  }
}

/// gamma = v · [[I_r, r_block], [0, 0]] · u
struct PivotDecomposition {
  BitMat u;       // n×n, invertible (here: a column permutation)
  BitMat v;       // m×m, invertible
  std::size_t r = 0;
  BitMat r_block; // r×(n−r)

  /// The middle factor [[I_r, R], [0, 0]] (m×n).
  [[nodiscard]] BitMat middle(std::size_t m_rows) const {
    const std::size_t n = u.rows();
    return block(BitMat::identity(r), r_block, BitMat::zero(m_rows - r, r),
                 BitMat::zero(m_rows - r, n - r));
  }

  [[nodiscard]] BitMat reconstruct() const { return v * middle(v.rows()) * u; }

  friend bool operator==(const PivotDecomposition&, const PivotDecomposition&) = default;
};

/// Gaussian elimination with a fixed pivot rule: columns are scanned left to
/// right and the first row at or below the current pivot row holding a 1 is
/// taken. Pivot columns are then moved to the front, keeping the relative
/// order of both groups.
inline PivotDecomposition pivot_decompose(const BitMat& gamma) {
  const std::size_t m = gamma.rows();
  const std::size_t n = gamma.cols();
  BitMat work = gamma;
  // Invariant: gamma = v · work. Row ops on work are mirrored as column ops on v.
  BitMat v = BitMat::identity(m);
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> free_cols;

  std::size_t row = 0;
  for (std::size_t col = 0; col < n; ++col) {
    if (row == m) {
      free_cols.push_back(col);
      continue;
    }
    std::size_t p = row;
    while (p < m && !work.get(p, col)) {
      ++p;
    }
    if (p == m) {
      free_cols.push_back(col);
      continue;
    }
    if (p != row) {
      work.swap_rows(p, row);
      v.swap_cols(p, row);
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i != row && work.get(i, col)) {
        work.add_row(i, row);
        v.add_col(row, i);
      }
    }
    pivots.push_back(col);
    ++row;
  }

  PivotDecomposition out;
  out.r = pivots.size();
  std::vector<std::size_t> order = pivots;
  order.insert(order.end(), free_cols.begin(), free_cols.end());
  // u sends x to (x[order[0]], x[order[1]], ...).
  out.u = BitMat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.u.set(j, order[j]);
  }
  out.r_block = BitMat(out.r, n - out.r);
  for (std::size_t i = 0; i < out.r; ++i) {
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
      out.r_block.set(i, j, work.get(i, free_cols[j]));
    }
  }
  out.v = std::move(v);
  return out;
}

// ---------------------------------------------------------------------------
// CNOT/SWAP synthesis

struct Cnot {
  std::size_t control;
  std::size_t target;
  friend bool operator==(const Cnot&, const Cnot&) = default;
};

struct Swap {
  std::size_t a;
  std::size_t b;
  friend bool operator==(const Swap&, const Swap&) = default;
};

using LinearGate = std::variant<Cnot, Swap>;

/// Reversible linear circuit acting on basis states |x⟩ ↦ |A·x⟩.
struct CnotSwapCircuit {
  std::size_t wires = 0;
  std::vector<LinearGate> gates;

  [[nodiscard]] BitVec apply(BitVec x) const {
    if (x.size() != wires) {
      throw DimensionMismatch("circuit on " + std::to_string(wires) + " wires applied to length " +
                              std::to_string(x.size()));
    }
    for (const auto& g : gates) {
      if (const auto* c = std::get_if<Cnot>(&g)) {
        if (x.get(c->control)) {
          x.flip(c->target);
        }
      } else {
        const auto& s = std::get<Swap>(g);
        const bool va = x.get(s.a);
        x.set(s.a, x.get(s.b));
        x.set(s.b, va);
      }
    }
    return x;
  }

  /// Matrix whose column i is the image of e_i.
  [[nodiscard]] BitMat matrix() const {
    BitMat out(wires, wires);
    for (std::size_t i = 0; i < wires; ++i) {
      const auto img = apply(BitVec::unit(wires, i));
      for (std::size_t r = 0; r < wires; ++r) {
        out.set(r, i, img.get(r));
      }
    }
    return out;
  }
};

/// Gauss-Jordan reduction of u to I; each elementary row op is self-inverse,
/// so replaying the ops in reverse order realizes u.
inline CnotSwapCircuit synthesize_cnot_swap(const BitMat& u) {
  if (!u.is_square()) {
    throw DimensionMismatch("cannot synthesize non-square " + u.shape() + " matrix");
  }
  const std::size_t n = u.rows();
  BitMat work = u;
  std::vector<LinearGate> ops;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && !work.get(p, col)) {
      ++p;
    }
    if (p == n) {
      throw SingularMatrix("cannot synthesize a singular " + u.shape() + " matrix");
    }
    if (p != col) {
      work.swap_rows(p, col);
      ops.emplace_back(Swap{col, p});
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i != col && work.get(i, col)) {
        work.add_row(i, col); // row_i += row_col is CNOT(col -> i)
        ops.emplace_back(Cnot{col, i});
      }
    }
  }
  std::reverse(ops.begin(), ops.end());
  return {n, std::move(ops)};
}

// ---------------------------------------------------------------------------
// Text format: "rows cols" then one '0'/'1' token per row.

inline BitMat read_matrix(std::istream& in) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols)) {
    throw ParseError("expected header 'rows cols'");
  }
  BitMat m(rows, cols);
  if (cols == 0) {
    return m;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::string token;
    if (!(in >> token)) {
      throw ParseError("expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
    }
    if (token.size() != cols) {
      throw ParseError("row " + std::to_string(r) + " has " + std::to_string(token.size()) +
                       " entries, expected " + std::to_string(cols));
    }
    const auto v = BitVec::from_string(token);
    for (std::size_t c = 0; c < cols; ++c) {
      m.set(r, c, v.get(c));
    }
  }
  return m;
}

inline BitMat parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_matrix(in);
}

inline void write_matrix(std::ostream& out, const BitMat& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (const auto& r : m.row_strings()) {
    out << r << '\n';
  }
}

} // namespace graphmerge::gf2
