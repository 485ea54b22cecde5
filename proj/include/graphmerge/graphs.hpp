#pragma once

// Graphs, honest/malicious partitions, graph-state stabilizers and the
// correction validator f.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "graphmerge/errors.hpp"
#include "graphmerge/gf2.hpp"

namespace graphmerge {

using gf2::BitMat;
using gf2::BitVec;

/// Simple undirected graph on vertices 0..n-1, stored as a symmetric
/// adjacency matrix with zero diagonal.
class Graph {
public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n, n) {}

  static Graph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
      g.add_edge(u, v);
    }
    return g;
  }

  /// Validates symmetry and the zero diagonal.
  static Graph from_adjacency(BitMat adj) {
    if (!adj.is_square()) {
      throw DimensionMismatch("adjacency matrix must be square, got " + adj.shape());
    }
    for (std::size_t i = 0; i < adj.rows(); ++i) {
      if (adj.get(i, i)) {
        throw ParseError("adjacency matrix has a self loop at " + std::to_string(i));
      }
      for (std::size_t j = i + 1; j < adj.rows(); ++j) {
        if (adj.get(i, j) != adj.get(j, i)) {
          throw ParseError("adjacency matrix is not symmetric");
        }
      }
    }
    Graph g;
    g.adj_ = std::move(adj);
    return g;
  }

  /// Graph whose edge set is given by bit k of `mask` over the pairs (i<j)
  /// in lexicographic order. Used for exhaustive enumeration.
  static Graph from_edge_mask(std::size_t n, std::uint64_t mask) {
    Graph g(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        if ((mask >> k) & 1U) {
          g.add_edge(i, j);
        }
      }
    }
    return g;
  }

  static Graph random(std::size_t n, CounterRng& rng) {
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng.bit()) {
          g.add_edge(i, j);
        }
      }
    }
    return g;
  }

  static Graph star(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 1; i < n; ++i) {
      g.add_edge(0, i);
    }
    return g;
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= size() || v >= size()) {
      throw std::out_of_range("edge (" + std::to_string(u) + "," + std::to_string(v) +
                              ") outside graph on " + std::to_string(size()) + " vertices");
    }
    if (u == v) {
      throw ParseError("self loop at vertex " + std::to_string(u));
    }
    adj_.set(u, v);
    adj_.set(v, u);
  }

  [[nodiscard]] std::size_t size() const noexcept { return adj_.rows(); }
  [[nodiscard]] const BitMat& adjacency() const noexcept { return adj_; }
  [[nodiscard]] bool has_edge(std::size_t u, std::size_t v) const { return adj_.get(u, v); }

  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = i + 1; j < size(); ++j) {
        if (adj_.get(i, j)) {
          out.emplace_back(i, j);
        }
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  BitMat adj_;
};

/// Partition of the vertices into an honest side H and its complement M.
/// `perm()` lists H before M, each in the given order.
class Partition {
public:
  Partition() = default;

  Partition(std::size_t n, std::vector<std::size_t> honest, std::vector<std::size_t> malicious)
      : n_(n), h_(std::move(honest)), m_(std::move(malicious)) {
    std::vector<bool> seen(n_, false);
    auto mark = [&](const std::vector<std::size_t>& part) {
      for (auto v : part) {
        if (v >= n_) {
          throw BadPartition("vertex " + std::to_string(v) + " outside graph on " +
                             std::to_string(n_) + " vertices");
        }
        if (seen[v]) {
          throw BadPartition("vertex " + std::to_string(v) + " listed twice");
        }
        seen[v] = true;
      }
    };
    mark(h_);
    mark(m_);
    if (h_.size() + m_.size() != n_) {
      throw BadPartition("partition does not cover all " + std::to_string(n_) + " vertices");
    }
  }

  /// M is the complement of `honest`, in increasing order.
  static Partition from_honest(std::size_t n, std::vector<std::size_t> honest) {
    std::vector<bool> in_h(n, false);
    for (auto v : honest) {
      if (v < n) {
        in_h[v] = true;
      }
    }
    std::vector<std::size_t> rest;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_h[v]) {
        rest.push_back(v);
      }
    }
    return {n, std::move(honest), std::move(rest)};
  }

  /// H = {v : bit v of mask set}.
  static Partition from_mask(std::size_t n, std::uint64_t mask) {
    std::vector<std::size_t> h;
    for (std::size_t v = 0; v < n; ++v) {
      if ((mask >> v) & 1U) {
        h.push_back(v);
      }
    }
    return from_honest(n, std::move(h));
  }

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] const std::vector<std::size_t>& h() const noexcept { return h_; }
  [[nodiscard]] const std::vector<std::size_t>& m() const noexcept { return m_; }

  [[nodiscard]] std::vector<std::size_t> perm() const {
    std::vector<std::size_t> p = h_;
    p.insert(p.end(), m_.begin(), m_.end());
    return p;
  }

  [[nodiscard]] bool is_honest(std::size_t v) const {
    return std::find(h_.begin(), h_.end(), v) != h_.end();
  }

  friend bool operator==(const Partition&, const Partition&) = default;

private:
  std::size_t n_ = 0;
  std::vector<std::size_t> h_;
  std::vector<std::size_t> m_;
};

/// Reordered adjacency [[G_H, Γ^T], [Γ, G_M]].
struct GraphBlocks {
  BitMat g_h;   // |H|×|H|
  BitMat g_m;   // |M|×|M|
  BitMat gamma; // |M|×|H|, edges crossing the cut

  /// Adjacency in vertex order, undoing the partition's reordering.
  [[nodiscard]] BitMat reassemble(const Partition& p) const {
    const auto reordered = gf2::block(g_h, gamma.transpose(), gamma, g_m);
    const auto perm = p.perm();
    BitMat adj(perm.size(), perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      for (std::size_t j = 0; j < perm.size(); ++j) {
        adj.set(perm[i], perm[j], reordered.get(i, j));
      }
    }
    return adj;
  }
};

inline void require_partition_of(const Graph& g, const Partition& p) {
  if (p.size() != g.size()) {
    throw BadPartition("partition of " + std::to_string(p.size()) + " vertices used with graph on " +
                       std::to_string(g.size()));
  }
}

inline GraphBlocks blocks(const Graph& g, const Partition& p) {
  require_partition_of(g, p);
  const auto& a = g.adjacency();
  return {a.select(p.h(), p.h()), a.select(p.m(), p.m()), a.select(p.m(), p.h())};
}

/// Pauli correction X^x Z^z on a register.
struct PauliCorrection {
  BitVec x;
  BitVec z;

  static PauliCorrection identity(std::size_t len) { return {BitVec(len), BitVec(len)}; }

  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
  [[nodiscard]] bool is_identity() const { return x.none() && z.none(); }

  PauliCorrection& operator^=(const PauliCorrection& o) {
    x ^= o.x;
    z ^= o.z;
    return *this;
  }
  friend PauliCorrection operator^(PauliCorrection a, const PauliCorrection& b) { return a ^= b; }
  friend bool operator==(const PauliCorrection&, const PauliCorrection&) = default;
};

/// (x, G·x): X^x Z^{Gx} stabilizes |G⟩.
inline PauliCorrection stabilizer_of(const Graph& g, const BitVec& x) {
  if (x.size() != g.size()) {
    throw DimensionMismatch("stabilizer index of length " + std::to_string(x.size()) +
                            " for graph on " + std::to_string(g.size()) + " vertices");
  }
  return {x, g.adjacency() * x};
}

struct FValidation {
  bool accepted = false;
  std::optional<BitVec> witness; // b, present iff accepted

  explicit operator bool() const noexcept { return accepted; }
};

/// Everything f needs about a (graph, partition) pair, computed once.
struct CorrectionValidator {
  GraphBlocks blocks;
  gf2::PivotDecomposition pivot;
  BitMat u_transpose_inv;

  CorrectionValidator(const Graph& g, const Partition& p)
      : blocks(graphmerge::blocks(g, p)), pivot(gf2::pivot_decompose(blocks.gamma)),
        u_transpose_inv(gf2::invert(pivot.u.transpose())) {}

  [[nodiscard]] std::size_t honest_size() const noexcept { return blocks.g_h.rows(); }

  /// Accepts iff (U·x)[r..] = 0 and (U^T)^{-1}(z ⊕ G_H·x) = [b ; R^T·b].
  [[nodiscard]] FValidation operator()(const PauliCorrection& corr) const {
    const std::size_t h = honest_size();
    if (corr.x.size() != h || corr.z.size() != h) {
      throw DimensionMismatch("correction lengths (" + std::to_string(corr.x.size()) + ", " +
                              std::to_string(corr.z.size()) + ") for honest register of size " +
                              std::to_string(h));
    }
    const std::size_t r = pivot.r;
    if ((pivot.u * corr.x).slice(r, h - r).any()) {
      return {};
    }
    const auto w = u_transpose_inv * (corr.z ^ (blocks.g_h * corr.x));
    auto b = w.slice(0, r);
    if (w.slice(r, h - r) != pivot.r_block.transpose() * b) {
      return {};
    }
    return {true, std::move(b)};
  }
};

inline FValidation validate_f(const Graph& g, const Partition& p, const PauliCorrection& corr) {
  return CorrectionValidator(g, p)(corr);
}

// ---------------------------------------------------------------------------
// Graph file: first line n, then "u v" edges; '#' starts a comment.

inline Graph read_graph(std::istream& in) {
  std::optional<std::size_t> n;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::vector<long long> nums;
    long long value = 0;
    while (ls >> value) {
      nums.push_back(value);
    }
    if (!ls.eof()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected integers");
    }
    if (nums.empty()) {
      continue;
    }
    if (!n) {
      if (nums.size() != 1 || nums[0] < 0) {
        throw ParseError("line " + std::to_string(lineno) + ": expected vertex count");
      }
      n = static_cast<std::size_t>(nums[0]);
      continue;
    }
    if (nums.size() != 2 || nums[0] < 0 || nums[1] < 0) {
      throw ParseError("line " + std::to_string(lineno) + ": expected edge 'u v'");
    }
    edges.emplace_back(static_cast<std::size_t>(nums[0]), static_cast<std::size_t>(nums[1]));
  }
  if (!n) {
    throw ParseError("missing vertex count");
  }
  Graph g(*n);
  for (auto [u, v] : edges) {
    if (u >= *n || v >= *n) {
      throw ParseError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") references a vertex outside 0.." + std::to_string(*n - 1));
    }
    if (u == v) {
      throw ParseError("self loop at vertex " + std::to_string(u));
    }
    if (g.has_edge(u, v)) {
      throw ParseError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    g.add_edge(u, v);
  }
  return g;
}

inline Graph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_graph(in);
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.size() << '\n';
  for (auto [u, v] : g.edges()) {
    out << u << ' ' << v << '\n';
  }
}

} // namespace graphmerge
