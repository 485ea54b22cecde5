#include <gtest/gtest.h>

#include <sstream>

#include "graphmerge/graphs.hpp"

using namespace graphmerge;

TEST(Blocks, TriangleReadOff) {
  const auto g = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto b = blocks(g, Partition::from_honest(3, {0, 1}));
  EXPECT_EQ(b.g_h, BitMat::from_rows({"01", "10"}));
  EXPECT_EQ(b.g_m, BitMat::from_rows({"0"}));
  EXPECT_EQ(b.gamma, BitMat::from_rows({"11"}));
}

TEST(Blocks, PathReadOff) {
  const auto g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const auto b = blocks(g, Partition::from_honest(3, {0, 2}));
  EXPECT_EQ(b.g_h, BitMat(2, 2));
  EXPECT_EQ(b.gamma, BitMat::from_rows({"11"}));
}

TEST(Blocks, ReassembleUndoesPermutation) {
  CounterRng rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto n = 2 + rng.uniform(6);
    const auto g = Graph::random(n, rng);
    const auto p = Partition::from_mask(n, 1 + rng.uniform((1U << n) - 2));
    EXPECT_EQ(blocks(g, p).reassemble(p), g.adjacency());
  }
}

TEST(PartitionChecks, Rejections) {
  EXPECT_THROW(Partition(3, {0, 1}, {1, 2}), BadPartition);
  EXPECT_THROW(Partition(3, {0, 5}, {1}), BadPartition);
  EXPECT_THROW(Partition(3, {0}, {1}), BadPartition);
  EXPECT_THROW(blocks(Graph(4), Partition::from_honest(3, {0})), BadPartition);
}

TEST(GraphChecks, AdjacencyValidation) {
  EXPECT_THROW(Graph::from_adjacency(BitMat::from_rows({"01", "00"})), ParseError);
  EXPECT_THROW(Graph::from_adjacency(BitMat::from_rows({"10", "00"})), ParseError);
  EXPECT_THROW(Graph::from_adjacency(BitMat(2, 3)), DimensionMismatch);
  EXPECT_EQ(Graph::from_edge_mask(3, 0b101).edges(),
            (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
}

TEST(Stabilizer, StarGraph) {
  const auto g = Graph::star(4);
  const auto s = stabilizer_of(g, BitVec::from_string("1000"));
  EXPECT_EQ(s.z.to_string(), "0111");
  const auto s2 = stabilizer_of(g, BitVec::from_string("0110"));
  EXPECT_EQ(s2.z.to_string(), "0000");
  EXPECT_THROW(stabilizer_of(g, BitVec(3)), DimensionMismatch);
}

TEST(Validator, NoCrossingEdgesAcceptsOnlyIdentity) {
  const auto g = Graph::from_edges(4, {{0, 1}, {2, 3}});
  const auto p = Partition::from_honest(4, {0, 1});
  const CorrectionValidator f(g, p);
  EXPECT_EQ(f.pivot.r, 0U);
  int accepted = 0;
  for (std::uint64_t x = 0; x < 4; ++x) {
    for (std::uint64_t z = 0; z < 4; ++z) {
      const auto res = f({BitVec::from_word(2, x), BitVec::from_word(2, z)});
      accepted += res.accepted ? 1 : 0;
      EXPECT_EQ(res.accepted, x == 0 && z == 0);
    }
  }
  EXPECT_EQ(accepted, 1);
}

TEST(Validator, SingleEdgeAcceptsEverything) {
  // Γ = [1]: every Pauli on the honest vertex is reachable.
  const auto g = Graph::from_edges(2, {{0, 1}});
  const CorrectionValidator f(g, Partition::from_honest(2, {0}));
  for (std::uint64_t x = 0; x < 2; ++x) {
    for (std::uint64_t z = 0; z < 2; ++z) {
      const auto res = f({BitVec::from_word(1, x), BitVec::from_word(1, z)});
      ASSERT_TRUE(res.accepted);
      EXPECT_EQ(res.witness->to_string(), BitVec::from_word(1, z).to_string());
    }
  }
}

TEST(Validator, PathWithSharedNeighbour) {
  // Path 0-1-2 with M = {1}: Γ = [1 1], r = 1, R = [1].
  // x may only be nonzero on the pivot coordinate, z must be (b, b).
  const auto g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const CorrectionValidator f(g, Partition::from_honest(3, {0, 2}));
  EXPECT_EQ(f.pivot.r, 1U);
  std::vector<std::string> ok;
  for (std::uint64_t x = 0; x < 4; ++x) {
    for (std::uint64_t z = 0; z < 4; ++z) {
      const PauliCorrection c{BitVec::from_word(2, x), BitVec::from_word(2, z)};
      if (f(c)) ok.push_back(c.x.to_string() + "/" + c.z.to_string());
    }
  }
  EXPECT_EQ(ok, (std::vector<std::string>{"00/00", "00/11", "10/00", "10/11"}));
  EXPECT_THROW(f(PauliCorrection::identity(3)), DimensionMismatch);
}

TEST(GraphIo, RoundTripAndComments) {
  const auto g = parse_graph("# triangle\n3\n0 1 # first\n1 2\n\n0 2\n");
  EXPECT_EQ(g, Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}));
  std::ostringstream out;
  write_graph(out, g);
  EXPECT_EQ(parse_graph(out.str()), g);
}

TEST(GraphIo, Errors) {
  EXPECT_THROW(parse_graph(""), ParseError);
  EXPECT_THROW(parse_graph("3\n0 3\n"), ParseError);
  EXPECT_THROW(parse_graph("3\n1 1\n"), ParseError);
  EXPECT_THROW(parse_graph("3\n0 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_graph("3\n0 1 2\n"), ParseError);
  EXPECT_THROW(parse_graph("3\n0 x\n"), ParseError);
}
