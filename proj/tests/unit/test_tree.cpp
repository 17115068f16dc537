#include <gtest/gtest.h>

#include "gwtree/errors.hpp"
#include "gwtree/tree.hpp"
#include "helpers.hpp"

namespace gwt {
namespace {

std::vector<std::uint32_t> seq(const Tree& t) { return {t.outdegrees().begin(), t.outdegrees().end()}; }

TEST(Tree, SingleNode) {
  const auto t = build_tree({0});
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.root_degree(), 0u);
  EXPECT_EQ(t.parent(0), kNoParent);
  EXPECT_EQ(t, Tree());
}

TEST(Tree, Star) {
  const auto t = build_tree({2, 0, 0});
  EXPECT_EQ(std::vector<std::uint32_t>(t.subtree_sizes().begin(), t.subtree_sizes().end()),
            (std::vector<std::uint32_t>{3, 1, 1}));
  EXPECT_EQ(t.children(0), (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(t.parent(2), 0u);
}

TEST(Tree, PathProfile) {
  const auto p = level_profile(build_tree({1, 1, 0}));
  EXPECT_EQ(p.w, (std::vector<std::uint64_t>{1, 1, 1}));
  EXPECT_EQ(p.height, 2u);
}

TEST(Tree, Malformed) {
  for (const auto& bad : std::vector<std::vector<std::uint32_t>>{{}, {1}, {0, 0}, {2, 0}, {1, 0, 0}}) {
    try {
      build_tree(bad);
      FAIL() << "accepted a malformed sequence";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::MalformedSequence);
    }
  }
}

TEST(Tree, Truncate) {
  EXPECT_EQ(truncate(build_tree({1, 1, 0}), 1), build_tree({1, 0}));
  EXPECT_EQ(truncate(build_tree({2, 1, 0, 0}), 1), build_tree({2, 0, 0}));
  const auto t = build_tree({2, 1, 0, 0});
  EXPECT_EQ(truncate(t, 2), t);
  EXPECT_EQ(truncate(t, 7), t);
  EXPECT_EQ(truncate(t, 0), Tree());
}

TEST(Tree, Profiles) {
  EXPECT_EQ(level_profile(Tree()).w, (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(level_profile(build_tree({2, 0, 0})).w, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(level_profile(build_tree({2, 1, 0, 0})).w, (std::vector<std::uint64_t>{1, 2, 1}));
}

TEST(Tree, Fringe) {
  const auto t = build_tree({2, 1, 0, 0});
  EXPECT_EQ(fringe_at(t, 0), t);
  EXPECT_EQ(fringe_at(t, 1), build_tree({1, 0}));
  EXPECT_EQ(fringe_at(t, 3), Tree());
  EXPECT_THROW(fringe_at(t, 4), Error);
}

TEST(Tree, ParseAndPrint) {
  const auto t = parse_tree("2 1 0 0");
  EXPECT_EQ(t.to_string(), "2 1 0 0");
  EXPECT_EQ(parse_tree(" 2,0\t0\r"), build_tree({2, 0, 0}));
  EXPECT_THROW(parse_tree("2 x 0"), Error);
}

TEST(TreeProperty, RoundTripAndSubtreeSums) {
  for (const auto& t : testing::all_trees(9)) {
    EXPECT_EQ(build_tree(seq(t)), t);
    std::uint64_t deg_sum = 0;
    for (NodeId v = 0; v < t.size(); ++v) {
      deg_sum += t.outdeg(v);
      std::uint32_t s = 1;
      t.for_each_child(v, [&](NodeId c) {
        s += t.subtree_size(c);
        EXPECT_EQ(t.parent(c), v);
      });
      EXPECT_EQ(s, t.subtree_size(v));
    }
    EXPECT_EQ(deg_sum, t.size() - 1);
  }
}

TEST(TreeProperty, TruncationComposesAndCountsProfile) {
  const auto trees = testing::random_trees(OffspringKind::Geometric, 300, 50, 3);
  for (const auto& t : trees) {
    const auto prof = level_profile(t);
    std::uint64_t acc = 0;
    for (std::uint32_t M = 0; M <= prof.height + 1; ++M) {
      acc += prof.at(M);
      const auto tm = truncate(t, M);
      EXPECT_EQ(tm.size(), acc);
      for (std::uint32_t M2 : {0u, M / 2, M, M + 3}) {
        EXPECT_EQ(truncate(tm, M2), truncate(t, std::min(M, M2)));
      }
    }
  }
}

TEST(TreeProperty, DeepPathIsIterative) {
  std::vector<std::uint32_t> path(200000, 1);
  path.back() = 0;
  const auto t = build_tree(path);
  EXPECT_EQ(t.height(), 199999u);
  EXPECT_EQ(level_profile(truncate(t, 10)).height, 10u);
}

}  // namespace
}  // namespace gwt
