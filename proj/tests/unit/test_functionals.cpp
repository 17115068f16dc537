#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "gwtree/functionals.hpp"
#include "gwtree/oracle.hpp"
#include "helpers.hpp"

namespace gwt {
namespace {

const double kLog2 = std::log(2.0);

std::vector<FunctionalFamily> all_families() {
  return {IndSet{},
          Matching{},
          DomSet{},
          Reduction{ReductionKind::OldPath, 2},
          FringeCount{build_tree({1, 0})},
          OutdegreeCount{{0, 2}}};
}

// F over the root branches plus the root toll.
double branch_decomposition(const FunctionalFamily& f, const Tree& t) {
  double s = toll_value(f, t);
  t.for_each_child(0, [&](NodeId c) { s += evaluate(f, fringe_at(t, c)).F_value; });
  return s;
}

TEST(IndSet, Examples) {
  auto [ev, st] = eval_independent(Tree());
  EXPECT_DOUBLE_EQ(st.rho[0], 0.5);
  EXPECT_DOUBLE_EQ(ev.F_value, kLog2);
  EXPECT_NEAR(eval_independent(build_tree({2, 0, 0})).first.F_value, std::log(5.0), 1e-15);
  EXPECT_NEAR(eval_independent(build_tree({1, 0})).second.rho[0], 2.0 / 3, 1e-15);
}

TEST(Matching, Examples) {
  auto [ev, st] = eval_matching(Tree());
  EXPECT_EQ(st.rho[0], 1.0);
  EXPECT_EQ(ev.F_value, 0.0);
  auto edge = eval_matching(build_tree({1, 0}));
  EXPECT_DOUBLE_EQ(edge.second.rho[0], 0.5);
  EXPECT_NEAR(edge.first.F_value, kLog2, 1e-15);
  EXPECT_NEAR(eval_matching(build_tree({2, 0, 0})).first.F_value, std::log(3.0), 1e-15);
}

TEST(DomSet, Examples) {
  auto [ev, st] = eval_dominating(Tree());
  EXPECT_EQ(st.rho0[0], 0.0);
  EXPECT_EQ(st.rho_star[0], 1.0);
  EXPECT_EQ(ev.F_value, 0.0);
  auto edge = eval_dominating(build_tree({1, 0}));
  EXPECT_NEAR(edge.first.F_value, std::log(3.0), 1e-15);
  EXPECT_NEAR(edge.second.rho0[0], 1.0 / 3, 1e-15);
  EXPECT_EQ(edge.second.rho_star[0], 0.0);
  auto star = eval_dominating(build_tree({2, 0, 0}));
  EXPECT_NEAR(star.first.F_value, std::log(5.0), 1e-15);
  EXPECT_NEAR(star.second.rho0[0], 0.2, 1e-15);
  EXPECT_EQ(star.second.rho_star[0], 0.0);
}

TEST(Counting, Examples) {
  const auto t = build_tree({2, 1, 0, 0});
  EXPECT_EQ(eval_fringe_count(t, build_tree({1, 0})).F_value, 1.0);
  EXPECT_EQ(eval_fringe_count(t, Tree()).F_value, 2.0);
  EXPECT_GE(eval_fringe_count(t, t).F_value, 1.0);
  EXPECT_EQ(eval_outdegree_count(t, {1}).F_value, 1.0);
  EXPECT_EQ(eval_outdegree_count(t, {0}).F_value, 2.0);
  EXPECT_EQ(eval_outdegree_count(t, {0, 1, 2}).F_value, 4.0);
}

TEST(TollValue, Examples) {
  EXPECT_DOUBLE_EQ(toll_value(IndSet{}, Tree()), kLog2);
  EXPECT_NEAR(toll_value(Matching{}, build_tree({2, 0, 0})), std::log(3.0), 1e-15);
  EXPECT_EQ(toll_value(DomSet{}, Tree()), 0.0);
}

TEST(Families, ValidationAndNames) {
  EXPECT_GWT_ERROR(validated(Reduction{ReductionKind::Leaf, 0}), ConfigInvalid);
  EXPECT_GWT_ERROR(validated(OutdegreeCount{{}}), ConfigInvalid);
  const auto f = validated(OutdegreeCount{{3, 0, 3}});
  EXPECT_EQ(std::get<OutdegreeCount>(f).R, (std::vector<std::uint32_t>{0, 3}));
  EXPECT_EQ(family_name(f), "outdeg(0,3)");
  EXPECT_EQ(family_name(Reduction{ReductionKind::OldPath, 2}), "reduction(oldpath,2)");
  EXPECT_TRUE(is_integer_family(f));
  EXPECT_FALSE(is_integer_family(DomSet{}));
}

TEST(FunctionalsProperty, OracleEquivalenceExhaustive) {
  for (const auto& t : testing::all_trees(9)) {
    const auto ci = dp_independent(t), cm = dp_matching(t), cd = dp_dominating(t);
    const auto [ei, si] = eval_independent(t);
    const auto [em, sm] = eval_matching(t);
    const auto [ed, sd] = eval_dominating(t);
    EXPECT_NEAR(ei.F_value, log_big(ci.total), 1e-9);
    EXPECT_NEAR(em.F_value, log_big(cm.total), 1e-9);
    EXPECT_NEAR(ed.F_value, log_big(cd.total), 1e-9);
    EXPECT_NEAR(si.rho[0], ratio(ci.zero, ci.total), 1e-12);
    EXPECT_NEAR(sm.rho[0], ratio(cm.zero, cm.total), 1e-12);
    EXPECT_NEAR(sd.rho0[0], ratio(cd.zero, cd.total), 1e-12);
    EXPECT_NEAR(sd.rho_star[0], ratio(cd.star, cd.total), 1e-12);
  }
}

TEST(FunctionalsProperty, TollsSumToF) {
  for (const auto& t : testing::random_trees(OffspringKind::Poisson, 400, 20, 9)) {
    for (const auto& f : all_families()) {
      const auto ev = evaluate(f, t, true);
      ASSERT_EQ(ev.toll.size(), t.size());
      double s = 0;
      for (double x : ev.toll) s += x;
      EXPECT_NEAR(s, ev.F_value, 1e-9 * std::max(1.0, std::abs(s)));
      EXPECT_EQ(ev.toll[0], ev.root_toll);
      for (NodeId v = 0; v < t.size(); v += 37) {
        EXPECT_NEAR(ev.toll[v], toll_value(f, fringe_at(t, v)), 1e-12);
      }
    }
  }
}

TEST(FunctionalsProperty, AdditivityAllFamilies) {
  for (const auto& t : testing::all_trees(8)) {
    for (const auto& f : all_families()) {
      const double F = evaluate(f, t).F_value;
      EXPECT_NEAR(F, branch_decomposition(f, t), 1e-9 * std::max(1.0, std::abs(F)))
          << family_name(f) << " " << t.to_string();
    }
  }
  for (const auto& t : testing::random_trees(OffspringKind::Geometric, 1000, 30, 10)) {
    for (const auto& f : all_families()) {
      const double F = evaluate(f, t).F_value;
      EXPECT_NEAR(F, branch_decomposition(f, t), 1e-9 * std::max(1.0, std::abs(F)));
    }
  }
}

TEST(FunctionalsProperty, RangeInvariants) {
  std::uint64_t seed = 0;
  for (auto kind : testing::builtin_kinds()) {
    for (std::uint64_t n : {11u, 101u, 1001u, 10001u}) {
      const std::size_t count = n > 5000 ? 20 : 200;
      for (const auto& t : testing::random_trees(kind, n, count, ++seed)) {
        const auto [ei, si] = eval_independent(t, false);
        const auto [em, sm] = eval_matching(t, false);
        const auto [ed, sd] = eval_dominating(t, false);
        for (NodeId v = 0; v < t.size(); ++v) {
          ASSERT_GE(si.rho[v], 0.5);
          ASSERT_LE(si.rho[v], 1.0);
          ASSERT_GT(sm.rho[v], 0.0);
          ASSERT_LE(sm.rho[v], 1.0);
          ASSERT_GE(sm.rho[v], 1.0 / (1 + t.outdeg(v)) - 1e-15);
          ASSERT_GE(sd.rho0[v], 0.0);
          ASSERT_LE(sd.rho0[v], 0.5 + 1e-15);
          ASSERT_GE(sd.rho_star[v], 0.0);
          ASSERT_LE(sd.rho_star[v], 1.0);
          bool leaf_child = false;
          t.for_each_child(v, [&](NodeId c) { leaf_child |= t.outdeg(c) == 0; });
          if (t.outdeg(v) > 0) ASSERT_EQ(sd.rho_star[v] == 0.0, leaf_child);
          const double fm = -std::log(sm.rho[v]);
          ASSERT_LE(fm, std::log1p(t.outdeg(v)) + 1e-12);
          const double fd = -std::log(sd.rho0[v] + sd.rho_star[v]);
          ASSERT_GE(fd, -std::log(1.5) - 1e-12);
          ASSERT_LE(fd, kLog2 * t.outdeg(v) + 1 + 1e-12);
        }
      }
    }
  }
}

TEST(FunctionalsProperty, LinearDecompositionOverFringes) {
  // f(S) = number of nodes of S at depth 1 when |S| <= 4, else 0; expressed
  // through all shapes of up to 4 nodes.
  std::vector<std::pair<Tree, double>> support;
  for (const auto& s : testing::all_trees(4)) support.emplace_back(s, s.root_degree());
  for (const auto& t : testing::random_trees(OffspringKind::Geometric, 200, 30, 12)) {
    double direct = 0;
    for (NodeId v = 0; v < t.size(); ++v) {
      if (t.subtree_size(v) <= 4) direct += t.outdeg(v);
    }
    double combo = 0;
    for (const auto& [s, w] : support) combo += w * eval_fringe_count(t, s, false).F_value;
    EXPECT_EQ(direct, combo);
  }
}

TEST(FringeCount, AgreesWithStructuralComparison) {
  const auto trees = testing::random_trees(OffspringKind::Geometric, 300, 10, 13);
  for (const auto& pattern : testing::all_trees(5)) {
    for (const auto& t : trees) {
      double expected = 0;
      for (NodeId v = 0; v < t.size(); ++v) expected += fringe_at(t, v) == pattern;
      EXPECT_EQ(eval_fringe_count(t, pattern, false).F_value, expected);
    }
  }
}

TEST(DomSet, PrecisionWarningOnHugeDegree) {
  std::vector<std::uint32_t> star(802, 0);
  star[0] = 801;
  const auto ev = eval_dominating(build_tree(star), false).first;
  EXPECT_TRUE(ev.precision_warning);
  EXPECT_TRUE(std::isfinite(ev.F_value));
  EXPECT_FALSE(eval_dominating(build_tree({2, 0, 0})).first.precision_warning);
}

TEST(DomSet, LogSpaceTollOnDeepStars) {
  // root with 600 children each carrying one leaf: d = 3^600, no underflow
  std::vector<std::uint32_t> seq{600};
  for (int i = 0; i < 600; ++i) {
    seq.push_back(1);
    seq.push_back(0);
  }
  const auto t = build_tree(seq);
  EXPECT_NEAR(eval_dominating(t).first.F_value, log_big(dp_dominating(t).total), 1e-9);
}

}  // namespace
}  // namespace gwt
