#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>

#include "gwtree/oracle.hpp"
#include "gwtree/sampler.hpp"
#include "gwtree/stats.hpp"
#include "helpers.hpp"

namespace gwt {
namespace {

using testing::builtin_kinds;

OffspringDistribution law(OffspringKind k) { return make_offspring({k, {}}); }

TEST(SampleGw, ExtinctLawGivesSingleNode) {
  const auto d = make_offspring(DistributionSpec::custom({1.0}));
  Rng rng(1);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample_gw(d, rng, 100), Tree());
}

TEST(SampleGw, Deterministic) {
  const auto d = law(OffspringKind::Geometric);
  SamplerConfig cfg;
  cfg.seed = 99;
  EXPECT_EQ(sample_gw(d, cfg), sample_gw(d, cfg));
}

TEST(SampleGw, OverflowIsNullopt) {
  const auto d = make_offspring(DistributionSpec::custom({0.0, 0.0, 1.0}));
  Rng rng(3);
  EXPECT_FALSE(sample_gw(d, rng, 1000).has_value());
}

TEST(SampleGw, SingleNodeProbabilityIsHalf) {
  const auto d = law(OffspringKind::Geometric);
  Rng rng(2024);
  const int N = 100000;
  int ones = 0;
  for (int i = 0; i < N; ++i) {
    // an overflow (nullopt) is a large tree
    const auto t = sample_gw(d, rng, 100'000);
    ones += t && t->size() == 1;
  }
  EXPECT_NEAR(ones / double(N), 0.5, 3 * std::sqrt(0.25 / N));
}

TEST(ExactSizeProb, Values) {
  const auto g = law(OffspringKind::Geometric);
  EXPECT_DOUBLE_EQ(exact_size_prob(g, 1), 0.5);
  EXPECT_NEAR(exact_size_prob(g, 2), 0.125, 1e-15);
  // frozen from the independent Python reference
  EXPECT_NEAR(exact_size_prob(g, 5), 0.02734375, 1e-14);
  EXPECT_NEAR(exact_size_prob(g, 10), 0.009273529052734375, 1e-14);
  const auto p = law(OffspringKind::Poisson);
  EXPECT_NEAR(exact_size_prob(p, 1), 0.36787944117144233, 1e-14);
  EXPECT_NEAR(exact_size_prob(p, 2), 0.1353352832366127, 1e-14);
  EXPECT_NEAR(exact_size_prob(p, 5), 0.03509347395357014, 1e-14);
  EXPECT_NEAR(exact_size_prob(p, 10), 0.01251100357211333, 1e-14);
  EXPECT_EQ(exact_size_prob(law(OffspringKind::Binary), 2), 0.0);
  EXPECT_GWT_ERROR(exact_size_prob(g, 2001), LimitExceeded);
}

TEST(ExactSizeProb, MatchesEnumeration) {
  for (auto k : builtin_kinds()) {
    const auto d = law(k);
    for (std::uint32_t n = 1; n <= 12; ++n) {
      EXPECT_NEAR(enumerate_trees(n, d).pi_n, exact_size_prob(d, n), 1e-10) << d.name() << " " << n;
    }
  }
  const auto c = testing::custom_law();
  for (std::uint32_t n = 1; n <= 10; ++n) {
    EXPECT_NEAR(enumerate_trees(n, c).pi_n, exact_size_prob(c, n), 1e-10);
  }
}

TEST(SizePossible, AgreesWithExactProbability) {
  std::vector<OffspringDistribution> laws;
  for (auto k : builtin_kinds()) laws.push_back(law(k));
  laws.push_back(make_offspring(DistributionSpec::custom({0.5, 0, 0, 0.5})));
  laws.push_back(make_offspring(DistributionSpec::custom({0.6, 0, 0, 0, 0, 0, 0.2, 0, 0, 0.2})));
  laws.push_back(make_offspring(DistributionSpec::custom({0.0, 1.0})));
  for (const auto& d : laws) {
    for (std::uint64_t n = 1; n <= 60; ++n) {
      EXPECT_EQ(size_possible(d, n), exact_size_prob(d, n) > 0) << d.name() << " n=" << n;
    }
  }
}

TEST(Conditioned, ImpossibleAndTrivialSizes) {
  EXPECT_GWT_ERROR(ConditionedSampler(law(OffspringKind::Binary), 4), ImpossibleSize);
  Rng rng(0);
  for (auto k : builtin_kinds()) EXPECT_EQ(sample_conditioned(law(k), 1, rng), Tree());
  EXPECT_EQ(sample_conditioned(testing::custom_law(), 1, rng), Tree());
}

TEST(Conditioned, Deterministic) {
  SamplerConfig cfg;
  cfg.seed = 7;
  const auto d = law(OffspringKind::Poisson);
  EXPECT_EQ(sample_conditioned(d, 300, cfg), sample_conditioned(d, 300, cfg));
}

TEST(Conditioned, LargeSizesHaveRightSize) {
  Rng rng(11);
  for (auto k : builtin_kinds()) {
    const auto t = sample_conditioned(law(k), 20001, rng);
    EXPECT_EQ(t.size(), 20001u);
  }
  // custom law above the table limit goes through sum rejection
  const auto t = sample_conditioned(testing::custom_law(), 500, rng);
  EXPECT_EQ(t.size(), 500u);
}

TEST(Conditioned, BudgetExhausted) {
  const ConditionedSampler s(testing::custom_law(), 5000, 1);
  Rng rng(1);
  int exhausted = 0;
  for (int i = 0; i < 20; ++i) {
    try {
      s(rng);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BudgetExhausted);
      ++exhausted;
    }
  }
  EXPECT_GT(exhausted, 0);
}

TEST(CycleLemma, RotationIsTheUniqueValidShift) {
  Rng rng(5);
  const auto d = law(OffspringKind::Geometric);
  for (int rep = 0; rep < 200; ++rep) {
    const std::uint64_t n = 1 + rng.below(30);
    const ConditionedSampler s(d, n);
    auto seq = s.degree_sequence(rng);
    int valid = 0;
    std::vector<std::uint32_t> found;
    for (std::size_t shift = 0; shift < n; ++shift) {
      std::vector<std::uint32_t> rot(seq.begin() + shift, seq.end());
      rot.insert(rot.end(), seq.begin(), seq.begin() + shift);
      try {
        build_tree(rot);
        ++valid;
        found = rot;
      } catch (const Error&) {
      }
    }
    EXPECT_EQ(valid, 1);
    EXPECT_EQ(cycle_lemma_rotate(seq), found);
  }
}

// Chi-square of sampled shapes against the exact conditional law.
void check_conditioned_law(const OffspringDistribution& d, std::uint32_t n, std::uint64_t seed) {
  const auto en = enumerate_trees(n, d);
  std::map<std::string, std::size_t> index;
  std::vector<double> probs;
  for (std::size_t i = 0; i < en.trees.size(); ++i) {
    index[en.trees[i].to_string()] = i;
    probs.push_back(en.weights[i] / en.pi_n);
  }
  std::vector<std::uint64_t> counts(probs.size());
  const ConditionedSampler s(d, n);
  Rng rng(seed);
  for (int i = 0; i < 100000; ++i) {
    auto it = index.find(s(rng).to_string());
    ASSERT_NE(it, index.end());
    ++counts[it->second];
  }
  const auto cs = chi_square_test(counts, probs);
  EXPECT_GT(cs.pvalue, 1e-3) << d.name() << " n=" << n << " chi2=" << cs.statistic;
}

TEST(Conditioned, ExactShapeDistribution) {
  std::uint64_t seed = 100;
  for (auto k : builtin_kinds()) {
    const auto d = law(k);
    for (std::uint32_t n = 2; n <= 7; ++n) {
      if (size_possible(d, n)) check_conditioned_law(d, n, ++seed);
    }
  }
  for (std::uint32_t n = 2; n <= 7; ++n) check_conditioned_law(testing::custom_law(), n, ++seed);
}

TEST(Conditioned, GeometricUniformOverShapes) {
  const auto en = enumerate_trees(5, law(OffspringKind::Geometric));
  ASSERT_EQ(en.trees.size(), 14u);
  for (double w : en.weights) EXPECT_NEAR(w / en.pi_n, 1.0 / 14, 1e-12);
}

// Probability of t as the M-truncation of an unconditioned tree.
double truncated_prob(const OffspringDistribution& d, const Tree& t, std::uint32_t M) {
  const auto depth = t.depths();
  double p = 1;
  for (NodeId v = 0; v < t.size(); ++v) {
    if (depth[v] < M) p *= d.p(t.outdeg(v));
  }
  return p;
}

// All truncated shapes of height <= M (M <= 2) whose size-biased probability
// is at least `floor`.
std::vector<std::pair<Tree, double>> size_biased_shapes(const OffspringDistribution& d,
                                                        std::uint32_t M, double floor) {
  std::vector<std::pair<Tree, double>> out;
  if (M == 0) return {{Tree(), 1.0}};
  for (std::uint32_t k = 1; k <= d.max_degree(); ++k) {
    if (d.p(k) * k < floor) continue;
    if (M == 1) {
      std::vector<std::uint32_t> seq{k};
      seq.resize(k + 1, 0);
      out.emplace_back(build_tree(seq), d.p(k) * k);
      continue;
    }
    // children outdegree vectors, pruned on the partial product
    std::vector<std::uint32_t> kids;
    auto rec = [&](auto&& self, double pr) -> void {
      if (pr * k * d.max_degree() < floor) return;  // w2 <= k * max_degree
      if (kids.size() == k) {
        std::uint64_t w2 = 0;
        std::vector<std::uint32_t> seq{k};
        for (auto c : kids) {
          w2 += c;
          seq.push_back(c);
          seq.insert(seq.end(), c, 0);
        }
        if (w2 > 0 && pr * w2 >= floor) out.emplace_back(build_tree(seq), pr * w2);
        return;
      }
      for (std::uint32_t c = 0; c <= d.max_degree(); ++c) {
        kids.push_back(c);
        self(self, pr * d.p(c));
        kids.pop_back();
      }
    };
    rec(rec, d.p(k));
  }
  return out;
}

TEST(SizeBiased, Examples) {
  const auto g = law(OffspringKind::Geometric);
  Rng rng(4);
  EXPECT_EQ(sample_size_biased(g, 0, rng), Tree());
  const auto t = build_tree({1, 1, 0});
  EXPECT_DOUBLE_EQ(level_profile(t).at(2) * truncated_prob(g, t, 2), 1.0 / 16);
}

TEST(SizeBiased, IdentityForSmallCutoffs) {
  std::vector<OffspringDistribution> laws;
  for (auto k : builtin_kinds()) laws.push_back(law(k));
  laws.push_back(testing::custom_law());
  std::uint64_t seed = 1;
  for (const auto& d : laws) {
    for (std::uint32_t M = 1; M <= 2; ++M) {
      const auto shapes = size_biased_shapes(d, M, 1e-4);
      std::map<std::string, std::size_t> index;
      std::vector<double> probs;
      double covered = 0;
      for (const auto& [t, p] : shapes) {
        EXPECT_NEAR(p, level_profile(t).at(M) * truncated_prob(d, t, M), 1e-15);
        index[t.to_string()] = probs.size();
        probs.push_back(p);
        covered += p;
      }
      probs.push_back(std::max(0.0, 1.0 - covered));  // everything rarer
      std::vector<std::uint64_t> counts(probs.size());
      Rng rng(++seed);
      for (int i = 0; i < 100000; ++i) {
        const auto t = sample_size_biased(d, M, rng);
        auto it = index.find(t.to_string());
        ++counts[it == index.end() ? probs.size() - 1 : it->second];
      }
      const auto cs = chi_square_test(counts, probs);
      EXPECT_GT(cs.pvalue, 1e-3) << d.name() << " M=" << M << " chi2=" << cs.statistic;
    }
  }
}

TEST(SizeBiased, ExtensionKeepsTruncation) {
  const auto g = law(OffspringKind::Geometric);
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto t = sample_size_biased(g, 3, rng);
    const auto ext = extend_size_biased(g, t, 3, 7, rng);
    EXPECT_EQ(truncate(ext, 3), t);
    EXPECT_GE(level_profile(ext).height, 7u);
  }
  EXPECT_GWT_ERROR(extend_size_biased(g, Tree(), 2, 1, rng), CutoffTooSmall);
}

TEST(Truncated, ExpectedSizeIsMPlusOne) {
  for (auto k : {OffspringKind::Geometric, OffspringKind::Poisson}) {
    const auto d = law(k);
    for (std::uint32_t M : {1u, 4u, 16u}) {
      Rng rng(derive_seed(77, M));
      const int N = 100000;
      double s = 0, s2 = 0;
      for (int i = 0; i < N; ++i) {
        const double x = double(sample_gw_truncated(d, M, rng).size());
        s += x;
        s2 += x * x;
      }
      const double mean = s / N, se = std::sqrt((s2 / N - mean * mean) / N);
      EXPECT_LE(std::abs(mean - (M + 1)), 3 * se) << d.name() << " M=" << M;
    }
  }
}

}  // namespace
}  // namespace gwt
