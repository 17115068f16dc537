#pragma once

#include <vector>

#include <gtest/gtest.h>

#include "gwtree/errors.hpp"

#include "gwtree/oracle.hpp"
#include "gwtree/rng.hpp"
#include "gwtree/sampler.hpp"

// Asserts that stmt throws gwt::Error of the given kind.
#define EXPECT_GWT_ERROR(stmt, error_kind)                               \
  do {                                                                   \
    try {                                                                \
      stmt;                                                              \
      ADD_FAILURE() << "no exception from " #stmt;                       \
    } catch (const ::gwt::Error& e) {                                    \
      EXPECT_EQ(e.kind(), ::gwt::ErrorKind::error_kind) << e.what();     \
    }                                                                    \
  } while (0)

namespace gwt::testing {

inline const std::vector<OffspringKind>& builtin_kinds() {
  static const std::vector<OffspringKind> k{OffspringKind::Geometric, OffspringKind::Poisson,
                                            OffspringKind::Binary};
  return k;
}

// A critical law with support {0,1,2,3}, sampled through the custom routes.
inline OffspringDistribution custom_law() {
  return make_offspring(DistributionSpec::custom({0.4, 0.3, 0.2, 0.1}));
}

// Every ordered tree with 1..max_n nodes.
inline std::vector<Tree> all_trees(std::uint32_t max_n) {
  std::vector<Tree> out;
  for (std::uint32_t n = 1; n <= max_n; ++n) {
    auto en = enumerate_trees(n);
    out.insert(out.end(), en.trees.begin(), en.trees.end());
  }
  return out;
}

inline std::vector<Tree> random_trees(OffspringKind kind, std::uint64_t n, std::size_t count,
                                      std::uint64_t seed) {
  const auto dist = make_offspring({kind, {}});
  const ConditionedSampler sampler(dist, n);
  std::vector<Tree> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, n, i));
    out.push_back(sampler(rng));
  }
  return out;
}

}  // namespace gwt::testing
