#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gwtree/offspring.hpp"
#include "gwtree/rng.hpp"
#include "gwtree/tree.hpp"

namespace gwt {

struct SamplerConfig {
  std::uint64_t seed = 42;
  std::uint64_t max_nodes = 1'000'000;     // cap for unconditioned sampling
  std::uint64_t rejection_budget = 1'000'000;  // attempts for conditioned sampling
};

/// Unconditioned GW tree, generated breadth-first. nullopt when the tree
/// would exceed max_nodes.
std::optional<Tree> sample_gw(const OffspringDistribution& dist, Rng& rng, std::uint64_t max_nodes);
std::optional<Tree> sample_gw(const OffspringDistribution& dist, const SamplerConfig& cfg);

/// T^(M) of an unconditioned GW tree; nodes at depth M are not expanded, so
/// this never overflows.
Tree sample_gw_truncated(const OffspringDistribution& dist, std::uint32_t max_depth, Rng& rng);

/// Size-biased tree truncated at depth M (spine construction).
Tree sample_size_biased(const OffspringDistribution& dist, std::uint32_t max_depth, Rng& rng);
Tree sample_size_biased(const OffspringDistribution& dist, std::uint32_t max_depth,
                        const SamplerConfig& cfg);

/// Given t = T_hat^(M), draws T_hat^(N) conditionally on it: the spine's
/// depth-M vertex is uniform among the depth-M nodes of t, it is continued by a
/// size-biased tree and every other depth-M node by an independent GW tree,
/// all truncated at depth N.
Tree extend_size_biased(const OffspringDistribution& dist, const Tree& t, std::uint32_t m,
                        std::uint32_t n, Rng& rng);

/// Exact P(|T| = k) = P(S_k = k - 1) / k by convolution powers of the pmf.
/// Throws Error{LimitExceeded} when k > limit.
double exact_size_prob(const OffspringDistribution& dist, std::uint64_t k,
                       std::uint64_t limit = 2000);

/// Whether P(|T| = n) > 0, decided arithmetically (no convolution).
bool size_possible(const OffspringDistribution& dist, std::uint64_t n);

/// Rotates a degree sequence with sum n - 1 to the unique cyclic shift that is
/// a valid preorder encoding (cycle lemma). The shift starts right after the
/// first minimum of the Lukasiewicz walk.
std::vector<std::uint32_t> cycle_lemma_rotate(std::vector<std::uint32_t> degrees);

// Exact sampler for T_n. Draws xi_1..xi_n i.i.d. conditioned on
// sum = n - 1 and applies the cycle-lemma rotation.
//
// Conditioning routes:
//   geometric: i.i.d. geometrics given their sum are a uniform weak
//              composition (stars and bars);
//   poisson:   i.i.d. Poissons given their sum are multinomial with equal cells;
//   binary:    a uniform subset of (n-1)/2 positions carries degree 2;
//   custom:    exact sequential sampling from a DP table for n <= 64,
//              rejection on the sum otherwise (budget from the config).
class ConditionedSampler {
 public:
  static constexpr std::uint64_t kTableLimit = 64;

  /// Throws Error{ImpossibleSize} when P(|T| = n) = 0.
  ConditionedSampler(const OffspringDistribution& dist, std::uint64_t n,
                     std::uint64_t rejection_budget = 1'000'000);

  /// Throws Error{BudgetExhausted} if the custom-law rejection loop runs out.
  Tree operator()(Rng& rng) const;
  std::vector<std::uint32_t> degree_sequence(Rng& rng) const;

  std::uint64_t size() const noexcept { return n_; }

 private:
  OffspringDistribution dist_;
  std::uint64_t n_;
  std::uint64_t budget_;
  // table_[k][s] = P(S_k = s), s < n (custom law, small n only)
  std::vector<std::vector<double>> table_;
};

Tree sample_conditioned(const OffspringDistribution& dist, std::uint64_t n, const SamplerConfig& cfg);
Tree sample_conditioned(const OffspringDistribution& dist, std::uint64_t n, Rng& rng,
                        std::uint64_t rejection_budget = 1'000'000);

}  // namespace gwt
