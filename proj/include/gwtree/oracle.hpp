#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gwtree/functionals.hpp"
#include "gwtree/offspring.hpp"
#include "gwtree/tree.hpp"

namespace gwt {

using BigInt = boost::multiprecision::cpp_int;

enum class CountFamily { IndSet, Matching, DomSet };

// total = I, m or d; zero = I0, m0 or d0 (root uncovered / not in the set);
// star = d* (root outside D and undominated, everything else dominated).
struct ExactCounts {
  CountFamily family = CountFamily::IndSet;
  BigInt total, zero, star;

  friend bool operator==(const ExactCounts&, const ExactCounts&) = default;
};

inline constexpr std::size_t kIndScanLimit = 26;
inline constexpr std::size_t kMatchScanLimit = 27;
inline constexpr std::size_t kDomScanLimit = 22;
inline constexpr std::size_t kDpLimit = 2000;

// Enumeration straight from the definitions. Error{TooLarge} past the limits.
ExactCounts scan_independent(const Tree& t);
ExactCounts scan_matching(const Tree& t);
ExactCounts scan_dominating(const Tree& t);

// Integer recursions over the tree. Error{TooLarge} past kDpLimit nodes.
ExactCounts dp_independent(const Tree& t);
ExactCounts dp_matching(const Tree& t);
ExactCounts dp_dominating(const Tree& t);

// DP, cross-checked against the scan when the scan is feasible; a mismatch
// throws std::logic_error.
ExactCounts brute_independent(const Tree& t);
ExactCounts brute_matching(const Tree& t);
ExactCounts brute_dominating(const Tree& t);

/// Exact ratio a / b as a double (correctly rounded for huge operands).
double ratio(const BigInt& a, const BigInt& b);
/// log(a) for a > 0.
double log_big(const BigInt& a);

inline constexpr std::uint32_t kEnumerationLimit = 12;

struct TreeEnumeration {
  std::uint32_t n = 0;
  std::vector<Tree> trees;      // lexicographic in the preorder sequence
  std::vector<double> weights;  // prod_v p[outdeg v]; empty without a law
  double pi_n = 0.0;            // sum of weights
};

/// Every ordered tree with n nodes. Error{TooLarge} for n > 12.
TreeEnumeration enumerate_trees(std::uint32_t n);
TreeEnumeration enumerate_trees(std::uint32_t n, const OffspringDistribution& dist);

struct ExactExpectation {
  double mu_n = 0.0;  // E f(T_n)
  double EF_n = 0.0;  // E F(T_n)
};

/// Error{ImpossibleSize} when P(|T| = n) = 0, Error{TooLarge} for n > 12.
ExactExpectation exact_expectation(const FunctionalFamily& family,
                                   const OffspringDistribution& dist, std::uint32_t n);

/// Complete d-ary tree of height 3, and the caterpillar of the same size:
/// d^2 + d + 1 spine nodes, each with d - 1 leaves before the next spine node,
/// the last one with d leaves.
Tree complete_dary_tree(std::uint32_t d, std::uint32_t height);
Tree caterpillar(std::uint32_t d);

struct WitnessReport {
  std::uint32_t d = 0;
  std::size_t size_s1 = 0, size_s2 = 0;
  ExactCounts s1, s2;  // IndSet counts
  double eta = 0.0;    // min(I(S1)/I(S2), I0(S1)/I0(S2))
  bool degenerate = false;  // S1 == S2 (d = 1)
  bool holds = false;       // equal sizes and both inequalities strict
};

WitnessReport variance_positivity_witness(std::uint32_t d);

}  // namespace gwt
