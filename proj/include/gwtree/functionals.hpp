#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gwtree/reductions.hpp"
#include "gwtree/tree.hpp"

namespace gwt {

// Toll function selectors. F(T) = sum over fringe subtrees of f.
struct IndSet {};
struct Matching {};
struct DomSet {};
struct Reduction {
  ReductionKind kind = ReductionKind::Leaf;
  std::uint32_t r = 1;
};
struct FringeCount {
  Tree pattern;
};
struct OutdegreeCount {
  std::vector<std::uint32_t> R;  // sorted, unique
};

using FunctionalFamily =
    std::variant<IndSet, Matching, DomSet, Reduction, FringeCount, OutdegreeCount>;

/// Checks r >= 1 and R nonempty; sorts R. Throws Error{ConfigInvalid}.
FunctionalFamily validated(FunctionalFamily family);
std::string family_name(const FunctionalFamily& family);
/// Families whose tolls are integers (F is then exact in a double up to 2^53).
bool is_integer_family(const FunctionalFamily& family);

struct AdditiveEvaluation {
  double F_value = 0.0;
  double root_toll = 0.0;
  std::vector<double> toll;  // per node, only when requested
  /// Set when a DomSet node has outdegree > 700: ratios may underflow.
  bool precision_warning = false;
};

struct IndState {
  std::vector<double> rho;  // I0 / I
};
struct MatchState {
  std::vector<double> rho;  // m0 / m
};
struct DomState {
  std::vector<double> rho0;      // d0 / d
  std::vector<double> rho_star;  // d* / d
};

std::pair<AdditiveEvaluation, IndState> eval_independent(const Tree& t, bool keep_tolls = true);
std::pair<AdditiveEvaluation, MatchState> eval_matching(const Tree& t, bool keep_tolls = true);
std::pair<AdditiveEvaluation, DomState> eval_dominating(const Tree& t, bool keep_tolls = true);
AdditiveEvaluation eval_fringe_count(const Tree& t, const Tree& pattern, bool keep_tolls = true);
AdditiveEvaluation eval_outdegree_count(const Tree& t, const std::vector<std::uint32_t>& R,
                                        bool keep_tolls = true);
AdditiveEvaluation eval_reduction(const Tree& t, ReductionKind kind, std::uint32_t r,
                                  bool keep_tolls = true);

AdditiveEvaluation evaluate(const FunctionalFamily& family, const Tree& t, bool keep_tolls = false);

/// f(t) for the whole tree.
double toll_value(const FunctionalFamily& family, const Tree& t);

// Ratio-space steps shared with the interval code. Inputs are the
// accumulated child quantities; an empty product/sum gives a leaf.
inline double ind_rho(double child_product) { return 1.0 / (1.0 + child_product); }
inline double match_rho(double child_sum) { return 1.0 / (1.0 + child_sum); }

struct DomStep {
  double rho0, rho_star, toll;
};
/// p0 = prod rho0(child), log_q = sum log1p(rho_star(child)).
DomStep dom_step(double p0, double log_q);

}  // namespace gwt
