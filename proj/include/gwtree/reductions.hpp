#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwtree/tree.hpp"

namespace gwt {

// One round of each process deletes, simultaneously:
//   Leaf     every leaf;
//   OldLeaf  every leaf that is the leftmost remaining child of its parent;
//   Path     every fringe subtree whose nodes all have outdegree <= 1;
//   OldPath  every such path whose top node is the leftmost remaining child.
// The root is never deleted, so the process ends with the root alone.
enum class ReductionKind { Leaf, OldLeaf, Path, OldPath };

ReductionKind parse_reduction_kind(const std::string& name);
std::string reduction_kind_name(ReductionKind kind);

struct ReductionResult {
  std::vector<char> survivors;           // survivors[v] <=> deletion_round[v] == 0
  std::vector<std::uint32_t> deletion_round;  // 1-based round, 0 = still alive
  std::uint64_t X_r = 0;
  std::uint64_t F_r = 0;
};

/// Runs up to r rounds (stops early once only the root is left).
ReductionResult reduce_r(const Tree& t, ReductionKind kind, std::uint32_t r);

/// The tree left after a single round.
Tree reduce_once(const Tree& t, ReductionKind kind);

/// f_r(t): root branches whose top node goes within r rounds.
std::uint32_t reduction_toll(const Tree& t, ReductionKind kind, std::uint32_t r);

/// f_r of every fringe subtree, read off one run on the whole tree (every rule
/// only looks at a node's own fringe and its left siblings).
std::vector<std::uint32_t> reduction_tolls(const Tree& t, const ReductionResult& res,
                                           std::uint32_t r);

}  // namespace gwt
