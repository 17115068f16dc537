#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gwt {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoParent = static_cast<NodeId>(-1);

// Immutable arena of a finite rooted ordered tree.
//
// Nodes are identified by their 0-based depth-first preorder index; the root
// is node 0. The first child of v (if any) is v + 1 and the next sibling of a
// child c is c + subtree_size(c), so children are walked without any pointer
// structure. All traversals in the library are iterative: conditioned trees
// have depth of order sqrt(n).
class Tree {
 public:
  /// Single-node tree.
  Tree();

  std::size_t size() const noexcept { return outdeg_.size(); }
  std::uint32_t outdeg(NodeId v) const { return outdeg_[v]; }
  NodeId parent(NodeId v) const { return parent_[v]; }
  std::uint32_t subtree_size(NodeId v) const { return subtree_size_[v]; }
  /// Outdegree of the root.
  std::uint32_t root_degree() const { return outdeg_[0]; }

  std::span<const std::uint32_t> outdegrees() const noexcept { return outdeg_; }
  std::span<const NodeId> parents() const noexcept { return parent_; }
  std::span<const std::uint32_t> subtree_sizes() const noexcept { return subtree_size_; }

  NodeId first_child(NodeId v) const { return v + 1; }
  NodeId next_sibling(NodeId c) const { return c + subtree_size_[c]; }

  /// Calls fn(child) for every child of v, left to right.
  template <typename Fn>
  void for_each_child(NodeId v, Fn&& fn) const {
    NodeId c = v + 1;
    for (std::uint32_t i = 0; i < outdeg_[v]; ++i) {
      fn(c);
      c += subtree_size_[c];
    }
  }

  std::vector<NodeId> children(NodeId v) const;

  /// Depth of every node (root has depth 0).
  std::vector<std::uint32_t> depths() const;
  std::uint32_t height() const;

  /// Text form: preorder outdegrees separated by single spaces.
  std::string to_string() const;

  friend bool operator==(const Tree& a, const Tree& b) { return a.outdeg_ == b.outdeg_; }

 private:
  friend Tree build_tree(std::span<const std::uint32_t> preorder_outdegrees);

  std::vector<std::uint32_t> outdeg_;
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> subtree_size_;
};

struct LevelProfile {
  std::vector<std::uint64_t> w;  // w[k] = number of nodes at depth k
  std::uint32_t height = 0;

  std::uint64_t at(std::size_t k) const { return k < w.size() ? w[k] : 0; }
};

/// Validates the Lukasiewicz prefix condition and fills parent/subtree arrays.
/// Throws Error{MalformedSequence}.
Tree build_tree(std::span<const std::uint32_t> preorder_outdegrees);
Tree build_tree(std::initializer_list<std::uint32_t> preorder_outdegrees);

/// T^(M): all nodes of depth <= M, preorder kept.
Tree truncate(const Tree& t, std::uint32_t max_depth);

LevelProfile level_profile(const Tree& t);

/// Copy of the fringe subtree rooted at v. Throws Error{IndexOutOfRange}.
Tree fringe_at(const Tree& t, NodeId v);

/// Parses one line of the text format ("2 1 0 0").
Tree parse_tree(std::string_view line);

}  // namespace gwt
