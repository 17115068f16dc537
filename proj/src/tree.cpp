#include "gwtree/tree.hpp"

#include <algorithm>
#include <charconv>

#include "gwtree/errors.hpp"

namespace gwt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedSequence: return "MalformedSequence";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidPmf: return "InvalidPmf";
    case ErrorKind::ImpossibleSize: return "ImpossibleSize";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
    case ErrorKind::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::InsufficientSizes: return "InsufficientSizes";
  }
  return "Unknown";
}

Tree::Tree() : outdeg_{0}, parent_{kNoParent}, subtree_size_{1} {}

std::vector<NodeId> Tree::children(NodeId v) const {
  std::vector<NodeId> out;
  out.reserve(outdeg_[v]);
  for_each_child(v, [&](NodeId c) { out.push_back(c); });
  return out;
}

std::vector<std::uint32_t> Tree::depths() const {
  std::vector<std::uint32_t> d(size(), 0);
  for (NodeId v = 1; v < size(); ++v) d[v] = d[parent_[v]] + 1;
  return d;
}

std::uint32_t Tree::height() const {
  auto d = depths();
  return *std::max_element(d.begin(), d.end());
}

std::string Tree::to_string() const {
  std::string s;
  s.reserve(size() * 2);
  char buf[16];
  for (std::size_t i = 0; i < outdeg_.size(); ++i) {
    if (i) s.push_back(' ');
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, outdeg_[i]);
    s.append(buf, p);
  }
  return s;
}

Tree build_tree(std::span<const std::uint32_t> seq) {
  if (seq.empty()) throw Error(ErrorKind::MalformedSequence, "empty sequence");
  const std::size_t n = seq.size();
  Tree t;
  t.outdeg_.assign(seq.begin(), seq.end());
  t.parent_.assign(n, kNoParent);
  t.subtree_size_.assign(n, 1);

  // open[k] = node still waiting for children, remaining[k] = how many
  std::vector<NodeId> open;
  std::vector<std::uint32_t> remaining;
  open.reserve(64);
  remaining.reserve(64);
  std::uint64_t pending = 1;  // slots not yet filled, root included
  for (std::size_t i = 0; i < n; ++i) {
    if (pending == 0) {
      throw Error(ErrorKind::MalformedSequence,
                  "sequence closes at position " + std::to_string(i - 1) + " of " +
                      std::to_string(n));
    }
    --pending;
    if (!open.empty()) {
      t.parent_[i] = open.back();
      if (--remaining.back() == 0) {
        open.pop_back();
        remaining.pop_back();
      }
    }
    pending += seq[i];
    if (seq[i] > 0) {
      open.push_back(static_cast<NodeId>(i));
      remaining.push_back(seq[i]);
    }
  }
  if (pending != 0) {
    throw Error(ErrorKind::MalformedSequence,
                "sequence ends with " + std::to_string(pending) + " unfilled child slots");
  }
  for (std::size_t i = n; i-- > 1;) t.subtree_size_[t.parent_[i]] += t.subtree_size_[i];
  return t;
}

Tree build_tree(std::initializer_list<std::uint32_t> seq) {
  return build_tree(std::span<const std::uint32_t>(seq.begin(), seq.size()));
}

Tree truncate(const Tree& t, std::uint32_t max_depth) {
  auto depth = t.depths();
  std::vector<std::uint32_t> seq;
  seq.reserve(t.size());
  for (NodeId v = 0; v < t.size(); ++v) {
    if (depth[v] < max_depth) {
      seq.push_back(t.outdeg(v));
    } else if (depth[v] == max_depth) {
      seq.push_back(0);
    }
  }
  if (seq.size() == t.size()) return t;
  return build_tree(seq);
}

LevelProfile level_profile(const Tree& t) {
  LevelProfile p;
  auto depth = t.depths();
  for (auto d : depth) {
    if (d >= p.w.size()) p.w.resize(d + 1, 0);
    ++p.w[d];
  }
  p.height = static_cast<std::uint32_t>(p.w.size() - 1);
  return p;
}

Tree fringe_at(const Tree& t, NodeId v) {
  if (v >= t.size()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "node " + std::to_string(v) + " in tree of size " + std::to_string(t.size()));
  }
  if (v == 0) return t;
  auto deg = t.outdegrees();
  return build_tree(deg.subspan(v, t.subtree_size(v)));
}

Tree parse_tree(std::string_view line) {
  std::vector<std::uint32_t> seq;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
    if (p == end) break;
    std::uint32_t x = 0;
    auto [q, ec] = std::from_chars(p, end, x);
    if (ec != std::errc() || q == p) {
      throw Error(ErrorKind::MalformedSequence,
                  "not a non-negative integer near '" + std::string(p, std::min<std::size_t>(end - p, 16)) + "'");
    }
    seq.push_back(x);
    p = q;
  }
  return build_tree(seq);
}

}  // namespace gwt
