#include "gwtree/reductions.hpp"

#include <algorithm>

#include "gwtree/errors.hpp"

namespace gwt {

ReductionKind parse_reduction_kind(const std::string& name) {
  if (name == "leaf") return ReductionKind::Leaf;
  if (name == "oldleaf" || name == "old-leaf") return ReductionKind::OldLeaf;
  if (name == "path") return ReductionKind::Path;
  if (name == "oldpath" || name == "old-path") return ReductionKind::OldPath;
  throw Error(ErrorKind::ConfigInvalid, "unknown reduction kind '" + name + "'");
}

std::string reduction_kind_name(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::Leaf: return "leaf";
    case ReductionKind::OldLeaf: return "oldleaf";
    case ReductionKind::Path: return "path";
    case ReductionKind::OldPath: return "oldpath";
  }
  return "leaf";
}

namespace {

// Marks the nodes deleted in one round; `round` is 0 for alive nodes. Returns
// how many were deleted.
std::uint64_t run_round(const Tree& t, ReductionKind kind, std::vector<std::uint32_t>& round,
                        std::uint32_t this_round, std::vector<std::uint32_t>& cdeg,
                        std::vector<char>& path, std::vector<char>& first) {
  const auto n = static_cast<NodeId>(t.size());
  const auto par = t.parents();
  auto alive = [&](NodeId v) { return round[v] == 0; };

  std::fill(cdeg.begin(), cdeg.end(), 0);
  std::fill(path.begin(), path.end(), 1);
  std::fill(first.begin(), first.end(), 0);
  for (NodeId v = n; v-- > 1;) {
    if (!alive(v)) continue;
    ++cdeg[par[v]];
    // children are done before v in reverse preorder
    path[v] = path[v] && cdeg[v] <= 1;
    if (!path[v]) path[par[v]] = 0;
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!alive(v) || cdeg[v] == 0) continue;
    for (NodeId c = v + 1;; c = t.next_sibling(c)) {
      if (alive(c)) {
        first[c] = 1;
        break;
      }
    }
  }

  std::uint64_t deleted = 0;
  auto kill = [&](NodeId v) {
    round[v] = this_round;
    ++deleted;
  };
  // Preorder, so a deleted parent has already been stamped this round.
  for (NodeId v = 1; v < n; ++v) {
    if (!alive(v)) continue;
    bool del = false;
    switch (kind) {
      case ReductionKind::Leaf: del = cdeg[v] == 0; break;
      case ReductionKind::OldLeaf: del = cdeg[v] == 0 && first[v]; break;
      case ReductionKind::Path: del = path[v]; break;
      case ReductionKind::OldPath:
        del = (path[v] && first[v]) || round[par[v]] == this_round;
        break;
    }
    if (del) kill(v);
  }
  return deleted;
}

}  // namespace

ReductionResult reduce_r(const Tree& t, ReductionKind kind, std::uint32_t r) {
  if (r == 0) throw Error(ErrorKind::ConfigInvalid, "reduction needs r >= 1");
  const auto n = t.size();
  ReductionResult res;
  res.deletion_round.assign(n, 0);
  std::vector<std::uint32_t> cdeg(n);
  std::vector<char> path(n), first(n);
  std::uint64_t alive = n;
  for (std::uint32_t k = 1; k <= r && alive > 1; ++k) {
    alive -= run_round(t, kind, res.deletion_round, k, cdeg, path, first);
  }
  res.survivors.resize(n);
  for (std::size_t v = 0; v < n; ++v) res.survivors[v] = res.deletion_round[v] == 0;
  res.X_r = alive;
  res.F_r = n - alive;
  return res;
}

Tree reduce_once(const Tree& t, ReductionKind kind) {
  const auto res = reduce_r(t, kind, 1);
  std::vector<std::uint32_t> deg(t.size(), 0);
  for (NodeId v = 1; v < t.size(); ++v) {
    if (res.survivors[v]) ++deg[t.parent(v)];
  }
  std::vector<std::uint32_t> seq;
  seq.reserve(res.X_r);
  for (NodeId v = 0; v < t.size(); ++v) {
    if (res.survivors[v]) seq.push_back(deg[v]);
  }
  return build_tree(seq);
}

std::vector<std::uint32_t> reduction_tolls(const Tree& t, const ReductionResult& res,
                                           std::uint32_t r) {
  std::vector<std::uint32_t> toll(t.size(), 0);
  for (NodeId v = 1; v < t.size(); ++v) {
    const auto k = res.deletion_round[v];
    if (k >= 1 && k <= r) ++toll[t.parent(v)];
  }
  return toll;
}

std::uint32_t reduction_toll(const Tree& t, ReductionKind kind, std::uint32_t r) {
  const auto res = reduce_r(t, kind, r);
  std::uint32_t count = 0;
  t.for_each_child(0, [&](NodeId c) {
    const auto k = res.deletion_round[c];
    count += (k >= 1 && k <= r);
  });
  return count;
}

}  // namespace gwt
