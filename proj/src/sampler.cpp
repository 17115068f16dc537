#include "gwtree/sampler.hpp"

#include <algorithm>
#include <numeric>

#include "gwtree/errors.hpp"

namespace gwt {

namespace {

// Preorder degree sequence from a breadth-first one.
std::vector<std::uint32_t> bfs_to_preorder(const std::vector<std::uint32_t>& bfs) {
  std::vector<std::uint64_t> first_child(bfs.size());
  std::uint64_t next = 1;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    first_child[i] = next;
    next += bfs[i];
  }
  std::vector<std::uint32_t> out;
  out.reserve(bfs.size());
  std::vector<std::uint64_t> stack{0};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    out.push_back(bfs[v]);
    for (std::uint64_t c = first_child[v] + bfs[v]; c-- > first_child[v];) stack.push_back(c);
  }
  return out;
}

// Appends the preorder degrees of a GW tree truncated `depth_left` levels
// below its root.
void append_gw(const OffspringDistribution& dist, Rng& rng, std::uint32_t depth_left,
               std::vector<std::uint32_t>& out) {
  std::vector<std::uint32_t> stack{depth_left};
  while (!stack.empty()) {
    const auto dl = stack.back();
    stack.pop_back();
    if (dl == 0) {
      out.push_back(0);
      continue;
    }
    const auto k = dist.draw(rng);
    out.push_back(k);
    stack.insert(stack.end(), k, dl - 1);
  }
}

// Same for a size-biased tree: the spine node draws from k p[k] and passes the
// spine to a uniformly chosen child.
void append_size_biased(const OffspringDistribution& dist, Rng& rng, std::uint32_t depth_left,
                        std::vector<std::uint32_t>& out) {
  struct Frame {
    std::uint32_t depth_left;
    bool spine;
  };
  std::vector<Frame> stack{{depth_left, true}};
  while (!stack.empty()) {
    const auto f = stack.back();
    stack.pop_back();
    if (f.depth_left == 0) {
      out.push_back(0);
      continue;
    }
    if (!f.spine) {
      const auto k = dist.draw(rng);
      out.push_back(k);
      stack.insert(stack.end(), k, Frame{f.depth_left - 1, false});
      continue;
    }
    const auto k = dist.draw_size_biased(rng);
    const auto j = static_cast<std::uint32_t>(rng.below(k));
    out.push_back(k);
    for (std::uint32_t i = k; i-- > 0;) stack.push_back({f.depth_left - 1, i == j});
  }
}

// out[i] = sum_j a[j] b[i-j], truncated to `len` entries.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b,
                             std::size_t len) {
  std::vector<double> out(std::min(len, a.size() + b.size() - 1), 0.0);
  for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
    if (a[i] == 0.0) continue;
    const std::size_t jmax = std::min(b.size(), out.size() - i);
    for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Sequential selection: a uniform `picks`-subset of `slots` positions.
template <typename OnSlot>
void select_subset(Rng& rng, std::uint64_t slots, std::uint64_t picks, OnSlot&& on_slot) {
  for (std::uint64_t s = 0; s < slots; ++s) {
    const bool take = rng.below(slots - s) < picks;
    if (take) --picks;
    on_slot(take);
  }
}

}  // namespace

std::optional<Tree> sample_gw(const OffspringDistribution& dist, Rng& rng, std::uint64_t max_nodes) {
  std::vector<std::uint32_t> bfs;
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < total; ++i) {
    const auto k = dist.draw(rng);
    bfs.push_back(k);
    total += k;
    if (total > max_nodes) return std::nullopt;
  }
  return build_tree(bfs_to_preorder(bfs));
}

std::optional<Tree> sample_gw(const OffspringDistribution& dist, const SamplerConfig& cfg) {
  Rng rng(cfg.seed);
  return sample_gw(dist, rng, cfg.max_nodes);
}

Tree sample_gw_truncated(const OffspringDistribution& dist, std::uint32_t max_depth, Rng& rng) {
  std::vector<std::uint32_t> bfs;
  std::uint64_t level_begin = 0, level_end = 1;
  for (std::uint32_t depth = 0; level_begin < level_end; ++depth) {
    std::uint64_t next_end = level_end;
    for (std::uint64_t i = level_begin; i < level_end; ++i) {
      const std::uint32_t k = depth < max_depth ? dist.draw(rng) : 0;
      bfs.push_back(k);
      next_end += k;
    }
    level_begin = level_end;
    level_end = next_end;
  }
  return build_tree(bfs_to_preorder(bfs));
}

Tree sample_size_biased(const OffspringDistribution& dist, std::uint32_t max_depth, Rng& rng) {
  std::vector<std::uint32_t> seq;
  append_size_biased(dist, rng, max_depth, seq);
  return build_tree(seq);
}

Tree sample_size_biased(const OffspringDistribution& dist, std::uint32_t max_depth,
                        const SamplerConfig& cfg) {
  Rng rng(cfg.seed);
  return sample_size_biased(dist, max_depth, rng);
}

Tree extend_size_biased(const OffspringDistribution& dist, const Tree& t, std::uint32_t m,
                        std::uint32_t n, Rng& rng) {
  if (n < m) throw Error(ErrorKind::CutoffTooSmall, "extension depth below truncation depth");
  const auto depth = t.depths();
  std::uint64_t frontier = 0;
  for (auto d : depth) frontier += (d == m);
  if (frontier == 0) {
    throw Error(ErrorKind::MalformedSequence, "tree has no node at depth " + std::to_string(m));
  }
  const auto spine = rng.below(frontier);
  std::vector<std::uint32_t> seq;
  seq.reserve(t.size() * 2);
  std::uint64_t seen = 0;
  for (NodeId v = 0; v < t.size(); ++v) {
    if (depth[v] > m) {
      throw Error(ErrorKind::MalformedSequence, "tree deeper than truncation depth");
    }
    if (depth[v] < m) {
      seq.push_back(t.outdeg(v));
    } else if (seen++ == spine) {
      append_size_biased(dist, rng, n - m, seq);
    } else {
      append_gw(dist, rng, n - m, seq);
    }
  }
  return build_tree(seq);
}

double exact_size_prob(const OffspringDistribution& dist, std::uint64_t k, std::uint64_t limit) {
  if (k == 0) return 0.0;
  if (k > limit) {
    throw Error(ErrorKind::LimitExceeded,
                "k=" + std::to_string(k) + " above convolution limit " + std::to_string(limit));
  }
  // P(S_k = k - 1) needs the law of S_k on {0, ..., k-1}
  const std::size_t len = k;
  std::vector<double> base(dist.pmf().begin(),
                           dist.pmf().begin() + std::min(dist.pmf().size(), len));
  std::vector<double> acc{1.0};
  for (auto e = k;;) {
    if (e & 1) acc = convolve(acc, base, len);
    e >>= 1;
    if (!e) break;
    base = convolve(base, base, len);
  }
  const double tail = (k - 1) < acc.size() ? acc[k - 1] : 0.0;
  return tail / static_cast<double>(k);
}

bool size_possible(const OffspringDistribution& dist, std::uint64_t n) {
  if (n == 0 || dist.p(0) <= 0.0) return false;
  if (n == 1) return true;
  const auto g = dist.support_gcd();
  if (g == 0 || (n - 1) % g != 0) return false;
  // n - 1 must be a sum of positive support points; each part is >= 1 so at
  // most n - 1 parts are used and the remaining draws are zeros.
  std::vector<std::uint32_t> atoms;
  for (std::size_t k = 1; k < dist.pmf().size(); ++k) {
    if (dist.p(k) > 0.0) atoms.push_back(static_cast<std::uint32_t>(k));
  }
  std::vector<char> reach(n, 0);
  reach[0] = 1;
  for (std::uint64_t m = 1; m < n; ++m) {
    for (auto a : atoms) {
      if (a <= m && reach[m - a]) {
        reach[m] = 1;
        break;
      }
    }
  }
  return reach[n - 1];
}

std::vector<std::uint32_t> cycle_lemma_rotate(std::vector<std::uint32_t> degrees) {
  const std::size_t n = degrees.size();
  std::int64_t walk = 0, best = 1;
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < n; ++k) {
    walk += static_cast<std::int64_t>(degrees[k]) - 1;
    if (walk < best) {
      best = walk;
      argmin = k + 1;
    }
  }
  if (walk != -1) {
    throw Error(ErrorKind::MalformedSequence, "degree sum is not n - 1");
  }
  std::rotate(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(argmin % n),
              degrees.end());
  return degrees;
}

ConditionedSampler::ConditionedSampler(const OffspringDistribution& dist, std::uint64_t n,
                                       std::uint64_t rejection_budget)
    : dist_(dist), n_(n), budget_(rejection_budget) {
  if (!size_possible(dist_, n_)) {
    throw Error(ErrorKind::ImpossibleSize,
                "P(|T| = " + std::to_string(n) + ") = 0 under " + dist_.name());
  }
  if (rejection_budget == 0) throw Error(ErrorKind::ConfigInvalid, "rejection_budget must be >= 1");
  if (dist_.kind() == OffspringKind::Custom && n_ <= kTableLimit) {
    table_.assign(n_ + 1, std::vector<double>(n_, 0.0));
    table_[0][0] = 1.0;
    for (std::uint64_t k = 1; k <= n_; ++k) {
      for (std::uint64_t s = 0; s < n_; ++s) {
        double acc = 0.0;
        for (std::uint64_t j = 0; j <= s && j < dist_.pmf().size(); ++j) {
          acc += dist_.p(j) * table_[k - 1][s - j];
        }
        table_[k][s] = acc;
      }
    }
  }
}

std::vector<std::uint32_t> ConditionedSampler::degree_sequence(Rng& rng) const {
  const std::uint64_t n = n_;
  std::vector<std::uint32_t> deg(n, 0);
  if (n == 1) return deg;

  switch (dist_.kind()) {
    case OffspringKind::Geometric: {
      // n - 1 stars and n - 1 bars; deg[i] = stars between bar i-1 and bar i
      std::size_t cell = 0;
      select_subset(rng, 2 * (n - 1), n - 1, [&](bool bar) {
        if (bar) ++cell;
        else ++deg[cell];
      });
      return deg;
    }
    case OffspringKind::Poisson:
      for (std::uint64_t b = 0; b + 1 < n; ++b) ++deg[rng.below(n)];
      return deg;
    case OffspringKind::Binary: {
      std::size_t i = 0;
      select_subset(rng, n, (n - 1) / 2, [&](bool two) { deg[i++] = two ? 2 : 0; });
      return deg;
    }
    case OffspringKind::Custom:
      break;
  }

  if (!table_.empty()) {
    std::uint64_t remaining = n - 1;
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t left = n - i;  // draws still to make, this one included
      const double total = table_[left][remaining];
      double u = rng.uniform() * total;
      std::uint32_t pick = 0;
      for (std::uint64_t j = 0; j <= remaining && j < dist_.pmf().size(); ++j) {
        const double w = dist_.p(j) * table_[left - 1][remaining - j];
        if (w <= 0.0) continue;
        pick = static_cast<std::uint32_t>(j);
        if (u < w) break;
        u -= w;
      }
      deg[i] = pick;
      remaining -= pick;
    }
    return deg;
  }

  for (std::uint64_t attempt = 0; attempt < budget_; ++attempt) {
    std::uint64_t sum = 0;
    bool overshoot = false;
    for (std::uint64_t i = 0; i < n; ++i) {
      deg[i] = dist_.draw(rng);
      sum += deg[i];
      if (sum > n - 1) {
        overshoot = true;
        break;
      }
    }
    if (!overshoot && sum == n - 1) return deg;
  }
  throw Error(ErrorKind::BudgetExhausted,
              "no degree sequence with sum n-1 after " + std::to_string(budget_) + " attempts");
}

Tree ConditionedSampler::operator()(Rng& rng) const {
  return build_tree(cycle_lemma_rotate(degree_sequence(rng)));
}

Tree sample_conditioned(const OffspringDistribution& dist, std::uint64_t n, Rng& rng,
                        std::uint64_t rejection_budget) {
  return ConditionedSampler(dist, n, rejection_budget)(rng);
}

Tree sample_conditioned(const OffspringDistribution& dist, std::uint64_t n, const SamplerConfig& cfg) {
  Rng rng(cfg.seed);
  return sample_conditioned(dist, n, rng, cfg.rejection_budget);
}

}  // namespace gwt
