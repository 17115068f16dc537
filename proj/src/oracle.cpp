#include "gwtree/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "gwtree/errors.hpp"

namespace gwt {

namespace {

void require_at_most(const Tree& t, std::size_t limit, const char* what) {
  if (t.size() > limit) {
    throw Error(ErrorKind::TooLarge, std::string(what) + " supports n <= " + std::to_string(limit) +
                                         ", got " + std::to_string(t.size()));
  }
}

ExactCounts checked(ExactCounts dp, const ExactCounts& scan) {
  if (!(dp == scan)) throw std::logic_error("oracle: scan and DP disagree");
  return dp;
}

}  // namespace

ExactCounts scan_independent(const Tree& t) {
  require_at_most(t, kIndScanLimit, "independent-set scan");
  const auto n = static_cast<NodeId>(t.size());
  std::uint64_t total = 0, zero = 0;
  const std::uint64_t end = 1ULL << n;
  for (std::uint64_t m = 0; m < end; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    bool ok = true;
    for (NodeId v = 1; v < n && ok; ++v) {
      ok = !((mask >> v) & 1u) || !((mask >> t.parent(v)) & 1u);
    }
    if (!ok) continue;
    ++total;
    zero += !(mask & 1u);
  }
  return {CountFamily::IndSet, total, zero, 0};
}

ExactCounts scan_matching(const Tree& t) {
  require_at_most(t, kMatchScanLimit, "matching scan");
  const auto n = static_cast<NodeId>(t.size());
  // bit e-1 selects the edge between node e and its parent
  std::uint64_t total = 0, zero = 0;
  const std::uint64_t end = 1ULL << (n - 1);
  for (std::uint64_t m = 0; m < end; ++m) {
    std::uint32_t covered = 0;
    bool ok = true;
    for (NodeId e = 1; e < n && ok; ++e) {
      if (!((m >> (e - 1)) & 1u)) continue;
      const std::uint32_t ends = (1u << e) | (1u << t.parent(e));
      ok = (covered & ends) == 0;
      covered |= ends;
    }
    if (!ok) continue;
    ++total;
    zero += !(covered & 1u);
  }
  return {CountFamily::Matching, total, zero, 0};
}

ExactCounts scan_dominating(const Tree& t) {
  require_at_most(t, kDomScanLimit, "dominating-set scan");
  const auto n = static_cast<NodeId>(t.size());
  std::vector<std::uint32_t> closed(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    closed[v] |= 1u << v;
    if (v) {
      closed[v] |= 1u << t.parent(v);
      closed[t.parent(v)] |= 1u << v;
    }
  }
  std::uint32_t root_kids = 0;
  t.for_each_child(0, [&](NodeId c) { root_kids |= 1u << c; });

  std::uint64_t total = 0, zero = 0, star = 0;
  const std::uint64_t end = 1ULL << n;
  for (std::uint64_t m = 0; m < end; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    bool others = true;
    for (NodeId v = 1; v < n && others; ++v) others = (closed[v] & mask) != 0;
    if (!others) continue;
    if (closed[0] & mask) {
      ++total;
      zero += !(mask & 1u);
    } else if (!(mask & root_kids)) {
      ++star;
    }
  }
  return {CountFamily::DomSet, total, zero, star};
}

ExactCounts dp_independent(const Tree& t) {
  require_at_most(t, kDpLimit, "independent-set DP");
  const auto n = t.size();
  // I0(v) = prod I(c), I1(v) = prod I0(c)
  std::vector<BigInt> prod_i(n, 1), prod_i0(n, 1), I(n), I0(n);
  for (std::size_t v = n; v-- > 0;) {
    I0[v] = prod_i[v];
    I[v] = prod_i[v] + prod_i0[v];
    if (v) {
      prod_i[t.parent(v)] *= I[v];
      prod_i0[t.parent(v)] *= I0[v];
    }
  }
  return {CountFamily::IndSet, I[0], I0[0], 0};
}

ExactCounts dp_matching(const Tree& t) {
  require_at_most(t, kDpLimit, "matching DP");
  const auto n = t.size();
  // a(v) = prod m(c) = m0(v); b(v) = sum_c m0(c) prod_{c' != c} m(c')
  std::vector<BigInt> a(n, 1), b(n, 0), m(n), m0(n);
  for (std::size_t v = n; v-- > 0;) {
    m0[v] = a[v];
    m[v] = a[v] + b[v];
    if (v) {
      const auto p = t.parent(v);
      b[p] = b[p] * m[v] + a[p] * m0[v];
      a[p] *= m[v];
    }
  }
  return {CountFamily::Matching, m[0], m0[0], 0};
}

ExactCounts dp_dominating(const Tree& t) {
  require_at_most(t, kDpLimit, "dominating-set DP");
  const auto n = t.size();
  // d1 = prod (d + d*), d0 = prod d - prod d0, d* = prod d0
  std::vector<BigInt> pin(n, 1), pd(n, 1), pd0(n, 1), d(n), d0(n), ds(n);
  for (std::size_t v = n; v-- > 0;) {
    d0[v] = pd[v] - pd0[v];
    ds[v] = pd0[v];
    d[v] = pin[v] + d0[v];
    if (v) {
      const auto p = t.parent(v);
      pin[p] *= d[v] + ds[v];
      pd[p] *= d[v];
      pd0[p] *= d0[v];
    }
  }
  return {CountFamily::DomSet, d[0], d0[0], ds[0]};
}

ExactCounts brute_independent(const Tree& t) {
  auto dp = dp_independent(t);
  return t.size() <= kIndScanLimit ? checked(std::move(dp), scan_independent(t)) : dp;
}

ExactCounts brute_matching(const Tree& t) {
  auto dp = dp_matching(t);
  return t.size() <= kMatchScanLimit ? checked(std::move(dp), scan_matching(t)) : dp;
}

ExactCounts brute_dominating(const Tree& t) {
  auto dp = dp_dominating(t);
  return t.size() <= kDomScanLimit ? checked(std::move(dp), scan_dominating(t)) : dp;
}

double log_big(const BigInt& a) {
  if (a <= 0) throw std::domain_error("log of non-positive integer");
  const auto bits = boost::multiprecision::msb(a);
  if (bits < 1000) return std::log(a.convert_to<double>());
  const auto shift = bits - 60;
  const BigInt top = a >> shift;
  return std::log(top.convert_to<double>()) + double(shift) * std::log(2.0);
}

double ratio(const BigInt& a, const BigInt& b) {
  if (b == 0) throw std::domain_error("ratio with zero denominator");
  if (a == 0) return 0.0;
  // 64 significant bits of the quotient, then scale.
  const long long ea = static_cast<long long>(boost::multiprecision::msb(a));
  const long long eb = static_cast<long long>(boost::multiprecision::msb(b));
  const long long shift = 64 - (ea - eb);
  BigInt q = shift >= 0 ? BigInt((a << shift) / b) : BigInt(a / (b << -shift));
  return std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
}

TreeEnumeration enumerate_trees(std::uint32_t n) {
  if (n == 0) throw Error(ErrorKind::TooLarge, "n must be >= 1");
  if (n > kEnumerationLimit) {
    throw Error(ErrorKind::TooLarge, "enumeration supports n <= " +
                                         std::to_string(kEnumerationLimit));
  }
  TreeEnumeration out;
  out.n = n;
  // seq[i] = outdegree of node i; open = children still to be placed
  std::vector<std::uint32_t> seq(n, 0);
  std::vector<std::int64_t> open_before(n + 1, 0);
  open_before[0] = 1;
  std::vector<int> deg(n, -1);
  std::uint32_t i = 0;
  while (true) {
    ++deg[i];
    const std::int64_t open = open_before[i] - 1 + deg[i];
    const std::int64_t remaining = n - 1 - i;
    if (open > remaining) {
      deg[i] = -1;
      if (i == 0) break;
      --i;
      continue;
    }
    if (open == 0 && remaining > 0) continue;  // closed too early
    seq[i] = static_cast<std::uint32_t>(deg[i]);
    open_before[i + 1] = open;
    if (i + 1 == n) {
      if (open == 0) out.trees.push_back(build_tree(seq));
      continue;
    }
    ++i;
  }
  return out;
}

TreeEnumeration enumerate_trees(std::uint32_t n, const OffspringDistribution& dist) {
  auto out = enumerate_trees(n);
  out.weights.reserve(out.trees.size());
  for (const auto& t : out.trees) {
    double w = 1.0;
    for (auto k : t.outdegrees()) w *= dist.p(k);
    out.weights.push_back(w);
    out.pi_n += w;
  }
  return out;
}

ExactExpectation exact_expectation(const FunctionalFamily& family,
                                   const OffspringDistribution& dist, std::uint32_t n) {
  const auto en = enumerate_trees(n, dist);
  if (!(en.pi_n > 0.0)) {
    throw Error(ErrorKind::ImpossibleSize, "P(|T| = " + std::to_string(n) + ") = 0");
  }
  ExactExpectation ex;
  for (std::size_t i = 0; i < en.trees.size(); ++i) {
    if (en.weights[i] == 0.0) continue;
    const auto ev = evaluate(family, en.trees[i]);
    ex.mu_n += en.weights[i] * ev.root_toll;
    ex.EF_n += en.weights[i] * ev.F_value;
  }
  ex.mu_n /= en.pi_n;
  ex.EF_n /= en.pi_n;
  return ex;
}

Tree complete_dary_tree(std::uint32_t d, std::uint32_t height) {
  std::vector<std::uint32_t> seq;
  std::vector<std::uint32_t> stack{0};  // depths of pending nodes
  while (!stack.empty()) {
    const auto depth = stack.back();
    stack.pop_back();
    const std::uint32_t k = depth < height ? d : 0;
    seq.push_back(k);
    stack.insert(stack.end(), k, depth + 1);
  }
  return build_tree(seq);
}

Tree caterpillar(std::uint32_t d) {
  const std::uint32_t spine = d * d + d + 1;
  std::vector<std::uint32_t> seq;
  for (std::uint32_t i = 0; i + 1 < spine; ++i) {
    seq.push_back(d);
    seq.insert(seq.end(), d - 1, 0);
  }
  seq.push_back(d);
  seq.insert(seq.end(), d, 0);
  return build_tree(seq);
}

WitnessReport variance_positivity_witness(std::uint32_t d) {
  if (d == 0) throw Error(ErrorKind::ConfigInvalid, "witness needs d >= 1");
  const Tree s1 = complete_dary_tree(d, 3);
  const Tree s2 = caterpillar(d);
  WitnessReport rep;
  rep.d = d;
  rep.size_s1 = s1.size();
  rep.size_s2 = s2.size();
  rep.s1 = brute_independent(s1);
  rep.s2 = brute_independent(s2);
  rep.degenerate = s1 == s2;
  rep.eta = std::min(ratio(rep.s1.total, rep.s2.total), ratio(rep.s1.zero, rep.s2.zero));
  rep.holds = rep.size_s1 == rep.size_s2 && rep.s1.total > rep.s2.total &&
              rep.s1.zero > rep.s2.zero && rep.eta > 1.0;
  return rep;
}

}  // namespace gwt
