#include "gwtree/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "gwtree/errors.hpp"

namespace gwt {

namespace {

constexpr std::uint32_t kDomPrecisionDegree = 700;

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

// Fills toll (if kept), F and the root toll from a per-node toll generator
// called in reverse preorder.
template <typename TollAt>
AdditiveEvaluation collect(std::size_t n, bool keep_tolls, TollAt&& toll_at) {
  AdditiveEvaluation ev;
  if (keep_tolls) ev.toll.resize(n);
  CompensatedSum sum;
  for (std::size_t v = n; v-- > 0;) {
    const double f = toll_at(static_cast<NodeId>(v));
    if (keep_tolls) ev.toll[v] = f;
    sum.add(f);
    if (v == 0) ev.root_toll = f;
  }
  ev.F_value = sum.value();
  return ev;
}

// Polynomial hash modulo the Mersenne prime 2^61 - 1.
constexpr std::uint64_t kMod = (1ULL << 61) - 1;
constexpr std::uint64_t kBase = 0x1f3d5b79a2c4e6f1ULL % kMod;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(p & kMod) + static_cast<std::uint64_t>(p >> 61);
  if (r >= kMod) r -= kMod;
  return r;
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t r = a + b;
  return r >= kMod ? r - kMod : r;
}

}  // namespace

FunctionalFamily validated(FunctionalFamily family) {
  if (auto* red = std::get_if<Reduction>(&family); red && red->r == 0) {
    throw Error(ErrorKind::ConfigInvalid, "reduction needs r >= 1");
  }
  if (auto* od = std::get_if<OutdegreeCount>(&family)) {
    if (od->R.empty()) throw Error(ErrorKind::ConfigInvalid, "outdegree set R is empty");
    std::sort(od->R.begin(), od->R.end());
    od->R.erase(std::unique(od->R.begin(), od->R.end()), od->R.end());
  }
  return family;
}

std::string family_name(const FunctionalFamily& family) {
  struct Visitor {
    std::string operator()(const IndSet&) const { return "indset"; }
    std::string operator()(const Matching&) const { return "matching"; }
    std::string operator()(const DomSet&) const { return "domset"; }
    std::string operator()(const Reduction& r) const {
      return "reduction(" + reduction_kind_name(r.kind) + "," + std::to_string(r.r) + ")";
    }
    std::string operator()(const FringeCount& f) const {
      return "fringe(" + f.pattern.to_string() + ")";
    }
    std::string operator()(const OutdegreeCount& o) const {
      std::string s = "outdeg(";
      for (std::size_t i = 0; i < o.R.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(o.R[i]);
      }
      return s + ")";
    }
  };
  return std::visit(Visitor{}, family);
}

bool is_integer_family(const FunctionalFamily& family) {
  return !std::holds_alternative<IndSet>(family) && !std::holds_alternative<Matching>(family) &&
         !std::holds_alternative<DomSet>(family);
}

DomStep dom_step(double p0, double log_q) {
  // d / prod d_i = 1 - P0 + Q with Q = prod (1 + rho*_i), kept in log space
  const double q = std::exp(log_q);
  const double toll = log_q + std::log1p((1.0 - p0) / q);
  const double inv = std::exp(-toll);
  return {(1.0 - p0) * inv, p0 * inv, toll};
}

std::pair<AdditiveEvaluation, IndState> eval_independent(const Tree& t, bool keep_tolls) {
  const auto n = t.size();
  const auto par = t.parents();
  IndState st;
  st.rho.resize(n);
  std::vector<double> prod(n, 1.0);
  auto ev = collect(n, keep_tolls, [&](NodeId v) {
    st.rho[v] = ind_rho(prod[v]);
    if (v) prod[par[v]] *= st.rho[v];
    return std::log1p(prod[v]);
  });
  return {std::move(ev), std::move(st)};
}

std::pair<AdditiveEvaluation, MatchState> eval_matching(const Tree& t, bool keep_tolls) {
  const auto n = t.size();
  const auto par = t.parents();
  MatchState st;
  st.rho.resize(n);
  std::vector<double> sum(n, 0.0);
  auto ev = collect(n, keep_tolls, [&](NodeId v) {
    st.rho[v] = match_rho(sum[v]);
    if (v) sum[par[v]] += st.rho[v];
    return std::log1p(sum[v]);
  });
  return {std::move(ev), std::move(st)};
}

std::pair<AdditiveEvaluation, DomState> eval_dominating(const Tree& t, bool keep_tolls) {
  const auto n = t.size();
  const auto par = t.parents();
  DomState st;
  st.rho0.resize(n);
  st.rho_star.resize(n);
  std::vector<double> p0(n, 1.0), log_q(n, 0.0);
  bool warn = false;
  auto ev = collect(n, keep_tolls, [&](NodeId v) {
    if (t.outdeg(v) > kDomPrecisionDegree) warn = true;
    const auto s = dom_step(p0[v], log_q[v]);
    st.rho0[v] = s.rho0;
    st.rho_star[v] = s.rho_star;
    if (v) {
      p0[par[v]] *= s.rho0;
      log_q[par[v]] += std::log1p(s.rho_star);
    }
    return s.toll;
  });
  ev.precision_warning = warn;
  return {std::move(ev), std::move(st)};
}

AdditiveEvaluation eval_fringe_count(const Tree& t, const Tree& pattern, bool keep_tolls) {
  const auto n = t.size();
  const auto m = pattern.size();
  const auto deg = t.outdegrees();
  const auto pat = pattern.outdegrees();

  // prefix[i] = hash of deg[0..i); hash of deg[l..l+m) = prefix[l+m] - prefix[l] B^m
  std::vector<std::uint64_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = addmod(mulmod(prefix[i], kBase), deg[i] + 1);
  std::uint64_t target = 0, base_m = 1;
  for (std::size_t i = 0; i < m; ++i) {
    target = addmod(mulmod(target, kBase), pat[i] + 1);
    base_m = mulmod(base_m, kBase);
  }

  return collect(n, keep_tolls, [&](NodeId v) -> double {
    if (t.subtree_size(v) != m) return 0.0;
    const auto h = addmod(prefix[v + m], kMod - mulmod(prefix[v], base_m));
    if (h != target) return 0.0;
    return std::equal(pat.begin(), pat.end(), deg.begin() + v) ? 1.0 : 0.0;
  });
}

AdditiveEvaluation eval_outdegree_count(const Tree& t, const std::vector<std::uint32_t>& R,
                                        bool keep_tolls) {
  std::vector<std::uint32_t> sorted(R);
  std::sort(sorted.begin(), sorted.end());
  return collect(t.size(), keep_tolls, [&](NodeId v) {
    return std::binary_search(sorted.begin(), sorted.end(), t.outdeg(v)) ? 1.0 : 0.0;
  });
}

AdditiveEvaluation eval_reduction(const Tree& t, ReductionKind kind, std::uint32_t r,
                                  bool keep_tolls) {
  const auto tolls = reduction_tolls(t, reduce_r(t, kind, r), r);
  return collect(t.size(), keep_tolls, [&](NodeId v) { return double(tolls[v]); });
}

AdditiveEvaluation evaluate(const FunctionalFamily& family, const Tree& t, bool keep_tolls) {
  struct Visitor {
    const Tree& t;
    bool keep;
    AdditiveEvaluation operator()(const IndSet&) const { return eval_independent(t, keep).first; }
    AdditiveEvaluation operator()(const Matching&) const { return eval_matching(t, keep).first; }
    AdditiveEvaluation operator()(const DomSet&) const { return eval_dominating(t, keep).first; }
    AdditiveEvaluation operator()(const Reduction& r) const {
      return eval_reduction(t, r.kind, r.r, keep);
    }
    AdditiveEvaluation operator()(const FringeCount& f) const {
      return eval_fringe_count(t, f.pattern, keep);
    }
    AdditiveEvaluation operator()(const OutdegreeCount& o) const {
      return eval_outdegree_count(t, o.R, keep);
    }
  };
  return std::visit(Visitor{t, keep_tolls}, family);
}

double toll_value(const FunctionalFamily& family, const Tree& t) {
  struct Visitor {
    const Tree& t;
    double operator()(const Reduction& r) const { return reduction_toll(t, r.kind, r.r); }
    double operator()(const FringeCount& f) const { return t == f.pattern ? 1.0 : 0.0; }
    double operator()(const OutdegreeCount& o) const {
      return std::find(o.R.begin(), o.R.end(), t.root_degree()) != o.R.end() ? 1.0 : 0.0;
    }
    double operator()(const IndSet&) const { return eval_independent(t, false).first.root_toll; }
    double operator()(const Matching&) const { return eval_matching(t, false).first.root_toll; }
    double operator()(const DomSet&) const { return eval_dominating(t, false).first.root_toll; }
  };
  return std::visit(Visitor{t}, family);
}

}  // namespace gwt
