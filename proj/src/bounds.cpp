#include "gwtree/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gwtree/errors.hpp"

namespace gwt {

namespace {

constexpr double kUlp = 0x1.0p-52;
constexpr double kCertSlack = 1e-12;
constexpr double kBoundSlack = 1e-9;

double widen(std::uint32_t deg) { return (deg + 8) * kUlp; }
double down(double x, double eps) { return x * (1.0 - eps); }
double up(double x, double eps) { return x * (1.0 + eps); }

// Nodes strictly above `level` whose whole fringe is above `level` too.
std::vector<char> observed(const Tree& t, const std::vector<std::uint32_t>& depth,
                           std::uint32_t level) {
  const auto n = t.size();
  std::vector<char> exact(n, 1);
  for (NodeId v = static_cast<NodeId>(n); v-- > 0;) {
    if (depth[v] >= level) exact[v] = 0;
    if (!exact[v] && v) exact[t.parent(v)] = 0;
  }
  return exact;
}

// DomSet envelopes at any M >= 0 (the lemma check needs M = 1).
DomIntervalState dom_envelopes(const Tree& t, std::uint32_t M) {
  const auto n = t.size();
  const auto depth = t.depths();
  const auto exact = observed(t, depth, M);
  const auto par = t.parents();

  DomIntervalState st;
  st.M = M;
  st.rho0_inf.assign(n, 0.0);
  st.rho0_sup.assign(n, 0.5);
  st.rhostar_inf.assign(n, 0.0);
  st.rhostar_sup.assign(n, 1.0);
  // Child accumulators: P0 = prod rho0 and log Q = sum log1p(rho*), as ranges.
  std::vector<double> p_lo(n, 1.0), p_hi(n, 1.0), lq_lo(n, 0.0), lq_hi(n, 0.0);

  for (NodeId v = static_cast<NodeId>(n); v-- > 0;) {
    if (depth[v] > M) continue;
    if (depth[v] < M) {
      if (exact[v]) {
        const auto s = dom_step(p_lo[v], lq_lo[v]);
        st.rho0_inf[v] = st.rho0_sup[v] = s.rho0;
        st.rhostar_inf[v] = st.rhostar_sup[v] = s.rho_star;
      } else {
        // rho0 decreases in P0 and Q; rho* increases in P0, decreases in Q
        double r0_lo = dom_step(p_hi[v], lq_hi[v]).rho0;
        double r0_hi = dom_step(p_lo[v], lq_lo[v]).rho0;
        double rs_lo = dom_step(p_lo[v], lq_hi[v]).rho_star;
        double rs_hi = dom_step(p_hi[v], lq_lo[v]).rho_star;
        const NodeId c = v + 1;
        if (t.outdeg(v) == 1 && depth[c] < M) {
          // Two levels at once: rho0 = Q/(1+2Q), rho* = (1-P0)/(1+2Q) with
          // P0, Q taken over the grandchildren.
          auto r0 = [](double lq) { return 1.0 / (2.0 + std::exp(-lq)); };
          auto rs = [](double p, double lq) {
            const double e = std::exp(-lq);
            return (1.0 - p) * e / (e + 2.0);
          };
          r0_lo = std::max(r0_lo, r0(lq_lo[c]));
          r0_hi = std::min(r0_hi, r0(lq_hi[c]));
          rs_lo = std::max(rs_lo, rs(p_hi[c], lq_hi[c]));
          rs_hi = std::min(rs_hi, rs(p_lo[c], lq_lo[c]));
        }
        const double eps = widen(t.outdeg(v));
        st.rho0_inf[v] = std::max(0.0, down(r0_lo, eps));
        st.rho0_sup[v] = std::min(0.5, up(r0_hi, eps));
        st.rhostar_inf[v] = std::max(0.0, down(rs_lo, eps));
        st.rhostar_sup[v] = std::min(1.0, up(rs_hi, eps));
      }
    }
    if (v) {
      const auto p = par[v];
      p_lo[p] *= st.rho0_inf[v];
      p_hi[p] *= st.rho0_sup[v];
      lq_lo[p] += std::log1p(st.rhostar_inf[v]);
      lq_hi[p] += std::log1p(st.rhostar_sup[v]);
    }
  }
  return st;
}

struct DomTaus {
  LogRatio tau0, tau_star;
  double eta = 0.0;
  bool infinite = false;
};

DomTaus dom_taus(const DomIntervalState& st, NodeId v = 0) {
  DomTaus d;
  d.tau0 = log_ratio(st.rho0_inf[v], st.rho0_sup[v]);
  d.tau_star = log_ratio(st.rhostar_inf[v], st.rhostar_sup[v]);
  d.infinite = d.tau0.infinite || d.tau_star.infinite;
  d.eta = d.infinite ? std::numeric_limits<double>::infinity()
                     : kEtaA * d.tau0.value + d.tau_star.value;
  return d;
}

// Root branches whose status may differ between t and t^(M). Under Leaf and
// Path a branch only depends on itself, and truncation can only make it go
// sooner, so only cut branches whose truncated version goes within r rounds
// count. Under OldLeaf and OldPath a branch also depends on when its left
// siblings go, so every branch from the first cut one onwards may change;
// f_r <= r caps the difference there.
double reduction_tau(const Tree& t, std::uint32_t M, const Reduction& red) {
  const auto depth = t.depths();
  const auto exact = observed(t, depth, M + 1);
  const Tree tm = truncate(t, M);
  const auto res = reduce_r(tm, red.kind, red.r);
  // Root children appear in the same order in t and t^(M).
  std::vector<NodeId> kids_t = t.children(0), kids_m = tm.children(0);
  const bool old = red.kind == ReductionKind::OldLeaf || red.kind == ReductionKind::OldPath;
  double tau = 0.0;
  if (old) {
    std::size_t i = 0;
    while (i < kids_t.size() && exact[kids_t[i]]) ++i;
    tau = std::min<double>(double(kids_t.size() - i), red.r);
  } else {
    for (std::size_t i = 0; i < kids_t.size(); ++i) {
      const auto k = res.deletion_round[kids_m[i]];
      if (!exact[kids_t[i]] && k >= 1 && k <= red.r) tau += 1.0;
    }
  }
  return tau;
}

}  // namespace

double eta_c() { return std::sqrt(20.0 / 21.0); }

LogRatio log_ratio(double inf, double sup) {
  if (inf <= 0.0) return sup <= 0.0 ? LogRatio{0.0, false} : LogRatio{0.0, true};
  return {std::log(sup / inf), false};
}

IntervalState interval_eval(const Tree& t, std::uint32_t M, EnvelopeFamily family) {
  const bool ind = family == EnvelopeFamily::IndSet;
  if (!ind && M == 0) {
    throw Error(ErrorKind::CutoffTooSmall, "matching envelopes need M >= 1");
  }
  const auto n = t.size();
  const auto depth = t.depths();
  const auto exact = observed(t, depth, M);
  const auto par = t.parents();
  const std::uint32_t seed_level = ind ? M : M - 1;

  IntervalState st;
  st.family = family;
  st.M = M;
  st.rho_inf.assign(n, ind ? 0.5 : 0.0);
  st.rho_sup.assign(n, 1.0);
  // IndSet accumulates products of child rho, Matching sums.
  std::vector<double> lo(n, ind ? 1.0 : 0.0), hi(n, ind ? 1.0 : 0.0);

  for (NodeId v = static_cast<NodeId>(n); v-- > 0;) {
    if (depth[v] > seed_level) continue;
    const auto deg = t.outdeg(v);
    if (exact[v]) {
      const double r = ind ? ind_rho(lo[v]) : match_rho(lo[v]);
      st.rho_inf[v] = st.rho_sup[v] = r;
    } else if (depth[v] == seed_level) {
      if (!ind) st.rho_inf[v] = 1.0 / (1.0 + deg);
    } else {
      const double eps = widen(deg);
      const double r_lo = ind ? ind_rho(hi[v]) : match_rho(hi[v]);
      const double r_hi = ind ? ind_rho(lo[v]) : match_rho(lo[v]);
      st.rho_inf[v] = std::max(ind ? 0.5 : 1.0 / (1.0 + deg), down(r_lo, eps));
      st.rho_sup[v] = std::min(1.0, up(r_hi, eps));
    }
    if (v) {
      if (ind) {
        lo[par[v]] *= st.rho_inf[v];
        hi[par[v]] *= st.rho_sup[v];
      } else {
        lo[par[v]] += st.rho_inf[v];
        hi[par[v]] += st.rho_sup[v];
      }
    }
  }
  return st;
}

DomIntervalState dom_interval_eval(const Tree& t, std::uint32_t M) {
  if (M < 2) throw Error(ErrorKind::CutoffTooSmall, "dominating-set envelopes need M >= 2");
  return dom_envelopes(t, M);
}

double cutoff_error(const Tree& t, std::uint32_t M, const FunctionalFamily& family) {
  if (t.height() <= M) return 0.0;
  return std::abs(toll_value(family, t) - toll_value(family, truncate(t, M)));
}

TauReport tau_report(const Tree& t, std::uint32_t M, const FunctionalFamily& family,
                     const BoundsConfig& cfg) {
  TauReport rep;
  rep.M = M;
  const auto prof = level_profile(t);
  rep.w_M = prof.at(M);
  rep.cutoff_error = cutoff_error(t, M, family);

  if (std::holds_alternative<IndSet>(family) || std::holds_alternative<Matching>(family)) {
    const bool ind = std::holds_alternative<IndSet>(family);
    const auto st = interval_eval(t, M, ind ? EnvelopeFamily::IndSet : EnvelopeFamily::Matching);
    rep.tau = log_ratio(st.rho_inf[0], st.rho_sup[0]).value;
    rep.bound_rhs = ind ? std::log(2.0) * std::ldexp(1.0, -static_cast<int>(M)) * rep.w_M
                        : std::ldexp(1.0, 1 - static_cast<int>(M)) * rep.w_M;
    rep.violated = rep.tau > rep.bound_rhs + kBoundSlack;
  } else if (std::holds_alternative<DomSet>(family)) {
    const auto st = dom_interval_eval(t, M);
    const auto d = dom_taus(st);
    rep.tau0 = d.tau0.value;
    rep.tau_star = d.tau_star.value;
    rep.tau_star_infinite = d.tau_star.infinite;
    rep.eta = d.eta;
    rep.tau = log_ratio(st.rho0_inf[0] + st.rhostar_inf[0], st.rho0_sup[0] + st.rhostar_sup[0])
                  .value;
    const double c = eta_c();
    rep.bound_rhs = cfg.dom_constant * std::pow(c, M) *
                    double(prof.at(M - 2) + prof.at(M - 1) + prof.at(M));
    rep.violated = d.infinite || rep.eta > rep.bound_rhs + kBoundSlack;
  } else if (const auto* red = std::get_if<Reduction>(&family)) {
    rep.tau = reduction_tau(t, M, *red);
    rep.bound_rhs = t.root_degree();
    rep.violated = rep.tau > rep.bound_rhs + kBoundSlack;
  } else {
    throw Error(ErrorKind::ConfigInvalid,
                "no cut-off bound for family " + family_name(family));
  }
  rep.certified = rep.cutoff_error <= rep.tau + kCertSlack;
  return rep;
}

EtaLemmaReport check_eta_lemma(const Tree& t, std::uint32_t M) {
  if (M < 3) throw Error(ErrorKind::CutoffTooSmall, "the eta recursion needs M >= 3");
  EtaLemmaReport rep;
  const auto lhs = dom_taus(dom_envelopes(t, M));
  double rhs = 0.0;
  bool infinite = lhs.infinite;
  auto add = [&](NodeId v, std::uint32_t level) {
    const auto d = dom_taus(dom_envelopes(truncate(fringe_at(t, v), level), level));
    infinite = infinite || d.infinite;
    if (!d.infinite) rhs += d.eta;
  };
  const double c = eta_c();
  if (t.root_degree() >= 2) {
    t.for_each_child(0, [&](NodeId ch) { add(ch, M - 1); });
    rhs *= c;
  } else {
    const auto depth = t.depths();
    for (NodeId v = 0; v < t.size(); ++v) {
      if (depth[v] == 2) add(v, M - 2);
    }
    rhs *= c * c;
  }
  rep.lhs = lhs.eta;
  rep.rhs = rhs;
  if (infinite) {
    rep.skipped = true;
    return rep;
  }
  rep.holds = rep.lhs <= rep.rhs + kCertSlack;
  return rep;
}

}  // namespace gwt
