#include "gwtree/selftest.hpp"

#include <cmath>
#include <sstream>

#include "gwtree/bounds.hpp"
#include "gwtree/oracle.hpp"

namespace gwt {

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint32_t max_n) {
  std::uint64_t trees = 0, oracle_bad = 0, scan_bad = 0, bound_bad = 0, cert_bad = 0;
  std::uint64_t eta_bad = 0, eta_skip = 0, eta_total = 0;
  for (std::uint32_t n = 1; n <= max_n; ++n) {
    for (const auto& t : enumerate_trees(n).trees) {
      ++trees;
      const auto ci = dp_independent(t), cm = dp_matching(t), cd = dp_dominating(t);
      if (!(ci == scan_independent(t)) || !(cm == scan_matching(t)) ||
          !(cd == scan_dominating(t))) {
        ++scan_bad;
      }
      const auto ind = eval_independent(t, false);
      const auto mat = eval_matching(t, false);
      const auto dom = eval_dominating(t, false);
      const bool ok =
          close_rel(std::exp(ind.first.F_value), ci.total.convert_to<double>(), 1e-9) &&
          close_rel(std::exp(mat.first.F_value), cm.total.convert_to<double>(), 1e-9) &&
          close_rel(std::exp(dom.first.F_value), cd.total.convert_to<double>(), 1e-9) &&
          close_rel(ind.second.rho[0], ratio(ci.zero, ci.total), 1e-12) &&
          close_rel(mat.second.rho[0], ratio(cm.zero, cm.total), 1e-12) &&
          close_rel(dom.second.rho0[0], ratio(cd.zero, cd.total), 1e-12) &&
          close_rel(dom.second.rho_star[0], ratio(cd.star, cd.total), 1e-12);
      oracle_bad += !ok;

      for (std::uint32_t M = 1; M <= 8; ++M) {
        for (const FunctionalFamily& f : {FunctionalFamily{IndSet{}}, FunctionalFamily{Matching{}}}) {
          const auto rep = tau_report(t, M, f);
          bound_bad += rep.violated;
          cert_bad += !rep.certified;
        }
        if (M >= 2) {
          const auto rep = tau_report(t, M, DomSet{});
          bound_bad += rep.violated;
          cert_bad += !rep.certified;
        }
      }
      for (std::uint32_t M : {3u, 4u}) {
        const auto r = check_eta_lemma(t, M);
        ++eta_total;
        eta_skip += r.skipped;
        eta_bad += !r.skipped && !r.holds;
      }
    }
  }
  auto detail = [](std::uint64_t bad, std::uint64_t total, const char* what) {
    std::ostringstream os;
    os << bad << " " << what << " out of " << total;
    return os.str();
  };
  std::vector<CheckResult> out;
  out.push_back({"oracle_equivalence", oracle_bad == 0, detail(oracle_bad, trees, "mismatches")});
  out.push_back({"scan_vs_dp", scan_bad == 0, detail(scan_bad, trees, "mismatches")});
  out.push_back({"explicit_bounds", bound_bad == 0, detail(bound_bad, trees, "violations over trees")});
  out.push_back({"certified_cutoff_error", cert_bad == 0, detail(cert_bad, trees, "failures over trees")});
  std::ostringstream eta;
  eta << eta_bad << " violations, " << eta_skip << " skipped of " << eta_total;
  out.push_back({"eta_recursion", eta_bad == 0, eta.str()});
  return out;
}

}  // namespace gwt
