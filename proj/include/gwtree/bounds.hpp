#pragma once

#include <cstdint>
#include <vector>

#include "gwtree/functionals.hpp"
#include "gwtree/tree.hpp"

namespace gwt {

enum class EnvelopeFamily { IndSet, Matching };

// Envelopes of rho over all trees S with S^(M) = t^(M). Nodes whose fringe
// lies entirely above depth M are exact (inf == sup); the others are widened
// outward by a few ulps per step so the sandwich survives rounding.
struct IntervalState {
  EnvelopeFamily family = EnvelopeFamily::IndSet;
  std::uint32_t M = 0;
  std::vector<double> rho_inf, rho_sup;
};

struct DomIntervalState {
  std::uint32_t M = 0;
  std::vector<double> rho0_inf, rho0_sup;
  std::vector<double> rhostar_inf, rhostar_sup;
};

/// IndSet seeds the depth-M nodes with [1/2, 1]; Matching seeds the depth-(M-1)
/// nodes with [1/(1+deg), 1] and needs M >= 1 (Error{CutoffTooSmall}).
IntervalState interval_eval(const Tree& t, std::uint32_t M, EnvelopeFamily family);

/// Needs M >= 2 (Error{CutoffTooSmall}).
DomIntervalState dom_interval_eval(const Tree& t, std::uint32_t M);

/// log(sup / inf) with the convention that a zero lower end gives 0 when the
/// upper end is zero too and +infinity otherwise (reported via `infinite`).
struct LogRatio {
  double value = 0.0;
  bool infinite = false;
};
LogRatio log_ratio(double inf, double sup);

inline constexpr double kEtaA = 13.0 / 7.0;
double eta_c();  // sqrt(20/21)

struct TauReport {
  std::uint32_t M = 0;
  // IndSet/Matching: log(rho_sup/rho_inf). DomSet: log of the ratio of the
  // bounds on rho0 + rho*, which bounds the cut-off error directly.
  // Reduction: root branches whose status may change under truncation.
  double tau = 0.0;
  double tau0 = 0.0, tau_star = 0.0, eta = 0.0;  // DomSet only
  bool tau_star_infinite = false;
  double bound_rhs = 0.0;
  std::uint64_t w_M = 0;
  double cutoff_error = 0.0;
  bool certified = true;  // cutoff_error <= tau (+1e-12)
  bool violated = false;  // DomSet: eta > rhs; else tau > rhs (both +1e-9)
};

struct BoundsConfig {
  double dom_constant = 1.0;  // implied constant of the DomSet bound
};

/// Families: IndSet, Matching, DomSet, Reduction. Others give Error{ConfigInvalid}.
TauReport tau_report(const Tree& t, std::uint32_t M, const FunctionalFamily& family,
                     const BoundsConfig& cfg = {});

struct EtaLemmaReport {
  bool holds = true;
  bool skipped = false;  // some eta on either side is infinite
  double lhs = 0.0, rhs = 0.0;
};

/// eta^M(t) <= c * sum_children eta^(M-1) for deg >= 2, and
/// eta^M(t) <= c^2 * sum_{depth 2} eta^(M-2) for deg <= 1. Needs M >= 3.
EtaLemmaReport check_eta_lemma(const Tree& t, std::uint32_t M);

/// |f(t) - f(t^(M))|.
double cutoff_error(const Tree& t, std::uint32_t M, const FunctionalFamily& family);

}  // namespace gwt
