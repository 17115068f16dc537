#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwtree/functionals.hpp"
#include "gwtree/offspring.hpp"
#include "gwtree/stats.hpp"

namespace gwt {

struct ExperimentConfig {
  DistributionSpec dist;
  FunctionalFamily family = IndSet{};
  std::vector<std::uint64_t> sizes{1000};
  std::uint64_t replicates = 1000;
  std::uint64_t seed = 42;
  std::vector<std::uint32_t> cutoffs;  // p_M curve; empty = no curve
  std::uint32_t alpha = 1;             // moment order checked: E xi^(2 alpha + 1)
  std::uint32_t threads = 0;           // 0 = hardware concurrency
  std::uint64_t rejection_budget = 1'000'000;
  // p_M curve
  std::uint32_t pm_delta = 12;        // N = M + delta
  std::uint32_t pm_inner = 32;        // K extensions per outer sample
  std::uint64_t pm_outer = 2000;      // outer size-biased samples per M
  std::uint64_t pm_n = 1000;          // size of the conditioned trees
  std::uint64_t pm_replicates = 2000;
  // outputs
  std::string out_dir;  // empty = no files
  bool histogram = false;
};

/// Parses the JSON config (schema in docs/config.md). Error{ConfigInvalid}.
ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_json(const ExperimentConfig& cfg);
FunctionalFamily parse_family(const std::string& json_text);

/// Smallest n' >= n with P(|T| = n') > 0 (e.g. the next odd size for binary trees).
std::uint64_t feasible_size(const OffspringDistribution& dist, std::uint64_t n);

struct SizeSummary {
  std::uint64_t requested_n = 0;
  std::uint64_t n = 0;  // after parity adjustment
  std::uint64_t replicates = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> F;
  std::vector<double> root_toll;
  double mean_F = 0.0;
  double mu_hat = 0.0;       // mean_F / n
  double var_F = 0.0;
  double gamma2_hat = 0.0;   // var_F / n
  std::vector<double> standardized;
  std::optional<NormalityReport> normality;  // when replicates >= 100
  bool precision_warning = false;
};

struct DriftReport {
  double mu_hat = 0.0;
  double intercept = 0.0;
  std::vector<std::uint64_t> n;
  std::vector<double> r_n;          // (mean_F - mu_hat n) / sqrt(n)
  std::vector<double> r_se;         // MC standard error of r_n
  std::vector<double> fit_residual; // mean_F - (mu_hat n + intercept)
  std::vector<double> fit_se;       // standard error of mean_F
  double loglog_slope = 0.0;
  bool linear_fit_ok = false;   // every fit residual within 3 SE
  bool drift_vanishes = false;  // slope < 0, or every r_n within 3 SE of 0
  bool pass = false;
};

struct PmPoint {
  std::uint32_t M = 0;
  double size_biased_gap = 0.0;     // mean |f(T^(M)) - mean_k f(T^(N)_k)|
  double size_biased_bias = 0.0;    // mean sd_inner / sqrt(K)
  double conditioned_error = 0.0;   // mean |f(T_n) - f(T_n^(M))|
};

struct PmCurve {
  std::vector<PmPoint> points;
  double size_biased_base = 0.0;   // exp(slope) of log gap vs M; 0 if all gaps vanish
  double conditioned_base = 0.0;
  bool size_biased_zero = false;
  bool conditioned_zero = false;
};

struct ExperimentSummary {
  std::string family;
  std::string dist;
  std::uint64_t seed = 0;
  double moment_2a1 = 0.0;  // E xi^(2 alpha + 1) of the law in use
  std::vector<SizeSummary> sizes;
  std::optional<DriftReport> drift;  // >= 3 sizes spanning a decade
  std::optional<PmCurve> pm;
};

/// Results do not depend on the thread count: replicate i of size index k
/// uses the stream derive_seed(seed, k, i) and results are reduced in index order.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Error{InsufficientSizes} unless >= 3 sizes with max/min >= 10.
DriftReport mean_drift_check(const std::vector<SizeSummary>& sizes);

/// Families IndSet, Matching, DomSet, Reduction (Error{ConfigInvalid} otherwise).
PmCurve pm_curve(const ExperimentConfig& cfg);

/// Aggregates F values (in index order) into a summary for size n.
SizeSummary summarize(std::uint64_t n, std::vector<double> F, std::vector<double> root_toll = {});

/// Writes replicates.csv, summary.json and (optionally) histogram_<n>.svg.
void write_outputs(const ExperimentSummary& summary, const ExperimentConfig& cfg,
                   const std::string& header);

std::string summary_json(const ExperimentSummary& summary);
std::string histogram_svg(const SizeSummary& s);

unsigned resolve_threads(std::uint32_t requested);

}  // namespace gwt
