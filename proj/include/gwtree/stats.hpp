#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gwt {

struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n - 1)
  double skewness = 0.0;  // m3 / m2^1.5, population moments
  double excess_kurtosis = 0.0;
};

/// Two-pass moments with compensated sums; summation order is the input order.
SampleMoments sample_moments(std::span<const double> x);

/// (x - mean) / sd, sd unbiased. Empty when sd == 0.
std::vector<double> standardize(std::span<const double> x);

double normal_cdf(double z);

/// Kolmogorov distribution tail P(K > lambda) (asymptotic series).
double kolmogorov_tail(double lambda);

/// sup |F_n - Phi| for a sample already on the N(0,1) scale.
double ks_distance_normal(std::span<const double> z);

struct NormalityReport {
  std::size_t n = 0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_distance = 0.0;
  double ks_pvalue = 0.0;  // approximate: Stephens-corrected Kolmogorov tail
  double skew_band = 0.0;  // 3.3 sqrt(6/n)
  double kurt_band = 0.0;  // 3.3 sqrt(24/n)
  bool degenerate = false;  // sd == 0; no statistics computed
  bool normal = false;      // both moment statistics inside their bands
};

/// The sample is standardized internally (a no-op for an already standardized
/// one). Error{SampleTooSmall} below 100 points.
NormalityReport normality_report(std::span<const double> sample);

double chi_square_pvalue(double statistic, double dof);
double chi_square_critical(double alpha, double dof);

/// Pearson statistic for observed counts against expected probabilities;
/// cells with expected count below `min_expected` are pooled into one.
struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
  double pvalue = 1.0;
};
ChiSquare chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probs,
                          double min_expected = 5.0);

}  // namespace gwt
