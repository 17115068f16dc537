#include "gwtree/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "gwtree/errors.hpp"

namespace gwt {

namespace {

constexpr std::size_t kMinNormalitySample = 100;
constexpr double kBandSigmas = 3.3;

double neumaier(std::span<const double> x, auto&& term) {
  double sum = 0.0, comp = 0.0;
  for (double xi : x) {
    const double v = term(xi);
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

SampleMoments sample_moments(std::span<const double> x) {
  SampleMoments m;
  m.n = x.size();
  if (x.empty()) return m;
  const double n = static_cast<double>(x.size());
  m.mean = neumaier(x, [](double v) { return v; }) / n;
  const double mu = m.mean;
  const double m2 = neumaier(x, [mu](double v) { return (v - mu) * (v - mu); }) / n;
  const double m3 = neumaier(x, [mu](double v) { return std::pow(v - mu, 3); }) / n;
  const double m4 = neumaier(x, [mu](double v) { return std::pow(v - mu, 4); }) / n;
  m.variance = x.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

std::vector<double> standardize(std::span<const double> x) {
  const auto m = sample_moments(x);
  const double sd = std::sqrt(m.variance);
  if (!(sd > 0.0)) return {};
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - m.mean) / sd;
  return z;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // the series needs many terms; the tail is 1 to 1e-20
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_distance_normal(std::span<const double> z) {
  std::vector<double> s(z.begin(), z.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal_cdf(s[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

NormalityReport normality_report(std::span<const double> sample) {
  if (sample.size() < kMinNormalitySample) {
    throw Error(ErrorKind::SampleTooSmall, "normality report needs >= 100 points, got " +
                                               std::to_string(sample.size()));
  }
  NormalityReport rep;
  rep.n = sample.size();
  const double n = static_cast<double>(rep.n);
  rep.skew_band = kBandSigmas * std::sqrt(6.0 / n);
  rep.kurt_band = kBandSigmas * std::sqrt(24.0 / n);
  const auto z = standardize(sample);
  if (z.empty()) {
    rep.degenerate = true;
    return rep;
  }
  const auto m = sample_moments(z);
  rep.skewness = m.skewness;
  rep.excess_kurtosis = m.excess_kurtosis;
  rep.ks_distance = ks_distance_normal(z);
  const double sn = std::sqrt(n);
  rep.ks_pvalue = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * rep.ks_distance);
  rep.normal = std::abs(rep.skewness) < rep.skew_band && std::abs(rep.excess_kurtosis) < rep.kurt_band;
  return rep;
}

double chi_square_pvalue(double statistic, double dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

double chi_square_critical(double alpha, double dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

ChiSquare chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probs,
                          double min_expected) {
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  ChiSquare out;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = probs[i] * total;
    const double o = static_cast<double>(observed[i]);
    if (e < min_expected) {
      pooled_obs += o;
      pooled_exp += e;
      continue;
    }
    out.statistic += (o - e) * (o - e) / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    out.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  out.dof = cells > 1 ? static_cast<double>(cells - 1) : 1.0;
  out.pvalue = chi_square_pvalue(out.statistic, out.dof);
  return out;
}

}  // namespace gwt
