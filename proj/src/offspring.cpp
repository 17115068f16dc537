#include "gwtree/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gwtree/errors.hpp"
#include "gwtree/rng.hpp"

namespace gwt {

namespace {

constexpr double kTailCut = 1e-15;
constexpr double kMassTolerance = 1e-12;

std::vector<double> truncated_poisson() {
  std::vector<double> p;
  double term = std::exp(-1.0);
  for (int k = 0; term >= kTailCut; ++k) {
    p.push_back(term);
    term /= (k + 1);
  }
  p.back() += 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
  return p;
}

std::vector<double> truncated_geometric() {
  std::vector<double> p;
  double term = 0.5;
  while (term >= kTailCut) {
    p.push_back(term);
    term *= 0.5;
  }
  // the remaining tail equals the last atom; fold it in
  p.back() += 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
  return p;
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  std::partial_sum(w.begin(), w.end(), c.begin());
  const double total = c.back();
  for (auto& x : c) x /= total;
  c.back() = 1.0;
  return c;
}

}  // namespace

OffspringKind parse_offspring_kind(const std::string& name) {
  if (name == "geometric" || name == "geometric-1/2") return OffspringKind::Geometric;
  if (name == "poisson" || name == "poisson-1") return OffspringKind::Poisson;
  if (name == "binary" || name == "binary-half") return OffspringKind::Binary;
  if (name == "custom") return OffspringKind::Custom;
  throw Error(ErrorKind::ConfigInvalid, "unknown offspring distribution '" + name + "'");
}

std::string offspring_kind_name(OffspringKind kind) {
  switch (kind) {
    case OffspringKind::Geometric: return "geometric";
    case OffspringKind::Poisson: return "poisson";
    case OffspringKind::Binary: return "binary";
    case OffspringKind::Custom: return "custom";
  }
  return "custom";
}

double OffspringDistribution::moment(int r) const {
  if (r < 0 || r > kMaxMoment) {
    throw Error(ErrorKind::LimitExceeded, "moment order " + std::to_string(r));
  }
  return moments_[r];
}

std::uint32_t OffspringDistribution::draw(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
}

std::uint32_t OffspringDistribution::draw_size_biased(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(biased_cdf_.begin(), biased_cdf_.end(), u);
  return static_cast<std::uint32_t>(
      std::min<std::ptrdiff_t>(it - biased_cdf_.begin(), biased_cdf_.size() - 1));
}

SizeBiasedOffspring size_biased(const OffspringDistribution& dist) {
  SizeBiasedOffspring out;
  out.pmf.resize(dist.pmf().size());
  for (std::size_t k = 0; k < out.pmf.size(); ++k) out.pmf[k] = k * dist.p(k) / dist.mean();
  return out;
}

OffspringDistribution make_offspring(const DistributionSpec& spec) {
  OffspringDistribution d;
  d.kind_ = spec.kind;
  switch (spec.kind) {
    case OffspringKind::Geometric:
      d.pmf_ = truncated_geometric();
      d.name_ = "geometric-1/2";
      break;
    case OffspringKind::Poisson:
      d.pmf_ = truncated_poisson();
      d.name_ = "poisson-1";
      break;
    case OffspringKind::Binary:
      d.pmf_ = {0.5, 0.0, 0.5};
      d.name_ = "binary-half";
      break;
    case OffspringKind::Custom: {
      if (spec.pmf.empty()) throw Error(ErrorKind::InvalidPmf, "empty pmf");
      double total = 0.0;
      for (std::size_t k = 0; k < spec.pmf.size(); ++k) {
        const double x = spec.pmf[k];
        if (!(x >= 0.0) || !std::isfinite(x)) {
          throw Error(ErrorKind::InvalidPmf, "negative or non-finite mass at k=" + std::to_string(k));
        }
        total += x;
      }
      if (std::abs(total - 1.0) > kMassTolerance) {
        throw Error(ErrorKind::InvalidPmf, "mass sums to " + std::to_string(total));
      }
      d.pmf_ = spec.pmf;
      while (d.pmf_.size() > 1 && d.pmf_.back() == 0.0) d.pmf_.pop_back();
      d.name_ = "custom";
      break;
    }
  }

  for (int r = 0; r <= OffspringDistribution::kMaxMoment; ++r) {
    double m = 0.0;
    for (std::size_t k = 0; k < d.pmf_.size(); ++k) m += d.pmf_[k] * std::pow(double(k), r);
    d.moments_[r] = m;
  }
  d.cdf_ = cumulative(d.pmf_);
  std::vector<double> biased(d.pmf_.size());
  for (std::size_t k = 0; k < biased.size(); ++k) biased[k] = k * d.pmf_[k];
  if (d.moments_[1] > 0.0) d.biased_cdf_ = cumulative(biased);
  else d.biased_cdf_ = d.cdf_;

  std::uint32_t g = 0;
  for (std::size_t k = 1; k < d.pmf_.size(); ++k) {
    if (d.pmf_[k] > 0.0) g = std::gcd(g, static_cast<std::uint32_t>(k));
  }
  d.support_gcd_ = g;

  if (std::abs(d.mean() - 1.0) > 1e-9) {
    d.warnings_.push_back("mean " + std::to_string(d.mean()) + " != 1");
  }
  if (!(d.variance() > 1e-15)) {
    d.warnings_.push_back("variance " + std::to_string(d.variance()) + " not in (0, inf)");
  }
  return d;
}

}  // namespace gwt
