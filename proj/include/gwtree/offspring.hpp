#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gwt {

class Rng;

enum class OffspringKind { Geometric, Poisson, Binary, Custom };

/// Descriptor as found in config files: {"kind": ..., "pmf": [...]}.
struct DistributionSpec {
  OffspringKind kind = OffspringKind::Geometric;
  std::vector<double> pmf;  // only for Custom

  static DistributionSpec geometric() { return {OffspringKind::Geometric, {}}; }
  static DistributionSpec poisson() { return {OffspringKind::Poisson, {}}; }
  static DistributionSpec binary() { return {OffspringKind::Binary, {}}; }
  static DistributionSpec custom(std::vector<double> pmf) {
    return {OffspringKind::Custom, std::move(pmf)};
  }
};

/// Parses "geometric" | "poisson" | "binary" (also "geometric-1/2", "poisson-1", "binary-half").
/// Throws Error{ConfigInvalid} for anything else.
OffspringKind parse_offspring_kind(const std::string& name);
std::string offspring_kind_name(OffspringKind kind);

// Probability mass function of the offspring variable xi with cached moments.
// Built-in laws are truncated where the remaining tail mass drops below 1e-15
// and the tail is folded into the last retained atom, so the pmf sums to one.
class OffspringDistribution {
 public:
  static constexpr int kMaxMoment = 8;

  OffspringKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double p(std::size_t k) const noexcept { return k < pmf_.size() ? pmf_[k] : 0.0; }
  std::size_t max_degree() const noexcept { return pmf_.size() - 1; }

  double mean() const noexcept { return moments_[1]; }
  double variance() const noexcept { return moments_[2] - moments_[1] * moments_[1]; }
  /// Raw moment E xi^r for 0 <= r <= kMaxMoment.
  double moment(int r) const;

  /// Set when the law violates the critical-GW hypotheses (E xi = 1, 0 < Var xi < inf).
  /// These are warnings, not errors.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool is_critical() const noexcept { return warnings_.empty(); }

  /// Inverse-CDF draw.
  std::uint32_t draw(Rng& rng) const;
  /// Draw from the size-biased law k * p[k] / E xi.
  std::uint32_t draw_size_biased(Rng& rng) const;

  /// gcd of the positive support points (0 if xi is a.s. 0).
  std::uint32_t support_gcd() const noexcept { return support_gcd_; }

 private:
  friend OffspringDistribution make_offspring(const DistributionSpec& spec);

  OffspringKind kind_ = OffspringKind::Custom;
  std::string name_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  std::vector<double> biased_cdf_;
  double moments_[kMaxMoment + 1] = {};
  std::vector<std::string> warnings_;
  std::uint32_t support_gcd_ = 0;
};

/// Size-biased offspring law p_hat[k] = k p[k] (exactly a pmf when E xi = 1).
struct SizeBiasedOffspring {
  std::vector<double> pmf;
};
SizeBiasedOffspring size_biased(const OffspringDistribution& dist);

/// Throws Error{InvalidPmf} on negative mass or a total mass outside [1 - 1e-12, 1 + 1e-12].
OffspringDistribution make_offspring(const DistributionSpec& spec);

}  // namespace gwt
