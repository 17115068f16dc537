#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "gwtree/experiments.hpp"
#include "gwtree/oracle.hpp"
#include "helpers.hpp"

namespace gwt {
namespace {

std::vector<SizeSummary> synthetic(double c, double drift_scale, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> noise;
  std::vector<SizeSummary> out;
  for (std::uint64_t n : {1000u, 4000u, 16000u}) {
    std::vector<double> F(2000);
    for (auto& f : F) f = c * n + drift_scale * std::sqrt(double(n)) + std::sqrt(double(n)) * noise(eng);
    out.push_back(summarize(n, std::move(F)));
  }
  return out;
}

TEST(MeanDrift, LinearMeanPasses) {
  int pass = 0;
  for (std::uint64_t s = 0; s < 20; ++s) pass += mean_drift_check(synthetic(0.37, 0.0, s)).pass;
  EXPECT_GE(pass, 18);
}

TEST(MeanDrift, SqrtDriftFails) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto rep = mean_drift_check(synthetic(0.37, 1.0, s));
    EXPECT_FALSE(rep.pass);
  }
}

TEST(MeanDrift, InsufficientSizes) {
  auto s = synthetic(1, 0, 1);
  s.pop_back();
  EXPECT_GWT_ERROR(mean_drift_check(s), InsufficientSizes);
  std::vector<SizeSummary> narrow;
  for (std::uint64_t n : {100u, 200u, 400u}) narrow.push_back(summarize(n, {1.0, 2.0, 3.0}));
  EXPECT_GWT_ERROR(mean_drift_check(narrow), InsufficientSizes);
}

TEST(Experiment, BinaryLeafCountIsDeterministic) {
  ExperimentConfig cfg;
  cfg.dist = DistributionSpec::binary();
  cfg.family = OutdegreeCount{{0}};
  cfg.sizes = {5, 51, 500};
  cfg.replicates = 200;
  cfg.threads = 2;
  const auto sum = run_experiment(cfg);
  EXPECT_EQ(sum.sizes[2].n, 501u);  // parity adjustment
  for (const auto& s : sum.sizes) {
    EXPECT_EQ(s.var_F, 0.0);
    for (double f : s.F) EXPECT_EQ(f, (s.n + 1) / 2.0);
    EXPECT_TRUE(s.normality && s.normality->degenerate);
  }
}

double standard_error(const SizeSummary& s) { return std::sqrt(s.var_F / s.replicates); }

TEST(Experiment, MatchesExactExpectation) {
  const auto g = make_offspring(DistributionSpec::geometric());
  ExperimentConfig cfg;
  cfg.family = FringeCount{Tree()};
  cfg.sizes = {5};
  cfg.replicates = 100000;
  cfg.seed = 5;
  auto s = run_experiment(cfg).sizes[0];
  EXPECT_LE(std::abs(s.mean_F - exact_expectation(cfg.family, g, 5).EF_n), 3 * standard_error(s));

  // both shapes with 3 nodes have I = 5, so F is constant up to rounding
  cfg.family = IndSet{};
  cfg.sizes = {3};
  s = run_experiment(cfg).sizes[0];
  EXPECT_LE(std::abs(s.mean_F - exact_expectation(IndSet{}, g, 3).EF_n),
            3 * standard_error(s) + 1e-12);
}

TEST(Experiment, ThreadCountInvariance) {
  ExperimentConfig cfg;
  cfg.dist = DistributionSpec::poisson();
  cfg.family = DomSet{};
  cfg.sizes = {50, 200, 800};
  cfg.replicates = 300;
  cfg.seed = 17;
  cfg.cutoffs = {2, 3};
  cfg.pm_outer = 50;
  cfg.pm_inner = 4;
  cfg.pm_n = 100;
  cfg.pm_replicates = 50;
  cfg.threads = 1;
  const auto a = run_experiment(cfg);
  cfg.threads = 7;
  const auto b = run_experiment(cfg);
  EXPECT_EQ(summary_json(a), summary_json(b));
  for (std::size_t k = 0; k < a.sizes.size(); ++k) {
    EXPECT_EQ(a.sizes[k].F, b.sizes[k].F);
    EXPECT_EQ(a.sizes[k].seeds, b.sizes[k].seeds);
  }
}

TEST(Experiment, StandardizedSampleIsNormalized) {
  ExperimentConfig cfg;
  cfg.family = Matching{};
  cfg.sizes = {300};
  cfg.replicates = 500;
  const auto s = run_experiment(cfg).sizes[0];
  const auto m = sample_moments(s.standardized);
  EXPECT_NEAR(m.mean, 0.0, 1e-9);
  EXPECT_NEAR(m.variance, 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(s.gamma2_hat, s.var_F / 300);
}

TEST(Config, ParseFull) {
  const auto cfg = parse_experiment_config(R"({
    "dist": {"kind": "custom", "pmf": [0.4, 0.3, 0.2, 0.1]},
    "family": {"kind": "reduction", "reduction": "oldpath", "r": 2},
    "sizes": [100, 1000], "replicates": 50, "seed": 9, "cutoffs": [2, 4],
    "threads": 3, "pm": {"delta": 6, "inner": 8}, "out": "res", "histogram": true})");
  EXPECT_EQ(cfg.dist.kind, OffspringKind::Custom);
  EXPECT_EQ(cfg.dist.pmf.size(), 4u);
  const auto& red = std::get<Reduction>(cfg.family);
  EXPECT_EQ(red.kind, ReductionKind::OldPath);
  EXPECT_EQ(red.r, 2u);
  EXPECT_EQ(cfg.sizes, (std::vector<std::uint64_t>{100, 1000}));
  EXPECT_EQ(cfg.pm_delta, 6u);
  EXPECT_EQ(cfg.pm_inner, 8u);
  EXPECT_EQ(cfg.pm_outer, 2000u);
  EXPECT_EQ(cfg.out_dir, "res");
  EXPECT_TRUE(cfg.histogram);
  // round trip through the canonical form
  const auto again = parse_experiment_config(experiment_config_json(cfg));
  EXPECT_EQ(experiment_config_json(again), experiment_config_json(cfg));
  EXPECT_EQ(std::get<FringeCount>(parse_family(R"({"kind":"fringe","pattern":"1 0"})")).pattern,
            build_tree({1, 0}));
  EXPECT_EQ(std::get<OutdegreeCount>(parse_family(R"({"kind":"outdeg","R":[2,0]})")).R,
            (std::vector<std::uint32_t>{0, 2}));
}

TEST(Config, ThreadsDoNotChangeTheCanonicalForm) {
  auto a = parse_experiment_config(R"({"threads": 1})");
  auto b = parse_experiment_config(R"({"threads": 8, "out": "x"})");
  EXPECT_EQ(experiment_config_json(a), experiment_config_json(b));
}

TEST(Config, Invalid) {
  for (const char* bad : {
           R"({"replicates": 1})",
           R"({"sizes": []})",
           R"({"sizes": [0]})",
           R"({"bogus": 1})",
           R"({"dist": "cauchy"})",
           R"({"dist": {"kind": "custom"}})",
           R"({"family": "reduction"})",
           R"({"family": {"kind": "reduction", "r": 0}})",
           R"({"family": {"kind": "outdeg", "R": []}})",
           R"({"pm": {"inner": 0}})",
           R"({"pm": {"what": 0}})",
           R"([1, 2])",
           R"({"sizes": "ten"})",
           R"(not json)",
       }) {
    EXPECT_GWT_ERROR(parse_experiment_config(bad), ConfigInvalid);
  }
}

TEST(Experiment, FeasibleSize) {
  const auto b = make_offspring(DistributionSpec::binary());
  EXPECT_EQ(feasible_size(b, 4), 5u);
  EXPECT_EQ(feasible_size(b, 5), 5u);
  const auto c = make_offspring(DistributionSpec::custom({0.5, 0, 0, 0.5}));
  EXPECT_EQ(feasible_size(c, 2), 4u);
}

TEST(PmCurve, LeafReductionVanishes) {
  ExperimentConfig cfg;
  cfg.family = Reduction{ReductionKind::Leaf, 1};
  cfg.cutoffs = {2, 3, 4, 6};
  cfg.pm_outer = 300;
  cfg.pm_inner = 8;
  cfg.pm_n = 300;
  cfg.pm_replicates = 200;
  const auto c = pm_curve(cfg);
  EXPECT_TRUE(c.size_biased_zero);
  EXPECT_TRUE(c.conditioned_zero);
  cfg.family = FringeCount{Tree()};
  EXPECT_GWT_ERROR(pm_curve(cfg), ConfigInvalid);
}

TEST(PmCurve, IndSetDecays) {
  ExperimentConfig cfg;
  cfg.family = IndSet{};
  cfg.cutoffs = {2, 4, 6, 8};
  cfg.pm_outer = 400;
  cfg.pm_inner = 16;
  cfg.pm_n = 300;
  cfg.pm_replicates = 300;
  const auto c = pm_curve(cfg);
  EXPECT_GT(c.size_biased_base, 0.0);
  EXPECT_LT(c.size_biased_base, 0.9);
  EXPECT_LT(c.conditioned_base, 0.9);
}

TEST(Outputs, FilesAreWritten) {
  const auto dir = std::filesystem::temp_directory_path() / "gwtree_outputs_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg;
  cfg.sizes = {20};
  cfg.replicates = 120;
  cfg.out_dir = dir.string();
  cfg.histogram = true;
  const auto sum = run_experiment(cfg);
  write_outputs(sum, cfg, "# test\n");
  std::ifstream csv(dir / "replicates.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "# test");
  std::getline(csv, line);
  EXPECT_EQ(line, "n,replicate,seed,F,toll_root");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 120);
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "histogram_20.svg"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace gwt
