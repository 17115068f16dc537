#include "gwtree/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gwtree/bounds.hpp"
#include "gwtree/errors.hpp"
#include "gwtree/rng.hpp"
#include "gwtree/sampler.hpp"

namespace gwt {

using nlohmann::json;

namespace {

// Stream domains so the p_M curve never reuses the CLT streams.
constexpr std::uint64_t kSizeBiasedDomain = 0x5b1a5ed0ULL;
constexpr std::uint64_t kCutoffDomain = 0xc07f0ffULL;

template <typename Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (std::uint64_t i; (i = next.fetch_add(1)) < count && !failed;) fn(i);
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double mean_of(const std::vector<double>& x) {
  return sample_moments(x).mean;
}

// Slope of log(y) against x over the positive y.
std::optional<double> log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double ly = std::log(y[i]);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    ++k;
  }
  if (k < 2) return std::nullopt;
  const double den = k * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (k * sxy - sx * sy) / den;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return it.key() == k; }) == allowed.end()) {
      invalid(std::string("unknown key '") + it.key() + "' in " + where);
    }
  }
}

DistributionSpec dist_from_json(const json& j) {
  if (j.is_string()) return {parse_offspring_kind(j.get<std::string>()), {}};
  if (!j.is_object()) invalid("dist must be a string or an object");
  check_keys(j, {"kind", "pmf"}, "dist");
  DistributionSpec spec;
  spec.kind = parse_offspring_kind(j.at("kind").get<std::string>());
  if (spec.kind == OffspringKind::Custom) {
    if (!j.contains("pmf")) invalid("custom dist needs a pmf");
    spec.pmf = j.at("pmf").get<std::vector<double>>();
  }
  return spec;
}

json dist_to_json(const DistributionSpec& spec) {
  json j{{"kind", offspring_kind_name(spec.kind)}};
  if (spec.kind == OffspringKind::Custom) j["pmf"] = spec.pmf;
  return j;
}

FunctionalFamily family_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "indset") return IndSet{};
    if (s == "matching") return Matching{};
    if (s == "domset") return DomSet{};
    invalid("family '" + s + "' needs parameters; use an object");
  }
  if (!j.is_object()) invalid("family must be a string or an object");
  check_keys(j, {"kind", "reduction", "r", "pattern", "R"}, "family");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "indset") return IndSet{};
  if (kind == "matching") return Matching{};
  if (kind == "domset") return DomSet{};
  if (kind == "reduction") {
    return validated(Reduction{parse_reduction_kind(j.value("reduction", std::string("leaf"))),
                               j.value("r", 1u)});
  }
  if (kind == "fringe") return FringeCount{parse_tree(j.at("pattern").get<std::string>())};
  if (kind == "outdeg") return validated(OutdegreeCount{j.at("R").get<std::vector<std::uint32_t>>()});
  invalid("unknown family '" + kind + "'");
}

json family_to_json(const FunctionalFamily& f) {
  struct Visitor {
    json operator()(const IndSet&) const { return {{"kind", "indset"}}; }
    json operator()(const Matching&) const { return {{"kind", "matching"}}; }
    json operator()(const DomSet&) const { return {{"kind", "domset"}}; }
    json operator()(const Reduction& r) const {
      return {{"kind", "reduction"}, {"reduction", reduction_kind_name(r.kind)}, {"r", r.r}};
    }
    json operator()(const FringeCount& p) const {
      return {{"kind", "fringe"}, {"pattern", p.pattern.to_string()}};
    }
    json operator()(const OutdegreeCount& o) const { return {{"kind", "outdeg"}, {"R", o.R}}; }
  };
  return std::visit(Visitor{}, f);
}

json normality_json(const NormalityReport& r) {
  return {{"n", r.n},
          {"skewness", r.skewness},
          {"excess_kurtosis", r.excess_kurtosis},
          {"ks_distance", r.ks_distance},
          {"ks_pvalue_approx", r.ks_pvalue},
          {"skew_band", r.skew_band},
          {"kurt_band", r.kurt_band},
          {"degenerate", r.degenerate},
          {"normal", r.normal}};
}

}  // namespace

unsigned resolve_threads(std::uint32_t requested) {
  if (requested) return requested;
  const auto hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

FunctionalFamily parse_family(const std::string& json_text) {
  try {
    return family_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    invalid(std::string("family: ") + e.what());
  }
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  ExperimentConfig cfg;
  try {
    const auto j = json::parse(json_text);
    if (!j.is_object()) invalid("config must be a JSON object");
    check_keys(j,
               {"dist", "family", "sizes", "replicates", "seed", "cutoffs", "alpha", "threads",
                "rejection_budget", "pm", "out", "histogram"},
               "config");
    if (j.contains("dist")) cfg.dist = dist_from_json(j["dist"]);
    if (j.contains("family")) cfg.family = family_from_json(j["family"]);
    if (j.contains("sizes")) cfg.sizes = j["sizes"].get<std::vector<std::uint64_t>>();
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("cutoffs")) cfg.cutoffs = j["cutoffs"].get<std::vector<std::uint32_t>>();
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.rejection_budget = j.value("rejection_budget", cfg.rejection_budget);
    if (j.contains("pm")) {
      const auto& pm = j["pm"];
      check_keys(pm, {"delta", "inner", "outer", "n", "replicates"}, "pm");
      cfg.pm_delta = pm.value("delta", cfg.pm_delta);
      cfg.pm_inner = pm.value("inner", cfg.pm_inner);
      cfg.pm_outer = pm.value("outer", cfg.pm_outer);
      cfg.pm_n = pm.value("n", cfg.pm_n);
      cfg.pm_replicates = pm.value("replicates", cfg.pm_replicates);
    }
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.histogram = j.value("histogram", cfg.histogram);
  } catch (const json::exception& e) {
    invalid(std::string("config: ") + e.what());
  }
  if (cfg.replicates < 2) invalid("replicates must be >= 2");
  if (cfg.sizes.empty()) invalid("sizes must be nonempty");
  if (std::find(cfg.sizes.begin(), cfg.sizes.end(), 0u) != cfg.sizes.end()) invalid("sizes must be >= 1");
  if (cfg.rejection_budget == 0) invalid("rejection_budget must be >= 1");
  if (cfg.pm_inner == 0 || cfg.pm_outer == 0 || cfg.pm_replicates == 0) invalid("pm counts must be >= 1");
  return cfg;
}

std::string experiment_config_json(const ExperimentConfig& cfg) {
  json j{{"dist", dist_to_json(cfg.dist)},
         {"family", family_to_json(cfg.family)},
         {"sizes", cfg.sizes},
         {"replicates", cfg.replicates},
         {"seed", cfg.seed},
         {"cutoffs", cfg.cutoffs},
         {"alpha", cfg.alpha},
         {"rejection_budget", cfg.rejection_budget},
         {"pm",
          {{"delta", cfg.pm_delta},
           {"inner", cfg.pm_inner},
           {"outer", cfg.pm_outer},
           {"n", cfg.pm_n},
           {"replicates", cfg.pm_replicates}}},
         {"histogram", cfg.histogram}};
  // threads and out are deliberately left out: they do not change results
  return j.dump();
}

std::uint64_t feasible_size(const OffspringDistribution& dist, std::uint64_t n) {
  const auto g = std::max<std::uint64_t>(1, dist.support_gcd());
  for (std::uint64_t m = n; m < n + g + 1; ++m) {
    if (size_possible(dist, m)) return m;
  }
  // Numerical-semigroup gaps can be longer than the gcd for small n.
  for (std::uint64_t m = n + g + 1; m < 2 * n + 64 * g; ++m) {
    if (size_possible(dist, m)) return m;
  }
  throw Error(ErrorKind::ImpossibleSize, "no feasible size near " + std::to_string(n));
}

SizeSummary summarize(std::uint64_t n, std::vector<double> F, std::vector<double> root_toll) {
  SizeSummary s;
  s.requested_n = s.n = n;
  s.replicates = F.size();
  const auto m = sample_moments(F);
  s.mean_F = m.mean;
  s.mu_hat = m.mean / static_cast<double>(n);
  s.var_F = m.variance;
  s.gamma2_hat = m.variance / static_cast<double>(n);
  s.standardized = standardize(F);
  if (F.size() >= 100) s.normality = normality_report(F);
  s.F = std::move(F);
  s.root_toll = std::move(root_toll);
  return s;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  const auto dist = make_offspring(cfg.dist);
  const auto family = validated(cfg.family);
  const unsigned threads = resolve_threads(cfg.threads);

  ExperimentSummary out;
  out.family = family_name(family);
  out.dist = dist.name();
  out.seed = cfg.seed;
  if (2 * cfg.alpha + 1 <= OffspringDistribution::kMaxMoment) {
    out.moment_2a1 = dist.moment(static_cast<int>(2 * cfg.alpha + 1));
  }

  for (std::size_t k = 0; k < cfg.sizes.size(); ++k) {
    const auto n = feasible_size(dist, cfg.sizes[k]);
    const ConditionedSampler sampler(dist, n, cfg.rejection_budget);
    std::vector<double> F(cfg.replicates), toll(cfg.replicates);
    std::vector<std::uint64_t> seeds(cfg.replicates);
    std::vector<char> warn(cfg.replicates, 0);
    parallel_for(cfg.replicates, threads, [&](std::uint64_t i) {
      seeds[i] = derive_seed(cfg.seed, k, i);
      Rng rng(seeds[i]);
      const auto t = sampler(rng);
      const auto ev = evaluate(family, t);
      F[i] = ev.F_value;
      toll[i] = ev.root_toll;
      warn[i] = ev.precision_warning;
    });
    auto s = summarize(n, std::move(F), std::move(toll));
    s.requested_n = cfg.sizes[k];
    s.seeds = std::move(seeds);
    s.precision_warning = std::any_of(warn.begin(), warn.end(), [](char w) { return w != 0; });
    out.sizes.push_back(std::move(s));
  }

  if (out.sizes.size() >= 3) {
    try {
      out.drift = mean_drift_check(out.sizes);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientSizes) throw;
    }
  }
  if (!cfg.cutoffs.empty()) out.pm = pm_curve(cfg);
  return out;
}

DriftReport mean_drift_check(const std::vector<SizeSummary>& sizes) {
  if (sizes.size() < 3) throw Error(ErrorKind::InsufficientSizes, "need at least 3 sizes");
  std::uint64_t lo = sizes[0].n, hi = sizes[0].n;
  for (const auto& s : sizes) {
    lo = std::min(lo, s.n);
    hi = std::max(hi, s.n);
  }
  if (hi < 10 * lo) throw Error(ErrorKind::InsufficientSizes, "sizes must span a decade");

  const std::size_t K = sizes.size();
  DriftReport rep;
  std::vector<double> se(K), w(K);
  double wmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    se[k] = std::sqrt(sizes[k].var_F / static_cast<double>(sizes[k].replicates));
    if (se[k] > 0.0) wmin = std::min(wmin, se[k]);
  }
  // zero-variance sizes get the weight of the most precise noisy one
  for (std::size_t k = 0; k < K; ++k) {
    const double s = se[k] > 0.0 ? se[k] : (std::isfinite(wmin) ? wmin : 1.0);
    w[k] = 1.0 / (s * s);
  }
  // weighted least squares for mean_F = mu n + b
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const double x = static_cast<double>(sizes[k].n), y = sizes[k].mean_F;
    sw += w[k];
    sx += w[k] * x;
    sy += w[k] * y;
    sxx += w[k] * x * x;
    sxy += w[k] * x * y;
  }
  const double den = sw * sxx - sx * sx;
  rep.mu_hat = (sw * sxy - sx * sy) / den;
  rep.intercept = (sy - rep.mu_hat * sx) / sw;

  rep.linear_fit_ok = true;
  bool all_small = true;
  std::vector<double> logn, absr;
  for (std::size_t k = 0; k < K; ++k) {
    const double n = static_cast<double>(sizes[k].n);
    const double sq = std::sqrt(n);
    rep.n.push_back(sizes[k].n);
    rep.r_n.push_back((sizes[k].mean_F - rep.mu_hat * n) / sq);
    rep.r_se.push_back(se[k] / sq);
    rep.fit_residual.push_back(sizes[k].mean_F - (rep.mu_hat * n + rep.intercept));
    rep.fit_se.push_back(se[k]);
    // a fit residual of exactly 0 passes even when se = 0
    if (std::abs(rep.fit_residual.back()) > 3.0 * se[k] + 1e-9 * std::max(1.0, std::abs(sizes[k].mean_F))) {
      rep.linear_fit_ok = false;
    }
    if (std::abs(rep.r_n.back()) > 3.0 * rep.r_se.back()) all_small = false;
    logn.push_back(std::log(n));
    absr.push_back(std::abs(rep.r_n.back()));
  }
  const auto slope = log_slope(logn, absr);
  rep.loglog_slope = slope.value_or(0.0);
  rep.drift_vanishes = all_small || (slope && *slope < 0.0);
  rep.pass = rep.linear_fit_ok && rep.drift_vanishes;
  return rep;
}

PmCurve pm_curve(const ExperimentConfig& cfg) {
  const auto family = validated(cfg.family);
  if (!std::holds_alternative<IndSet>(family) && !std::holds_alternative<Matching>(family) &&
      !std::holds_alternative<DomSet>(family) && !std::holds_alternative<Reduction>(family)) {
    invalid("p_M curves are defined for indset, matching, domset and reduction");
  }
  const auto dist = make_offspring(cfg.dist);
  const unsigned threads = resolve_threads(cfg.threads);
  const auto n = feasible_size(dist, cfg.pm_n);
  const ConditionedSampler sampler(dist, n, cfg.rejection_budget);

  PmCurve curve;
  for (const auto M : cfg.cutoffs) {
    PmPoint pt;
    pt.M = M;
    const std::uint32_t N = M + cfg.pm_delta;
    std::vector<double> gap(cfg.pm_outer), bias(cfg.pm_outer);
    parallel_for(cfg.pm_outer, threads, [&](std::uint64_t j) {
      Rng rng(derive_seed(cfg.seed ^ kSizeBiasedDomain, M, j));
      const Tree tm = sample_size_biased(dist, M, rng);
      const double f_m = toll_value(family, tm);
      std::vector<double> inner(cfg.pm_inner);
      for (auto& f : inner) f = toll_value(family, extend_size_biased(dist, tm, M, N, rng));
      const auto m = sample_moments(inner);
      gap[j] = std::abs(f_m - m.mean);
      bias[j] = std::sqrt(m.variance / inner.size());
    });
    pt.size_biased_gap = mean_of(gap);
    pt.size_biased_bias = mean_of(bias);

    std::vector<double> err(cfg.pm_replicates);
    parallel_for(cfg.pm_replicates, threads, [&](std::uint64_t i) {
      Rng rng(derive_seed(cfg.seed ^ kCutoffDomain, M, i));
      err[i] = cutoff_error(sampler(rng), M, family);
    });
    pt.conditioned_error = mean_of(err);
    curve.points.push_back(pt);
  }

  std::vector<double> Ms, g1, g2;
  for (const auto& p : curve.points) {
    Ms.push_back(p.M);
    g1.push_back(p.size_biased_gap);
    g2.push_back(p.conditioned_error);
  }
  curve.size_biased_zero = std::all_of(g1.begin(), g1.end(), [](double x) { return x == 0.0; });
  curve.conditioned_zero = std::all_of(g2.begin(), g2.end(), [](double x) { return x == 0.0; });
  if (auto s = log_slope(Ms, g1)) curve.size_biased_base = std::exp(*s);
  if (auto s = log_slope(Ms, g2)) curve.conditioned_base = std::exp(*s);
  return curve;
}

std::string summary_json(const ExperimentSummary& summary) {
  json j{{"family", summary.family},
         {"dist", summary.dist},
         {"seed", summary.seed},
         {"moment_2alpha_plus_1", summary.moment_2a1}};
  json sizes = json::array();
  for (const auto& s : summary.sizes) {
    json js{{"requested_n", s.requested_n},
            {"n", s.n},
            {"replicates", s.replicates},
            {"mean_F", s.mean_F},
            {"mu_hat", s.mu_hat},
            {"var_F", s.var_F},
            {"gamma2_hat", s.gamma2_hat},
            {"precision_warning", s.precision_warning}};
    if (s.normality) js["normality"] = normality_json(*s.normality);
    sizes.push_back(js);
  }
  j["sizes"] = sizes;
  if (summary.drift) {
    const auto& d = *summary.drift;
    j["drift"] = {{"mu_hat", d.mu_hat},         {"intercept", d.intercept},
                  {"n", d.n},                   {"r_n", d.r_n},
                  {"r_se", d.r_se},             {"fit_residual", d.fit_residual},
                  {"fit_se", d.fit_se},         {"loglog_slope", d.loglog_slope},
                  {"linear_fit_ok", d.linear_fit_ok}, {"drift_vanishes", d.drift_vanishes},
                  {"pass", d.pass}};
  }
  if (summary.pm) {
    json pts = json::array();
    for (const auto& p : summary.pm->points) {
      pts.push_back({{"M", p.M},
                     {"size_biased_gap", p.size_biased_gap},
                     {"size_biased_bias", p.size_biased_bias},
                     {"conditioned_error", p.conditioned_error}});
    }
    j["pm_curve"] = {{"points", pts},
                     {"size_biased_base", summary.pm->size_biased_base},
                     {"conditioned_base", summary.pm->conditioned_base},
                     {"size_biased_zero", summary.pm->size_biased_zero},
                     {"conditioned_zero", summary.pm->conditioned_zero}};
  }
  return j.dump(2);
}

std::string histogram_svg(const SizeSummary& s) {
  constexpr int kBins = 40;
  constexpr double W = 640, H = 400, pad = 40;
  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<text x=\"" << pad << "\" y=\"20\" font-size=\"14\">n = " << s.n
     << ", standardized F, N(0,1) overlay</text>\n";
  if (s.standardized.empty()) {
    os << "<text x=\"" << pad << "\" y=\"60\">degenerate sample (sd = 0)</text>\n</svg>\n";
    return os.str();
  }
  const double lo = -4.0, hi = 4.0, width = (hi - lo) / kBins;
  std::vector<double> counts(kBins, 0.0);
  for (double z : s.standardized) {
    const int b = static_cast<int>(std::floor((z - lo) / width));
    if (b >= 0 && b < kBins) counts[b] += 1.0;
  }
  const double total = static_cast<double>(s.standardized.size());
  double ymax = 1.0 / std::sqrt(2.0 * M_PI);
  for (auto& c : counts) {
    c /= total * width;
    ymax = std::max(ymax, c);
  }
  auto px = [&](double x) { return pad + (x - lo) / (hi - lo) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - y / (ymax * 1.05) * (H - 2 * pad); };
  for (int b = 0; b < kBins; ++b) {
    const double x0 = lo + b * width;
    os << "<rect x=\"" << px(x0) << "\" y=\"" << py(counts[b]) << "\" width=\""
       << px(x0 + width) - px(x0) << "\" height=\"" << py(0) - py(counts[b])
       << "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"#de2d26\" stroke-width=\"2\" points=\"";
  for (int i = 0; i <= 200; ++i) {
    const double x = lo + (hi - lo) * i / 200.0;
    os << px(x) << "," << py(std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI)) << " ";
  }
  os << "\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << py(0) << "\" x2=\"" << W - pad << "\" y2=\"" << py(0)
     << "\" stroke=\"black\"/>\n</svg>\n";
  return os.str();
}

void write_outputs(const ExperimentSummary& summary, const ExperimentConfig& cfg,
                   const std::string& header) {
  if (cfg.out_dir.empty()) return;
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream csv(fs::path(cfg.out_dir) / "replicates.csv");
    csv << header << "n,replicate,seed,F,toll_root\n" << std::setprecision(17);
    for (const auto& s : summary.sizes) {
      for (std::size_t i = 0; i < s.F.size(); ++i) {
        csv << s.n << ',' << i << ',' << (i < s.seeds.size() ? s.seeds[i] : 0) << ',' << s.F[i]
            << ',' << (i < s.root_toll.size() ? s.root_toll[i] : 0.0) << '\n';
      }
    }
  }
  std::ofstream(fs::path(cfg.out_dir) / "summary.json") << summary_json(summary) << '\n';
  if (cfg.histogram) {
    for (const auto& s : summary.sizes) {
      std::ofstream(fs::path(cfg.out_dir) / ("histogram_" + std::to_string(s.n) + ".svg"))
          << histogram_svg(s);
    }
  }
}

}  // namespace gwt
