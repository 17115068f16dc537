// gwtool: command-line front end for the gwtree library.
//
// Every command writes a '#'-prefixed metadata header (tool version, seed,
// config hash and, unless --no-timestamp is given, a timestamp) followed by
// its body. Exit codes: 0 success, 1 usage or input error, 2 a scientific
// check failed (verify-bounds violation, selftest FAIL).

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gwtree/bounds.hpp"
#include "gwtree/errors.hpp"
#include "gwtree/experiments.hpp"
#include "gwtree/oracle.hpp"
#include "gwtree/rng.hpp"
#include "gwtree/sampler.hpp"
#include "gwtree/selftest.hpp"

namespace {

using namespace gwt;

struct Globals {
  std::uint64_t seed = 42;
  std::uint32_t threads = 0;
  bool no_timestamp = false;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string header(const Globals& g, const std::string& command, const std::string& config) {
  std::ostringstream os;
  os << "# gwtool " << kVersion << '\n';
  os << "# command: " << command << '\n';
  os << "# seed: " << g.seed << '\n';
  os << "# config_hash: " << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config)
     << std::dec << '\n';
  if (!g.no_timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    os << "# timestamp: " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << '\n';
  }
  return os.str();
}

std::vector<Tree> read_trees(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw Error(ErrorKind::ConfigInvalid, "cannot open " + path);
    in = &file;
  }
  std::vector<Tree> trees;
  std::string line;
  for (std::size_t lineno = 1; std::getline(*in, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      trees.push_back(parse_tree(line));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trees;
}

// Runs fn(i) for every index on worker threads; rows come back in index order.
template <typename Fn>
std::vector<std::string> parallel_rows(std::size_t count, unsigned threads, Fn&& fn) {
  std::vector<std::string> rows(count);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex mu;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) rows[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::vector<std::uint32_t> parse_uint_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  return out;
}

DistributionSpec dist_spec(const std::string& name, const std::string& pmf) {
  DistributionSpec spec{parse_offspring_kind(name), {}};
  if (spec.kind == OffspringKind::Custom) {
    if (pmf.empty()) throw Error(ErrorKind::ConfigInvalid, "--dist custom needs --pmf");
    std::stringstream ss(pmf);
    std::string item;
    while (std::getline(ss, item, ',')) spec.pmf.push_back(std::stod(item));
  }
  return spec;
}

struct FamilyArgs {
  std::string family;
  std::string pattern = "0";
  std::string R = "0";
  std::string kind = "leaf";
  std::uint32_t r = 1;

  FunctionalFamily build() const {
    if (family == "indset") return IndSet{};
    if (family == "matching") return Matching{};
    if (family == "domset") return DomSet{};
    if (family == "fringe") return FringeCount{parse_tree(pattern)};
    if (family == "outdeg") return validated(OutdegreeCount{parse_uint_list(R)});
    if (family == "reduction") return validated(Reduction{parse_reduction_kind(kind), r});
    throw Error(ErrorKind::ConfigInvalid, "unknown family '" + family + "'");
  }
};

void add_family_options(CLI::App* sub, FamilyArgs& fa, const std::vector<std::string>& allowed) {
  sub->add_option("--family", fa.family, "functional family")
      ->required()
      ->check(CLI::IsMember(allowed));
  if (std::find(allowed.begin(), allowed.end(), "fringe") != allowed.end()) {
    sub->add_option("--pattern", fa.pattern, "fringe pattern as preorder outdegrees");
    sub->add_option("--R", fa.R, "comma-separated outdegree set");
  }
  if (std::find(allowed.begin(), allowed.end(), "reduction") != allowed.end()) {
    sub->add_option("--kind", fa.kind, "reduction kind")
        ->check(CLI::IsMember({"leaf", "oldleaf", "path", "oldpath"}));
    sub->add_option("--r", fa.r, "reduction rounds")->check(CLI::PositiveNumber);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galton-Watson tree functionals: sampling, evaluation, bounds, oracles, experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--seed", g.seed, "master seed (GW_SEED overrides)");
  app.add_option("--threads", g.threads, "worker threads (default: all cores)");
  app.add_flag("--no-timestamp", g.no_timestamp, "omit the timestamp header line");

  // sample
  auto* sample = app.add_subcommand("sample", "draw trees, one per line");
  std::string dist = "geometric", pmf, mode = "conditioned";
  std::uint64_t n = 100, count = 1;
  std::uint32_t depth = 4;
  sample->add_option("--dist", dist, "geometric | poisson | binary | custom");
  sample->add_option("--pmf", pmf, "comma-separated pmf for --dist custom");
  sample->add_option("--n", n, "tree size (conditioned mode)")->check(CLI::PositiveNumber);
  sample->add_option("--count", count, "number of trees");
  sample->add_option("--mode", mode, "conditioned | gw | size-biased")
      ->check(CLI::IsMember({"conditioned", "gw", "size-biased"}));
  sample->add_option("--M", depth, "truncation depth (size-biased mode)");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate an additive functional per tree");
  FamilyArgs eval_fa;
  std::string input;
  add_family_options(eval, eval_fa, {"indset", "matching", "domset", "fringe", "outdeg", "reduction"});
  eval->add_option("--input", input, "tree file (default stdin)");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "run a reduction process");
  std::string red_kind = "leaf";
  std::uint32_t red_r = 1;
  reduce->add_option("--kind", red_kind, "leaf | oldleaf | path | oldpath")
      ->required()
      ->check(CLI::IsMember({"leaf", "oldleaf", "path", "oldpath"}));
  reduce->add_option("--r", red_r, "rounds")->check(CLI::PositiveNumber);
  reduce->add_option("--input", input, "tree file (default stdin)");

  // verify-bounds
  auto* verify = app.add_subcommand("verify-bounds", "cut-off error certificates per tree");
  FamilyArgs ver_fa;
  std::uint32_t M = 8;
  double dom_constant = 1.0;
  add_family_options(verify, ver_fa, {"indset", "matching", "domset", "reduction"});
  verify->add_option("--M", M, "cut-off depth");
  verify->add_option("--dom-constant", dom_constant, "implied constant of the DomSet bound");
  verify->add_option("--input", input, "tree file (default stdin)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact counts as decimal integers");
  std::string oracle_family;
  oracle->add_option("--family", oracle_family, "indset | matching | domset")
      ->required()
      ->check(CLI::IsMember({"indset", "matching", "domset"}));
  oracle->add_option("--input", input, "tree file (default stdin)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiment from a JSON config");
  std::string config_path, out_dir;
  experiment->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  experiment->add_option("--out", out_dir, "output directory (overrides the config)");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "exhaustive oracle and bound suites");
  std::uint32_t max_n = 9;
  selftest->add_option("--max-n", max_n, "largest tree size")->check(CLI::Range(1, 12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (const char* env = std::getenv("GW_SEED")) {
    try {
      g.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "GW_SEED is not an integer: " << env << '\n';
      return 1;
    }
  }
  const unsigned threads = resolve_threads(g.threads);
  std::ostream& out = std::cout;

  try {
    if (*sample) {
      const auto d = make_offspring(dist_spec(dist, pmf));
      for (const auto& w : d.warnings()) std::cerr << "warning: " << w << '\n';
      std::ostringstream cfg;
      cfg << "sample " << dist << ' ' << pmf << ' ' << mode << ' ' << n << ' ' << count << ' ' << depth;
      std::optional<ConditionedSampler> cond;
      if (mode == "conditioned") cond.emplace(d, n);
      out << header(g, "sample", cfg.str());
      const auto rows = parallel_rows(count, threads, [&](std::size_t i) {
        Rng rng(derive_seed(g.seed, 0, i));
        if (mode == "conditioned") return (*cond)(rng).to_string();
        if (mode == "size-biased") return sample_size_biased(d, depth, rng).to_string();
        const auto t = sample_gw(d, rng, 1'000'000);
        return t ? t->to_string() : std::string("# overflow");
      });
      for (const auto& r : rows) out << r << '\n';
      return 0;
    }

    if (*eval) {
      const auto fam = eval_fa.build();
      const auto trees = read_trees(input);
      out << header(g, "eval", "eval " + family_name(fam));
      std::string cols = "n,F_value,root_toll";
      if (eval_fa.family == "indset" || eval_fa.family == "matching") cols += ",rho_root";
      if (eval_fa.family == "domset") cols += ",rho0_root,rhostar_root";
      out << cols << '\n';
      const auto rows = parallel_rows(trees.size(), threads, [&](std::size_t i) {
        const auto& t = trees[i];
        std::string row;
        if (eval_fa.family == "indset") {
          const auto [ev, st] = eval_independent(t, false);
          row = fmt(ev.F_value) + ',' + fmt(ev.root_toll) + ',' + fmt(st.rho[0]);
        } else if (eval_fa.family == "matching") {
          const auto [ev, st] = eval_matching(t, false);
          row = fmt(ev.F_value) + ',' + fmt(ev.root_toll) + ',' + fmt(st.rho[0]);
        } else if (eval_fa.family == "domset") {
          const auto [ev, st] = eval_dominating(t, false);
          row = fmt(ev.F_value) + ',' + fmt(ev.root_toll) + ',' + fmt(st.rho0[0]) + ',' +
                fmt(st.rho_star[0]);
        } else {
          const auto ev = evaluate(fam, t);
          row = fmt(ev.F_value) + ',' + fmt(ev.root_toll);
        }
        return std::to_string(t.size()) + ',' + row;
      });
      for (const auto& r : rows) out << r << '\n';
      return 0;
    }

    if (*reduce) {
      const auto kind = parse_reduction_kind(red_kind);
      const auto trees = read_trees(input);
      out << header(g, "reduce", "reduce " + red_kind + ' ' + std::to_string(red_r));
      out << "n,X_r,F_r\n";
      const auto rows = parallel_rows(trees.size(), threads, [&](std::size_t i) {
        const auto res = reduce_r(trees[i], kind, red_r);
        return std::to_string(trees[i].size()) + ',' + std::to_string(res.X_r) + ',' +
               std::to_string(res.F_r);
      });
      for (const auto& r : rows) out << r << '\n';
      return 0;
    }

    if (*verify) {
      const auto fam = ver_fa.build();
      const auto trees = read_trees(input);
      const bool dom = std::holds_alternative<DomSet>(fam);
      out << header(g, "verify-bounds",
                    "verify " + family_name(fam) + ' ' + std::to_string(M) + ' ' + fmt(dom_constant));
      out << "n,M," << (dom ? "eta" : "tau") << ",bound_rhs,cutoff_error,violated\n";
      std::vector<char> bad(trees.size(), 0);
      const auto rows = parallel_rows(trees.size(), threads, [&](std::size_t i) {
        const auto rep = tau_report(trees[i], M, fam, BoundsConfig{dom_constant});
        const bool violated = rep.violated || !rep.certified;
        bad[i] = violated;
        const std::string tau = dom && rep.tau_star_infinite ? "inf" : fmt(dom ? rep.eta : rep.tau);
        return std::to_string(trees[i].size()) + ',' + std::to_string(M) + ',' + tau + ',' +
               fmt(rep.bound_rhs) + ',' + fmt(rep.cutoff_error) + ',' + (violated ? "true" : "false");
      });
      for (const auto& r : rows) out << r << '\n';
      return std::any_of(bad.begin(), bad.end(), [](char b) { return b != 0; }) ? 2 : 0;
    }

    if (*oracle) {
      const auto trees = read_trees(input);
      out << header(g, "oracle", "oracle " + oracle_family);
      if (oracle_family == "indset") out << "n,I,I0\n";
      if (oracle_family == "matching") out << "n,m,m0\n";
      if (oracle_family == "domset") out << "n,d,d0,dstar\n";
      const auto rows = parallel_rows(trees.size(), threads, [&](std::size_t i) {
        const auto& t = trees[i];
        const auto c = oracle_family == "indset"     ? brute_independent(t)
                       : oracle_family == "matching" ? brute_matching(t)
                                                     : brute_dominating(t);
        std::string row = std::to_string(t.size()) + ',' + c.total.str() + ',' + c.zero.str();
        if (oracle_family == "domset") row += ',' + c.star.str();
        return row;
      });
      for (const auto& r : rows) out << r << '\n';
      return 0;
    }

    if (*experiment) {
      std::ifstream f(config_path);
      std::stringstream buf;
      buf << f.rdbuf();
      auto cfg = parse_experiment_config(buf.str());
      // an explicit --seed or GW_SEED wins over the config's seed
      if (app.count("--seed") || std::getenv("GW_SEED")) cfg.seed = g.seed;
      else g.seed = cfg.seed;
      cfg.threads = g.threads ? g.threads : cfg.threads;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      const auto canonical = experiment_config_json(cfg);
      const auto head = header(g, "experiment", canonical);
      const auto summary = run_experiment(cfg);
      write_outputs(summary, cfg, head);
      out << head;
      out << "n,replicates,mean_F,mu_hat,var_F,gamma2_hat,skewness,excess_kurtosis,ks_distance\n";
      for (const auto& s : summary.sizes) {
        out << s.n << ',' << s.replicates << ',' << fmt(s.mean_F) << ',' << fmt(s.mu_hat) << ','
            << fmt(s.var_F) << ',' << fmt(s.gamma2_hat);
        if (s.normality && !s.normality->degenerate) {
          out << ',' << fmt(s.normality->skewness) << ',' << fmt(s.normality->excess_kurtosis) << ','
              << fmt(s.normality->ks_distance);
        } else {
          out << ",,,";
        }
        out << '\n';
      }
      if (summary.drift) {
        out << "# drift: mu_hat=" << fmt(summary.drift->mu_hat)
            << " slope=" << fmt(summary.drift->loglog_slope)
            << " verdict=" << (summary.drift->pass ? "PASS" : "FAIL") << '\n';
      }
      if (summary.pm) {
        out << "# pm_curve: M,size_biased_gap,conditioned_error\n";
        for (const auto& p : summary.pm->points) {
          out << "# " << p.M << ',' << fmt(p.size_biased_gap) << ',' << fmt(p.conditioned_error)
              << '\n';
        }
      }
      return 0;
    }

    if (*selftest) {
      out << header(g, "selftest", "selftest " + std::to_string(max_n));
      bool ok = true;
      for (const auto& r : run_selftest(max_n)) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        ok = ok && r.pass;
      }
      return ok ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
