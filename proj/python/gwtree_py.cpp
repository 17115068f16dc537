// Python bindings. Families and laws cross the boundary as JSON text (the
// same forms the experiment config accepts); gwtree/__init__.py converts dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gwtree/bounds.hpp"
#include "gwtree/errors.hpp"
#include "gwtree/experiments.hpp"
#include "gwtree/functionals.hpp"
#include "gwtree/oracle.hpp"
#include "gwtree/reductions.hpp"
#include "gwtree/sampler.hpp"

namespace py = pybind11;
using namespace gwt;

namespace {

OffspringDistribution law(const std::string& kind, const std::vector<double>& pmf) {
  if (!pmf.empty()) return make_offspring(DistributionSpec::custom(pmf));
  return make_offspring({parse_offspring_kind(kind), {}});
}

py::dict counts_dict(const ExactCounts& c) {
  // Python ints are arbitrary precision; go through the decimal string
  py::dict d;
  auto to_int = [](const BigInt& b) { return py::int_(py::str(b.str())); };
  d["total"] = to_int(c.total);
  d["zero"] = to_int(c.zero);
  if (c.family == CountFamily::DomSet) d["star"] = to_int(c.star);
  return d;
}

}  // namespace

PYBIND11_MODULE(_gwtree, m) {
  m.doc() = "Conditioned Galton-Watson trees and additive functionals";

  static py::exception<Error> error(m, "GwtError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(e.what()),
                                                  std::string(to_string(e.kind())))
                                       .ptr());
    }
  });

  py::class_<Tree>(m, "Tree")
      .def(py::init([](const std::vector<std::uint32_t>& seq) { return build_tree(seq); }),
           py::arg("outdegrees"))
      .def_static("parse", [](const std::string& s) { return parse_tree(s); })
      .def("__len__", &Tree::size)
      .def("__str__", &Tree::to_string)
      .def("__repr__", [](const Tree& t) { return "Tree('" + t.to_string() + "')"; })
      .def("__eq__", [](const Tree& a, const Tree& b) { return a == b; })
      .def_property_readonly("outdegrees", [](const Tree& t) {
        return std::vector<std::uint32_t>(t.outdegrees().begin(), t.outdegrees().end());
      })
      .def("height", &Tree::height)
      .def("depths", &Tree::depths)
      .def("children", &Tree::children, py::arg("v"))
      .def("subtree_size", &Tree::subtree_size, py::arg("v"))
      .def("truncate", [](const Tree& t, std::uint32_t M) { return truncate(t, M); }, py::arg("M"))
      .def("fringe", [](const Tree& t, NodeId v) { return fringe_at(t, v); }, py::arg("v"))
      .def("level_profile", [](const Tree& t) { return level_profile(t).w; });

  m.def("sample_conditioned",
        [](std::uint64_t n, std::uint64_t count, std::uint64_t seed, const std::string& dist,
           const std::vector<double>& pmf) {
          const ConditionedSampler s(law(dist, pmf), n);
          std::vector<Tree> out;
          for (std::uint64_t i = 0; i < count; ++i) {
            Rng rng(derive_seed(seed, n, i));
            out.push_back(s(rng));
          }
          return out;
        },
        py::arg("n"), py::arg("count") = 1, py::arg("seed") = 42, py::arg("dist") = "geometric",
        py::arg("pmf") = std::vector<double>{});

  m.def("sample_gw",
        [](std::uint64_t seed, std::uint64_t max_nodes, const std::string& dist,
           const std::vector<double>& pmf) {
          return sample_gw(law(dist, pmf), SamplerConfig{seed, max_nodes, 1'000'000});
        },
        py::arg("seed") = 42, py::arg("max_nodes") = 1'000'000, py::arg("dist") = "geometric",
        py::arg("pmf") = std::vector<double>{});

  m.def("sample_size_biased",
        [](std::uint32_t M, std::uint64_t seed, const std::string& dist,
           const std::vector<double>& pmf) {
          Rng rng(seed);
          return sample_size_biased(law(dist, pmf), M, rng);
        },
        py::arg("M"), py::arg("seed") = 42, py::arg("dist") = "geometric",
        py::arg("pmf") = std::vector<double>{});

  m.def("size_possible",
        [](std::uint64_t n, const std::string& dist, const std::vector<double>& pmf) {
          return size_possible(law(dist, pmf), n);
        },
        py::arg("n"), py::arg("dist") = "geometric", py::arg("pmf") = std::vector<double>{});

  m.def("_evaluate",
        [](const std::string& family, const Tree& t, bool tolls) {
          const auto ev = evaluate(parse_family(family), t, tolls);
          py::dict d;
          d["F"] = ev.F_value;
          d["root_toll"] = ev.root_toll;
          if (tolls) d["tolls"] = ev.toll;
          d["precision_warning"] = ev.precision_warning;
          return d;
        },
        py::arg("family"), py::arg("tree"), py::arg("tolls") = false);

  m.def("reduce",
        [](const Tree& t, const std::string& kind, std::uint32_t r) {
          const auto res = reduce_r(t, parse_reduction_kind(kind), r);
          py::dict d;
          d["X"] = res.X_r;
          d["F"] = res.F_r;
          d["deletion_round"] = res.deletion_round;
          return d;
        },
        py::arg("tree"), py::arg("kind"), py::arg("r") = 1);

  m.def("_tau_report",
        [](const std::string& family, const Tree& t, std::uint32_t M, double dom_constant) {
          const auto rep = tau_report(t, M, parse_family(family), BoundsConfig{dom_constant});
          py::dict d;
          d["M"] = rep.M;
          d["tau"] = rep.tau;
          d["bound_rhs"] = rep.bound_rhs;
          d["w_M"] = rep.w_M;
          d["cutoff_error"] = rep.cutoff_error;
          d["certified"] = rep.certified;
          d["violated"] = rep.violated;
          if (std::holds_alternative<DomSet>(parse_family(family))) {
            d["tau0"] = rep.tau0;
            d["tau_star"] = rep.tau_star_infinite ? INFINITY : rep.tau_star;
            d["eta"] = rep.eta;
          }
          return d;
        },
        py::arg("family"), py::arg("tree"), py::arg("M"), py::arg("dom_constant") = 1.0);

  m.def("exact_counts",
        [](const std::string& family, const Tree& t) {
          if (family == "indset") return counts_dict(dp_independent(t));
          if (family == "matching") return counts_dict(dp_matching(t));
          if (family == "domset") return counts_dict(dp_dominating(t));
          throw Error(ErrorKind::ConfigInvalid, "exact counts exist for indset, matching, domset");
        },
        py::arg("family"), py::arg("tree"));

  m.def("enumerate_trees", [](std::uint32_t n) { return enumerate_trees(n).trees; }, py::arg("n"));

  m.def("_exact_expectation",
        [](const std::string& family, std::uint32_t n, const std::string& dist,
           const std::vector<double>& pmf) {
          const auto e = exact_expectation(parse_family(family), law(dist, pmf), n);
          return std::make_pair(e.mu_n, e.EF_n);
        },
        py::arg("family"), py::arg("n"), py::arg("dist") = "geometric",
        py::arg("pmf") = std::vector<double>{});

  m.def("_run_experiment",
        [](const std::string& config_json) {
          const auto cfg = parse_experiment_config(config_json);
          ExperimentSummary s;
          {
            py::gil_scoped_release release;
            s = run_experiment(cfg);
            write_outputs(s, cfg, "");
          }
          py::dict d;
          d["summary_json"] = summary_json(s);
          py::list F;
          for (const auto& sz : s.sizes) F.append(py::make_tuple(sz.n, sz.F));
          d["F"] = F;
          return d;
        },
        py::arg("config_json"));
}
