// Python bindings: a thin data-oriented surface over the library. Maps are
// referred to by family name, drivers by a periodic word or the distinguished
// aperiodic pi-digit sequence ("pi").

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oselab/cocycle.hpp"
#include "oselab/drivers.hpp"
#include "oselab/interval_maps.hpp"
#include "oselab/met.hpp"
#include "oselab/oseledets.hpp"

namespace py = pybind11;
using namespace oselab;

namespace {

Driver make_driver(const py::object& spec) {
  if (py::isinstance<py::str>(spec)) {
    if (spec.cast<std::string>() == "pi") return coherent_sequence_driver();
    throw ConfigError("driver must be a periodic word (list of symbols) or 'pi'");
  }
  return Driver::periodic(spec.cast<std::vector<int>>());
}

MatrixCocycle make_named_cocycle(const std::vector<std::string>& names, const py::object& driver) {
  std::vector<RationalMatrix> gens;
  for (const auto& n : names) gens.push_back(pf_matrix(build_named_map(n)));
  return make_cocycle(std::move(gens), make_driver(driver));
}

py::object exponent_or_none(double e) {
  if (is_bottom(e)) return py::none();
  return py::float_(e);
}

}  // namespace

PYBIND11_MODULE(_oselab, m) {
  m.doc() = "Perron-Frobenius cocycle laboratory";

  m.def(
      "transfer_matrix",
      [](const std::string& name) { return pf_matrix(build_named_map(name)).as_double(); },
      py::arg("name"), "Column-stochastic transfer matrix of a named map");

  m.def(
      "spectrum",
      [](const std::string& name) {
        const SpectrumReport r = matrix_spectrum(pf_matrix(build_named_map(name)));
        py::dict out;
        out["eigenvalues"] = r.eigenvalues;
        out["moduli"] = r.moduli;
        out["multiplicities"] = r.multiplicities;
        return out;
      },
      py::arg("name"), "Spectrum of the transfer matrix of a named map");

  m.def(
      "lyapunov_spectrum",
      [](const std::vector<std::string>& maps, const py::object& driver, int depth) {
        const LyapunovEstimate est = lyapunov_spectrum(make_named_cocycle(maps, driver), depth, 0);
        py::list exps;
        for (double e : est.exponents) exps.append(exponent_or_none(e));
        py::dict out;
        out["exponents"] = exps;
        out["multiplicities"] = est.multiplicities;
        return out;
      },
      py::arg("maps"), py::arg("driver"), py::arg("depth") = 40,
      "Gram-root exponent estimate; killed directions report None");

  m.def(
      "pushforward_subspaces",
      [](const std::vector<std::string>& maps, const py::object& driver, int depth, int push,
         std::int64_t base) {
        const OseledetsApproximation approx =
            pushforward_subspaces(make_named_cocycle(maps, driver), depth, push, base);
        py::list groups;
        for (const auto& g : approx.groups) {
          py::dict entry;
          entry["exponent"] = exponent_or_none(g.exponent);
          entry["multiplicity"] = g.multiplicity;
          entry["basis"] = g.basis.as_double();
          entry["conditioning"] = g.conditioning;
          groups.append(entry);
        }
        return groups;
      },
      py::arg("maps"), py::arg("driver"), py::arg("depth") = 40, py::arg("push") = 20,
      py::arg("base") = 0, "Push-forward Oseledets subspace approximation at one base");

  m.def(
      "delta_diagnostic",
      [](const std::vector<std::string>& maps, const py::object& driver, int cells, int push) {
        return delta_diagnostic(make_named_cocycle(maps, driver), UniformPartition{cells, true}, push, 0);
      },
      py::arg("maps"), py::arg("driver"), py::arg("cells") = 9, py::arg("push") = 10,
      "One-step L1 defect of the pushed second-group vector");

  m.def(
      "verify_splitting",
      [](std::uint64_t seed, int dimension, int depth, int push) {
        RandomCocycleSpec spec;
        spec.seed = seed;
        spec.dimension = dimension;
        const SplittingReport rep = verify_splitting(generate_random_cocycle(spec), depth, push, 3, 0);
        auto check = [](const PropertyCheck& c) {
          py::dict out;
          out["pass"] = c.pass;
          out["margin"] = c.margin;
          out["worst_base"] = c.worst_base;
          return out;
        };
        py::dict out;
        out["multiplicities"] = rep.multiplicities;
        out["multiplicity_stable"] = check(rep.multiplicity_stable);
        out["dimension_sum"] = check(rep.dimension_sum);
        out["direct_sum"] = check(rep.direct_sum);
        out["equivariance"] = check(rep.equivariance);
        out["growth_rates"] = check(rep.growth_rates);
        out["all_pass"] = rep.all_pass();
        return out;
      },
      py::arg("seed") = 7, py::arg("dim") = 4, py::arg("depth") = 160, py::arg("push") = 80,
      "Splitting verification harness on a seeded random cocycle");

  py::register_exception<Error>(m, "OselabError");
}
