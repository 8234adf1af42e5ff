#include "elastinet/errors.hpp"
#include "elastinet/flow.hpp"
#include "elastinet/linear.hpp"
#include "elastinet/scenario.hpp"
#include "elastinet/snapshot.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace elastinet;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const CurveGrid& g) {
  Array a({static_cast<py::ssize_t>(g.size()), py::ssize_t{2}});
  auto r = a.mutable_unchecked<2>();
  for (std::size_t j = 0; j < g.size(); ++j) {
    r(j, 0) = g[j].x;
    r(j, 1) = g[j].y;
  }
  return a;
}

std::vector<Vec2> from_array(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("expected an array of shape (N+1, 2)");
  auto r = a.unchecked<2>();
  std::vector<Vec2> out(static_cast<std::size_t>(a.shape(0)));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = {r(j, 0), r(j, 1)};
  return out;
}

NetworkState make_network(const std::string& topology, const std::vector<Array>& curves,
                          const std::optional<std::vector<std::array<double, 2>>>& endpoints) {
  if (curves.size() != 3) throw py::value_error("a network has exactly three curves");
  std::array<std::vector<Vec2>, 3> pos;
  for (std::size_t i = 0; i < 3; ++i) pos[i] = from_array(curves[i]);
  std::optional<std::array<Vec2, 3>> ends;
  if (endpoints) {
    if (endpoints->size() != 3) throw py::value_error("a Triod has three endpoints");
    ends = std::array<Vec2, 3>{};
    for (std::size_t i = 0; i < 3; ++i) (*ends)[i] = {(*endpoints)[i][0], (*endpoints)[i][1]};
  }
  return NetworkState::from_positions(parse_topology(topology), pos, ends);
}

py::dict report_dict(const AdmissibilityReport& r) {
  py::dict entries;
  for (const auto& e : r.entries()) {
    py::dict d;
    d["value"] = e.value;
    d["tolerance"] = e.tolerance;
    d["lower_bound"] = e.bound == Bound::Lower;
    d["passed"] = e.passed();
    entries[py::str(e.name)] = d;
  }
  py::dict out;
  out["passed"] = r.passed();
  out["entries"] = entries;
  return out;
}

Flavor flavor_of(const NetworkState& net, const std::optional<std::string>& flavor) {
  return flavor ? parse_flavor(*flavor) : natural_flavor(net.topology());
}

} // namespace

PYBIND11_MODULE(_elastinet, m) {
  m.doc() = "Elastic flow of planar three-curve networks";

  py::register_exception<Error>(m, "ElastinetError", PyExc_RuntimeError);

  py::class_<NetworkState>(m, "Network")
      .def(py::init(&make_network), py::arg("topology"), py::arg("curves"), py::arg("endpoints") = py::none())
      .def_property_readonly("topology", [](const NetworkState& n) { return std::string(to_string(n.topology())); })
      .def_property_readonly("intervals", &NetworkState::intervals)
      .def_property_readonly("curves",
                             [](const NetworkState& n) {
                               py::list out;
                               for (const auto& c : n.curves()) out.append(to_array(c.position()));
                               return out;
                             })
      .def_property_readonly("endpoints",
                             [](const NetworkState& n) -> py::object {
                               if (!n.endpoints()) return py::none();
                               py::list out;
                               for (const auto& p : *n.endpoints()) out.append(py::make_tuple(p.x, p.y));
                               return out;
                             })
      .def("energy", [](const NetworkState& n, double mu) { return network_energy(n, EnergyParams{mu}); },
           py::arg("mu"))
      .def("length", &network_length)
      .def("min_speed", &NetworkState::min_speed)
      .def("to_json", [](const NetworkState& n, double mu) { return snapshot_json(n, EnergyParams{mu}); },
           py::arg("mu"))
      .def_static(
          "from_json",
          [](const std::string& text) {
            const LoadedNetwork l = parse_snapshot(text);
            return py::make_tuple(l.net, l.params.mu);
          },
          py::arg("text"), "Returns (network, mu).");

  m.def("scenario_names", &scenario_names);
  m.def(
      "scenario",
      [](const std::string& name, std::size_t intervals, std::optional<double> mu, std::optional<double> amplitude,
         std::uint64_t seed) {
        ScenarioOptions o;
        o.intervals = intervals;
        o.mu = mu;
        o.amplitude = amplitude;
        o.seed = seed;
        const Scenario s = make_scenario(name, o);
        return py::make_tuple(s.network, s.params.mu, std::string(to_string(s.flavor)));
      },
      py::arg("name"), py::arg("intervals") = 128, py::arg("mu") = py::none(), py::arg("amplitude") = py::none(),
      py::arg("seed") = 0, "Returns (network, mu, flavor).");

  m.def(
      "geometric_admissibility",
      [](const NetworkState& n, double mu, std::optional<std::string> flavor, double tolerance) {
        return report_dict(geometric_admissibility(n, EnergyParams{mu}, flavor_of(n, flavor), tolerance));
      },
      py::arg("network"), py::arg("mu"), py::arg("flavor") = py::none(), py::arg("tolerance") = kAnalyticTolerance);
  m.def(
      "parametric_admissibility",
      [](const NetworkState& n, double mu, std::optional<std::string> flavor, double tolerance) {
        return report_dict(parametric_admissibility(n, EnergyParams{mu}, flavor_of(n, flavor), tolerance));
      },
      py::arg("network"), py::arg("mu"), py::arg("flavor") = py::none(), py::arg("tolerance") = kGridTolerance);

  m.def(
      "ls_verify",
      [](const NetworkState& n, std::optional<std::string> flavor, double threshold) {
        const LSReport r = ls_verify(n, flavor_of(n, flavor), default_lambda_grid(), threshold);
        py::dict out;
        out["passed"] = r.passed;
        out["min_sigma"] = r.min_sigma;
        out["threshold"] = r.threshold;
        return out;
      },
      py::arg("network"), py::arg("flavor") = py::none(), py::arg("threshold") = 1e-6);

  m.def(
      "reparametrize",
      [](const NetworkState& n, double mu) {
        const ReparamMap map = build_reparametrization(n, EnergyParams{mu});
        return py::make_tuple(apply_reparametrization(n, map), map.min_derivative());
      },
      py::arg("network"), py::arg("mu"), "Returns (network, min theta_x).");

  m.def(
      "simulate",
      [](const NetworkState& n, double mu, std::optional<std::string> flavor, double t_final, double dt,
         int boundary_corrections) {
        SchemeConfig c;
        c.t_final = t_final;
        c.dt_init = dt;
        c.boundary_corrections = boundary_corrections;
        FlowTrace trace;
        {
          py::gil_scoped_release release;
          trace = run(n, c, EnergyParams{mu}, flavor_of(n, flavor));
        }
        std::vector<double> times, energies;
        for (const auto& r : trace.records) {
          times.push_back(r.time);
          energies.push_back(r.energy);
        }
        py::dict out;
        out["times"] = times;
        out["energies"] = energies;
        out["termination"] = trace.termination;
        out["rejected_steps"] = trace.rejected_steps;
        out["max_linear_residual"] = trace.max_linear_residual;
        out["final"] = trace.final_state.net;
        return out;
      },
      py::arg("network"), py::arg("mu"), py::arg("flavor") = py::none(), py::arg("t_final") = 0.1,
      py::arg("dt") = 1e-4, py::arg("boundary_corrections") = 2);
}
