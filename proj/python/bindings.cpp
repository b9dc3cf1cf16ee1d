#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcvd/analytic_channel.hpp"
#include "mcvd/brownian_sim.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/special_functions.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-form absorbing-receiver channel and Brownian-dynamics simulator.";

  py::register_exception<mcvd::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<mcvd::ResourceError>(m, "ResourceError", PyExc_RuntimeError);

  m.def("erfc", &mcvd::erfc, "x"_a);
  m.def("erfcx", &mcvd::erfcx, "x"_a);

  py::class_<mcvd::ChannelGeometry>(m, "ChannelGeometry")
      .def_static("from_center_distance", &mcvd::ChannelGeometry::from_center_distance, "r0"_a, "rr"_a)
      .def_static("from_surface_distance", &mcvd::ChannelGeometry::from_surface_distance, "d"_a, "rr"_a)
      .def_property_readonly("r0", &mcvd::ChannelGeometry::r0)
      .def_property_readonly("rr", &mcvd::ChannelGeometry::rr)
      .def_property_readonly("d", &mcvd::ChannelGeometry::d)
      .def("__repr__", [](const mcvd::ChannelGeometry& g) {
        return "ChannelGeometry(r0=" + std::to_string(g.r0()) + ", rr=" + std::to_string(g.rr()) + ")";
      });

  py::class_<mcvd::DiffusionEnv>(m, "DiffusionEnv")
      .def_static("absorbing", &mcvd::DiffusionEnv::absorbing, "D"_a)
      .def_static("radiation", &mcvd::DiffusionEnv::radiation, "D"_a, "w"_a)
      .def_property_readonly("D", &mcvd::DiffusionEnv::D)
      .def_property_readonly("reaction_rate", &mcvd::DiffusionEnv::reaction_rate)
      .def_property_readonly("is_absorbing", &mcvd::DiffusionEnv::is_absorbing);

  py::class_<mcvd::EmissionSpec>(m, "EmissionSpec")
      .def(py::init<std::uint64_t, double>(), "n_tx"_a, "dt"_a)
      .def_property_readonly("n_tx", &mcvd::EmissionSpec::n_tx)
      .def_property_readonly("dt", &mcvd::EmissionSpec::dt);

  m.def("molecule_distribution", &mcvd::molecule_distribution, "r"_a, "t"_a, "geom"_a, "env"_a);
  m.def("hitting_rate", &mcvd::hitting_rate, "t"_a, "geom"_a, "env"_a);
  m.def("hitting_fraction", &mcvd::hitting_fraction, "t"_a, "geom"_a, "env"_a);
  m.def("expected_hits", &mcvd::expected_hits, "t_start"_a, "t_end"_a, "geom"_a, "em"_a, "env"_a);
  m.def("peak_time", &mcvd::peak_time, "geom"_a, "env"_a);
  m.def("peak_amplitude", &mcvd::peak_amplitude, "geom"_a, "em"_a, "env"_a);
  m.def("survival_fraction", &mcvd::survival_fraction, "geom"_a);

  py::enum_<mcvd::AbsorptionMode>(m, "AbsorptionMode")
      .value("EndOfStep", mcvd::AbsorptionMode::EndOfStep)
      .value("BridgeCorrected", mcvd::AbsorptionMode::BridgeCorrected);

  py::class_<mcvd::SimConfig>(m, "SimConfig")
      .def(py::init([](const mcvd::ChannelGeometry& geom, const mcvd::DiffusionEnv& env,
                       const mcvd::EmissionSpec& em, double t_end, std::uint64_t seed,
                       std::uint64_t particles, mcvd::AbsorptionMode mode, bool jumps) {
             return mcvd::SimConfig{.geom = geom, .env = env, .em = em, .t_end = t_end,
                                    .seed = seed, .particles = particles,
                                    .absorption_mode = mode, .far_field_jumps = jumps};
           }),
           "geom"_a, "env"_a, "em"_a, "t_end"_a, "seed"_a = 42, "particles"_a = 5000,
           "absorption_mode"_a = mcvd::AbsorptionMode::EndOfStep, "far_field_jumps"_a = true)
      .def_static("baseline", &mcvd::SimConfig::baseline, "t_end"_a, "particles"_a,
                  "seed"_a)
      .def_readonly("geom", &mcvd::SimConfig::geom)
      .def_readonly("env", &mcvd::SimConfig::env)
      .def_readonly("em", &mcvd::SimConfig::em)
      .def_readonly("t_end", &mcvd::SimConfig::t_end)
      .def_readonly("seed", &mcvd::SimConfig::seed)
      .def_readonly("particles", &mcvd::SimConfig::particles)
      .def_readonly("absorption_mode", &mcvd::SimConfig::absorption_mode);

  py::class_<mcvd::SimResult>(m, "SimResult")
      .def_readonly("bin_counts", &mcvd::SimResult::bin_counts)
      .def_readonly("absorbed_total", &mcvd::SimResult::absorbed_total)
      .def_readonly("survivors", &mcvd::SimResult::survivors)
      .def_readonly("config", &mcvd::SimResult::config)
      .def_readonly("t_end_effective", &mcvd::SimResult::t_end_effective)
      .def_readonly("wall_time_s", &mcvd::SimResult::wall_time_s);

  m.def(
      "simulate",
      [](const mcvd::SimConfig& cfg, unsigned workers) {
        py::gil_scoped_release release;
        return mcvd::simulate(cfg, {.workers = workers});
      },
      "cfg"_a, "workers"_a = 1);

  m.def(
      "estimate_peak",
      [](const mcvd::SimResult& result, std::size_t window) {
        const mcvd::PeakEstimate peak = mcvd::estimate_peak(result, window);
        return py::make_tuple(peak.t_peak_s, peak.n_peak);
      },
      "result"_a, "window"_a);
}
