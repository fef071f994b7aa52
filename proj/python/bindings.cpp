#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "enmod/channel.hpp"
#include "enmod/design.hpp"
#include "enmod/errors.hpp"
#include "enmod/experiment.hpp"
#include "enmod/montecarlo.hpp"
#include "enmod/rates.hpp"

namespace py = pybind11;
using namespace enmod;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

SimReport simulate_energy(const Constellation& c, const ChannelSpec& channel, double sigma2, int antennas,
                          std::uint64_t symbols, std::uint64_t seed, int shards) {
    py::gil_scoped_release release;
    return simulate(SimScenario{EnergyRegionsScheme{c}, channel, sigma2, antennas, symbols, seed, shards});
}

py::tuple run_command(const std::string& command, const std::string& config_json) {
    std::ostringstream out, err;
    int code;
    try {
        code = experiment::run(command, experiment::parse_config_text(config_json), out, err);
    } catch (const experiment::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        code = experiment::kConfigError;
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Energy-detection constellation design for noncoherent massive SIMO";

    py::register_exception<NotSamplable>(m, "NotSamplable", PyExc_ValueError);

    m.def("sigma2_from_snr", &sigma2_from_snr, py::arg("snr_db"));
    m.def("snr_from_sigma2", &snr_from_sigma2, py::arg("sigma2"));

    py::class_<ChannelSpec>(m, "ChannelSpec")
        .def_static("rician_db", &ChannelSpec::rician_db, py::arg("k_db"))
        .def_static("rayleigh", &ChannelSpec::rayleigh)
        .def_static("nakagami", &ChannelSpec::nakagami, py::arg("m"), py::arg("omega") = 1.0)
        .def_static("moments_only", &ChannelSpec::moments_only, py::arg("alpha1"))
        .def_property_readonly("samplable", &ChannelSpec::samplable)
        .def_property_readonly("mean", &ChannelSpec::mean)
        .def_property_readonly("scatter_variance", &ChannelSpec::scatter_variance)
        .def_property_readonly("alpha1", &ChannelSpec::alpha1)
        .def("__repr__", &ChannelSpec::describe);

    py::enum_<Side>(m, "Side").value("LEFT", Side::Left).value("RIGHT", Side::Right);

    py::class_<RateOracle>(m, "RateOracle")
        .def(py::init<ChannelSpec, double, double>(), py::arg("channel"), py::arg("sigma2"), py::arg("power"))
        .def("right", &RateOracle::right, py::arg("d"))
        .def("left", &RateOracle::left, py::arg("d"))
        .def("inverse", &RateOracle::inverse, py::arg("side"), py::arg("t"))
        .def_property_readonly("mean_energy", &RateOracle::mean_energy)
        .def_property_readonly("energy_variance", &RateOracle::energy_variance);

    py::class_<Constellation>(m, "Constellation")
        .def(py::init<std::vector<double>, std::vector<double>, double>(), py::arg("levels"), py::arg("boundaries"),
             py::arg("sigma2_design"))
        .def_property_readonly("levels", [](const Constellation& c) { return to_vector(c.levels()); })
        .def_property_readonly("boundaries", [](const Constellation& c) { return to_vector(c.boundaries()); })
        .def_property_readonly("sigma2_design", &Constellation::sigma2_design)
        .def_property_readonly("mean_power", &Constellation::mean_power)
        .def("center", &Constellation::center)
        .def("__len__", &Constellation::size);

    py::class_<DesignConfig>(m, "DesignConfig")
        .def(py::init([](int levels, double budget, double tolerance) {
                 DesignConfig c;
                 c.levels = levels;
                 c.power_budget = budget;
                 c.tolerance = tolerance;
                 return c;
             }),
             py::arg("levels") = 4, py::arg("budget") = 1.0, py::arg("tolerance") = 1e-6)
        .def_readwrite("levels", &DesignConfig::levels)
        .def_readwrite("power_budget", &DesignConfig::power_budget)
        .def_readwrite("tolerance", &DesignConfig::tolerance);

    py::class_<UncertaintyBox>(m, "UncertaintyBox")
        .def(py::init<double, double, double, double>(), py::arg("alpha_min"), py::arg("alpha_max"),
             py::arg("sigma_min"), py::arg("sigma_max"))
        .def_static("point", &UncertaintyBox::point)
        .def_static("around_rician", &UncertaintyBox::around_rician, py::arg("k_db"), py::arg("snr_db"),
                    py::arg("half_width_db"))
        .def_readonly("alpha_min", &UncertaintyBox::alpha_min)
        .def_readonly("alpha_max", &UncertaintyBox::alpha_max)
        .def_readonly("sigma_min", &UncertaintyBox::sigma_min)
        .def_readonly("sigma_max", &UncertaintyBox::sigma_max);

    py::class_<DesignOutcome>(m, "DesignOutcome")
        .def_readonly("feasible", &DesignOutcome::feasible)
        .def_readonly("constellation", &DesignOutcome::constellation)
        .def_readonly("t_star", &DesignOutcome::t_star);

    m.def("design_exact", &design_exact, py::arg("channel"), py::arg("sigma2"), py::arg("config"));
    m.def("design_moments", &design_moments, py::arg("alpha1"), py::arg("sigma2"), py::arg("config"));
    m.def("design_robust", &design_robust, py::arg("box"), py::arg("config"));
    m.def("min_distance_constellation", &min_distance_constellation, py::arg("levels"), py::arg("sigma2"));
    m.def("ask_constellation", &ask_constellation, py::arg("levels"));
    m.def("error_exponent", &error_exponent, py::arg("constellation"), py::arg("channel"), py::arg("sigma2"));
    m.def("chernoff_ser_bound", &chernoff_ser_bound, py::arg("constellation"), py::arg("channel"), py::arg("sigma2"),
          py::arg("antennas"));

    py::class_<SimReport>(m, "SimReport")
        .def_readonly("symbols", &SimReport::symbols)
        .def_readonly("symbol_errors", &SimReport::symbol_errors)
        .def_readonly("bit_errors", &SimReport::bit_errors)
        .def_readonly("ser", &SimReport::ser)
        .def_readonly("ber", &SimReport::ber)
        .def_property_readonly("ser_ci", [](const SimReport& r) { return py::make_tuple(r.ser_ci.low, r.ser_ci.high); })
        .def_property_readonly("ber_ci", [](const SimReport& r) { return py::make_tuple(r.ber_ci.low, r.ber_ci.high); });

    m.def("simulate_energy", &simulate_energy, py::arg("constellation"), py::arg("channel"), py::arg("sigma2"),
          py::arg("antennas"), py::arg("symbols") = 100000, py::arg("seed") = 1, py::arg("shards") = 1);

    m.def("run_command", &run_command, py::arg("command"), py::arg("config_json") = "{}",
          "Run a CLI command on a JSON config; returns (exit_code, stdout, stderr).");
}
