#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "stml/commands.hpp"
#include "stml/config.hpp"
#include "stml/coupling.hpp"
#include "stml/cube.hpp"
#include "stml/current.hpp"
#include "stml/density.hpp"
#include "stml/io.hpp"
#include "stml/kinetics.hpp"
#include "stml/scan.hpp"
#include "stml/units.hpp"

namespace py = pybind11;
using namespace stml;

namespace {

// The Python layer speaks eV, nm and volts throughout.

ElectrodeModel electrodes(double fermi_ev, double radius_nm, double height_nm, double substrate_nm) {
    return ElectrodeModel::from_ev_nm(fermi_ev, radius_nm, height_nm, substrate_nm);
}

TransitionDensity gaussian(double sigma_nm, double sigma1_nm, double sigma2_nm, double e_eg_ev, std::string label) {
    return TransitionDensity::gaussian(GaussianDensityParams::from_nm(sigma_nm, sigma1_nm, sigma2_nm),
                                       units::ev_to_hartree(e_eg_ev), std::move(label));
}

std::vector<TransitionChannel> channels_of(const std::vector<TransitionDensity>& densities,
                                           const ElectrodeModel& model, double spacing_nm, double half_extent_nm) {
    DomainOptions o;
    o.spacing = units::nm_to_bohr(spacing_nm);
    o.lateral_half_extent = units::nm_to_bohr(half_extent_nm);
    std::vector<TransitionChannel> out;
    for (const auto& d : densities) out.emplace_back(d, model, o);
    return out;
}

std::vector<double> to_bohr(const std::vector<double>& nm) {
    std::vector<double> b;
    for (double v : nm) b.push_back(units::nm_to_bohr(v));
    return b;
}

}  // namespace

PYBIND11_MODULE(_stml, m) {
    m.doc() = "Inelastic tunneling current and detection kinetics for molecular transition densities";
    m.attr("__version__") = stml::version;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<ElectrodeModel>(m, "ElectrodeModel")
        .def_static("defaults", &ElectrodeModel::defaults)
        .def_property_readonly("fermi_energy_ev", [](const ElectrodeModel& e) { return units::hartree_to_ev(e.fermi_energy); })
        .def_property_readonly("tip_radius_nm", [](const ElectrodeModel& e) { return units::bohr_to_nm(e.tip_radius); })
        .def_property_readonly("tip_height_nm", [](const ElectrodeModel& e) { return units::bohr_to_nm(e.tip_height); })
        .def_property_readonly("substrate_z_nm", [](const ElectrodeModel& e) { return units::bohr_to_nm(e.substrate_z); });
    m.def("electrodes", &electrodes, py::arg("fermi_energy_ev") = -4.64, py::arg("tip_radius_nm") = 0.5,
          py::arg("tip_height_nm") = 1.0, py::arg("substrate_z_nm") = -0.3);

    py::class_<TransitionDensity>(m, "TransitionDensity")
        .def_property_readonly("label", &TransitionDensity::label)
        .def_property_readonly("is_analytic", &TransitionDensity::is_analytic)
        .def_property_readonly("e_eg_ev", [](const TransitionDensity& d) { return units::hartree_to_ev(d.energy_gap()); })
        .def_property_readonly("total_charge", [](const TransitionDensity& d) { return total_charge(d); })
        .def_property_readonly("dipole_au", [](const TransitionDensity& d) {
            const Vec3 v = transition_dipole(d);
            return py::make_tuple(v.x, v.y, v.z);
        });
    m.def("gaussian_density", &gaussian, py::arg("sigma_nm") = 1.0, py::arg("sigma1_nm") = 0.5,
          py::arg("sigma2_nm") = 1.0, py::arg("e_eg_ev") = 2.0, py::arg("label") = "gaussian");
    m.def("load_cube", [](const std::filesystem::path& p, double e_eg_ev, std::string label) {
              return load_cube(p, units::ev_to_hartree(e_eg_ev), std::move(label));
          },
          py::arg("path"), py::arg("e_eg_ev"), py::arg("label") = "");
    m.def("eval_gaussian_density",
          [](double x_nm, double y_nm, double sigma_nm, double sigma1_nm, double sigma2_nm) {
              // Bohr^-2 -> nm^-2
              const auto p = GaussianDensityParams::from_nm(sigma_nm, sigma1_nm, sigma2_nm);
              const double b = units::bohr_nm;
              return eval_gaussian_density(p, {units::nm_to_bohr(x_nm), units::nm_to_bohr(y_nm), 0.0}) / (b * b);
          },
          py::arg("x_nm"), py::arg("y_nm"), py::arg("sigma_nm") = 1.0, py::arg("sigma1_nm") = 0.5,
          py::arg("sigma2_nm") = 1.0);
    m.def("decay_constant_per_nm",
          [](double e_ev) { return decay_constant(units::ev_to_hartree(e_ev)) / units::bohr_nm; }, py::arg("energy_ev"));

    m.def("total_current",
          [](const std::vector<TransitionDensity>& densities, double bias_v, double tip_x_nm, double tip_y_nm,
             const ElectrodeModel& model, int n_energy, double spacing_nm, double half_extent_nm) {
              const auto ch = channels_of(densities, model, spacing_nm, half_extent_nm);
              return total_inelastic_current(ch, model, Bias{bias_v},
                                             {units::nm_to_bohr(tip_x_nm), units::nm_to_bohr(tip_y_nm)}, n_energy)
                  .total;
          },
          py::arg("densities"), py::arg("bias_v"), py::arg("tip_x_nm") = 0.0, py::arg("tip_y_nm") = 0.0,
          py::arg("model") = ElectrodeModel::defaults(), py::arg("n_energy") = default_energy_nodes,
          py::arg("spacing_nm") = 0.1, py::arg("half_extent_nm") = 4.5);

    m.def("bias_sweep",
          [](const std::vector<TransitionDensity>& densities, const std::vector<double>& biases_v, double tip_x_nm,
             double tip_y_nm, const ElectrodeModel& model, int n_energy, unsigned threads, double spacing_nm,
             double half_extent_nm) {
              const auto ch = channels_of(densities, model, spacing_nm, half_extent_nm);
              py::gil_scoped_release release;
              return bias_sweep(ch, model, biases_v, {units::nm_to_bohr(tip_x_nm), units::nm_to_bohr(tip_y_nm)},
                                n_energy, threads)
                  .current;
          },
          py::arg("densities"), py::arg("biases_v"), py::arg("tip_x_nm") = 0.0, py::arg("tip_y_nm") = 0.0,
          py::arg("model") = ElectrodeModel::defaults(), py::arg("n_energy") = default_energy_nodes,
          py::arg("threads") = 1, py::arg("spacing_nm") = 0.1, py::arg("half_extent_nm") = 4.5);

    m.def("scan_map",
          [](const std::vector<TransitionDensity>& densities, double bias_v, const std::vector<double>& x_nm,
             const std::vector<double>& y_nm, const ElectrodeModel& model, int n_energy, unsigned threads,
             double spacing_nm, double half_extent_nm) {
              const auto ch = channels_of(densities, model, spacing_nm, half_extent_nm);
              CurrentMap2D map;
              {
                  py::gil_scoped_release release;
                  map = scan_map(ch, model, Bias{bias_v}, to_bohr(x_nm), to_bohr(y_nm), n_energy, threads);
              }
              py::array_t<double> out({map.ny(), map.nx()});
              std::copy(map.values.begin(), map.values.end(), out.mutable_data());
              return out;
          },
          "Raw current map indexed [iy, ix].", py::arg("densities"), py::arg("bias_v"), py::arg("x_nm"),
          py::arg("y_nm"), py::arg("model") = ElectrodeModel::defaults(), py::arg("n_energy") = default_energy_nodes,
          py::arg("threads") = 1, py::arg("spacing_nm") = 0.1, py::arg("half_extent_nm") = 4.5);

    m.def("uniform_axis", &uniform_axis, py::arg("lo"), py::arg("hi"), py::arg("n"));

    m.def("steady_state",
          [](double pump, double eta, double gamma0, double gamma3) {
              const auto p = kinetics::steady_state({pump, eta, gamma0, gamma3});
              return py::make_tuple(p.p0, p.p3, p.p17);
          },
          py::arg("pump_rate_ies"), py::arg("laser_pump") = 1e8, py::arg("gamma0") = 4e4, py::arg("gamma3") = 4e4);
    m.def("photon_emission_rate",
          [](double pump, double eta, double gamma0, double gamma3) {
              return kinetics::photon_emission_rate({pump, eta, gamma0, gamma3});
          },
          py::arg("pump_rate_ies"), py::arg("laser_pump") = 1e8, py::arg("gamma0") = 4e4, py::arg("gamma3") = 4e4);
    m.def("photon_emission_rate_closed_form",
          [](double pump, double eta, double gamma0, double gamma3) {
              return kinetics::photon_emission_rate_closed_form({pump, eta, gamma0, gamma3});
          },
          py::arg("pump_rate_ies"), py::arg("laser_pump") = 1e8, py::arg("gamma0") = 4e4, py::arg("gamma3") = 4e4);

    m.def("run",
          [](const std::string& command, const std::string& config, const std::string& out,
             std::optional<unsigned> threads, bool log10) {
              cli::RunOptions o;
              o.out_dir = out;
              o.threads = threads;
              o.log10 = log10;
              std::ostringstream report, err;
              const int code = cli::run(command, config, o, report, err);
              return py::make_tuple(code, report.str(), err.str());
          },
          "Runs a CLI subcommand; returns (exit_code, report, errors).", py::arg("command"), py::arg("config") = "",
          py::arg("out") = ".", py::arg("threads") = py::none(), py::arg("log10") = false);
}
