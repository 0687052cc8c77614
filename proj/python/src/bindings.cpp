#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lifisim/channel.hpp"
#include "lifisim/error.hpp"
#include "lifisim/geometry.hpp"
#include "lifisim/linksim.hpp"
#include "lifisim/modem.hpp"
#include "lifisim/planner.hpp"
#include "lifisim/scenario.hpp"
#include "lifisim/scenario_io.hpp"

namespace py = pybind11;
using namespace lifisim;

namespace {

using Vec3 = std::tuple<double, double, double>;

geometry::Point3 point(const Vec3& v) { return {std::get<0>(v), std::get<1>(v), std::get<2>(v)}; }
geometry::Direction3 direction(const Vec3& v) { return geometry::Direction3(point(v)); }
Vec3 tuple_of(geometry::Direction3 d) { return {d.x(), d.y(), d.z()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Indoor Li-Fi link simulator core";

  auto base = py::register_exception<Error>(m, "LifisimError", PyExc_RuntimeError);
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<FramingError>(m, "FramingError", base.ptr());
  py::register_exception<CalibrationError>(m, "CalibrationError", base.ptr());
  auto scen_err = py::register_exception<ScenarioError>(m, "ScenarioError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<io::ScenarioFileError>(m, "ScenarioFileError", scen_err.ptr());
  py::register_exception<io::IoError>(m, "IoError", base.ptr());

  py::class_<geometry::LinkGeometry>(m, "LinkGeometry")
      .def_readonly("theta", &geometry::LinkGeometry::theta)
      .def_readonly("phi", &geometry::LinkGeometry::phi)
      .def_readonly("distance", &geometry::LinkGeometry::distance)
      .def("__repr__", [](const geometry::LinkGeometry& g) {
        return "LinkGeometry(theta=" + std::to_string(g.theta) + ", phi=" + std::to_string(g.phi) +
               ", distance=" + std::to_string(g.distance) + ")";
      });

  m.def(
      "link_geometry",
      [](const Vec3& tx, const Vec3& tx_n, const Vec3& rx, const Vec3& rx_n) {
        return geometry::link_geometry(point(tx), direction(tx_n), point(rx), direction(rx_n));
      },
      py::arg("tx_pos"), py::arg("tx_normal"), py::arg("rx_pos"), py::arg("rx_normal"));
  m.def(
      "tilt_panel",
      [](const Vec3& normal, double tilt, double az) { return tuple_of(geometry::tilt_panel(direction(normal), tilt, az)); },
      py::arg("normal"), py::arg("tilt_deg"), py::arg("azimuth_deg"));

  py::class_<channel::SnrReport>(m, "SnrReport")
      .def_readonly("snr_linear", &channel::SnrReport::snr_linear)
      .def_readonly("snr_db", &channel::SnrReport::snr_db)
      .def_readonly("received_power_w", &channel::SnrReport::received_power_w)
      .def_readonly("channel_gain", &channel::SnrReport::channel_gain);

  m.def("lambertian_order", &channel::lambertian_order, py::arg("semi_angle_deg"));
  m.def(
      "los_gain",
      [](double theta, double phi, double distance, double semi_angle, double area, double fov, double filter_gain,
         double concentrator_index) {
        channel::LedPanel lp;
        lp.semi_angle_deg = semi_angle;
        channel::Receiver rx;
        rx.area_m2 = area;
        rx.fov_deg = fov;
        rx.filter_gain = filter_gain;
        rx.concentrator_index = concentrator_index;
        lp.validate();
        rx.validate();
        return channel::los_gain({theta, phi, distance}, lp, rx);
      },
      py::arg("theta_deg"), py::arg("phi_deg"), py::arg("distance_m"), py::arg("semi_angle_deg") = 60.0,
      py::arg("area_m2") = 1e-4, py::arg("fov_deg") = 60.0, py::arg("filter_gain") = 1.0,
      py::arg("concentrator_index") = 1.5);
  m.def(
      "snr",
      [](double brightness, double p_rec, double variance) {
        return channel::snr(brightness, p_rec, channel::NoiseModel{variance});
      },
      py::arg("brightness"), py::arg("received_power_w"), py::arg("noise_variance"));
  m.def("q_function", &channel::q_function, py::arg("x"));
  m.def("ber_ook", &channel::ber_ook, py::arg("snr_linear"));
  m.def("ook_snr_for_ber", &channel::ook_snr_for_ber, py::arg("target_ber"));

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("noise_variance", [](const Scenario& s) { return s.noise.variance; })
      .def_property_readonly("strategy", [](const Scenario& s) { return std::string(strategy_name(s.strategy)); })
      .def_property_readonly("panel_count", [](const Scenario& s) { return s.panels.size(); })
      .def_property_readonly("receiver_count", [](const Scenario& s) { return s.receivers.size(); })
      .def("to_json", [](const Scenario& s) { return io::to_json(s); });

  m.def("default_scenario", &default_scenario);
  m.def(
      "load_scenario", [](const std::string& path) { return io::load_scenario(path).scenario; }, py::arg("path"));
  m.def(
      "parse_scenario", [](const std::string& text) { return io::parse_scenario(text).scenario; }, py::arg("text"));
  m.def(
      "calibrate_to_anchor",
      [](Scenario s, double theta, double phi, double db) {
        s.noise = channel::calibrate_to_anchor(s, theta, phi, db);
        return s;
      },
      py::arg("scenario"), py::arg("theta_deg") = 65.0, py::arg("phi_deg") = 45.0, py::arg("snr_db") = 128.0);
  m.def(
      "calibrate_to_ber",
      [](Scenario s, double theta, double phi, double ber) {
        s.noise = channel::calibrate_to_ber(s, theta, phi, ber);
        return s;
      },
      py::arg("scenario"), py::arg("theta_deg") = 70.0, py::arg("phi_deg") = 45.0, py::arg("target_ber") = 1e-5);
  m.def("primary_snr_at_theta", &channel::primary_snr_at_theta, py::arg("scenario"), py::arg("theta_deg"));
  m.def(
      "table3",
      [](const Scenario& s) {
        std::vector<std::pair<double, double>> rows;
        for (const auto& r : channel::table3_sweep(s)) rows.emplace_back(r.theta_deg, r.snr_db);
        return rows;
      },
      py::arg("scenario"));

  py::class_<modem::SchemeConfig>(m, "Scheme")
      .def_property_readonly("name", [](const modem::SchemeConfig& c) { return modem::scheme_name(c); })
      .def("__repr__", [](const modem::SchemeConfig& c) { return "Scheme('" + modem::scheme_name(c) + "')"; });
  m.def(
      "scheme",
      [](const std::string& name, std::optional<double> dimming) {
        modem::SchemeConfig c = io::parse_scheme_name(name);
        if (dimming) {
          std::visit(
              [&](auto& s) {
                if constexpr (requires { s.dimming; }) {
                  s.dimming = *dimming;
                } else {
                  throw ConfigError("scheme " + name + " has no dimming level");
                }
              },
              c.scheme);
          modem::validate(c);
        }
        return c;
      },
      py::arg("name"), py::arg("dimming") = py::none());

  py::class_<modem::Waveform>(m, "Waveform")
      .def_readonly("samples", &modem::Waveform::samples)
      .def_readonly("samples_per_slot", &modem::Waveform::samples_per_slot)
      .def_readonly("payload_bits", &modem::Waveform::payload_bits)
      .def("__len__", [](const modem::Waveform& w) { return w.samples.size(); });
  m.def(
      "encode", [](const modem::Bits& bits, const modem::SchemeConfig& c) { return modem::encode(bits, c); },
      py::arg("bits"), py::arg("scheme"));
  m.def("decode", &modem::decode, py::arg("waveform"), py::arg("scheme"));

  py::class_<modem::SchemeMetrics>(m, "SchemeMetrics")
      .def_readonly("bits_per_slot", &modem::SchemeMetrics::bits_per_slot)
      .def_readonly("duty_cycle", &modem::SchemeMetrics::duty_cycle)
      .def_readonly("rate_factor", &modem::SchemeMetrics::rate_factor);
  m.def("scheme_metrics", &modem::scheme_metrics, py::arg("scheme"));

  py::class_<linksim::BerEstimate>(m, "BerEstimate")
      .def_readonly("ber", &linksim::BerEstimate::ber)
      .def_readonly("errors", &linksim::BerEstimate::errors)
      .def_readonly("bits", &linksim::BerEstimate::bits)
      .def_readonly("ci95_halfwidth", &linksim::BerEstimate::ci95_halfwidth)
      .def_readonly("zero_gain", &linksim::BerEstimate::zero_gain);
  m.def(
      "run_link",
      [](const modem::SchemeConfig& c, double snr_db, std::size_t bits, std::uint64_t seed, std::uint64_t stream) {
        py::gil_scoped_release release;
        return linksim::run_link({c, snr_db, bits, seed, stream});
      },
      py::arg("scheme"), py::arg("snr_db"), py::arg("bit_budget") = 100000, py::arg("seed") = 1,
      py::arg("stream") = 0);
  m.def(
      "ber_sweep",
      [](const modem::SchemeConfig& c, const std::vector<double>& pts, std::size_t bits, std::uint64_t seed,
         unsigned threads) {
        py::gil_scoped_release release;
        return linksim::ber_sweep(c, pts, bits, seed, threads);
      },
      py::arg("scheme"), py::arg("snr_db"), py::arg("bit_budget") = 100000, py::arg("seed") = 1,
      py::arg("threads") = 0);

  m.def(
      "coverage",
      [](const Scenario& s, double resolution) {
        const auto g = planner::coverage_grid(s, resolution);
        py::dict d;
        d["nx"] = g.nx;
        d["ny"] = g.ny;
        std::vector<double> x, y, db;
        for (std::size_t i = 0; i < g.nx; ++i) x.push_back(g.x(i));
        for (std::size_t j = 0; j < g.ny; ++j) y.push_back(g.y(j));
        for (const auto& v : g.values) db.push_back(v.snr_db);
        d["x"] = x;
        d["y"] = y;
        d["snr_db"] = db;
        d["ber"] = g.ber;
        d["serving_panel"] = g.serving_panel;
        return d;
      },
      py::arg("scenario"), py::arg("resolution") = 0.1);
  m.def("overlap_cells", &planner::overlap_report, py::arg("scenario"), py::arg("threshold_db"),
        py::arg("resolution") = 0.1);
  m.def("assign_users", &planner::assign_users, py::arg("scenario"));

  py::class_<planner::PanelAim>(m, "PanelAim")
      .def_readonly("tilt_deg", &planner::PanelAim::tilt_deg)
      .def_readonly("azimuth_deg", &planner::PanelAim::azimuth_deg);
  py::class_<planner::PlanReport>(m, "PlanReport")
      .def_readonly("assignment", &planner::PlanReport::assignment)
      .def_readonly("tilts", &planner::PlanReport::tilts)
      .def_readonly("per_user_snr_db", &planner::PlanReport::per_user_snr_db)
      .def_readonly("per_user_ber", &planner::PlanReport::per_user_ber)
      .def_readonly("min_user_snr_db", &planner::PlanReport::min_user_snr_db)
      .def_readonly("overlap_cells", &planner::PlanReport::overlap_cells);
  m.def(
      "plan",
      [](const Scenario& s, double step, std::optional<double> threshold) {
        return planner::optimize_tilts(s, step, threshold);
      },
      py::arg("scenario"), py::arg("tilt_step") = 1.0, py::arg("threshold_db") = py::none());
  m.def("frozen_plan", &planner::frozen_plan, py::arg("scenario"));
}
