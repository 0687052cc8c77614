#include "lifisim/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "lifisim/error.hpp"
#include "lifisim/scenario.hpp"

namespace lifisim::channel {

using geometry::deg_to_rad;

double LedPanel::max_tilt_deg() const {
  if (const auto* m = std::get_if<MoveableMount>(&mobility)) return m->max_tilt_deg;
  return 0.0;
}

void LedPanel::validate() const {
  if (!(semi_angle_deg > 0.0 && semi_angle_deg < 90.0)) throw ParameterError("panel semi-angle must lie in (0, 90)");
  if (!(optical_power_w > 0.0) || !std::isfinite(optical_power_w)) {
    throw ParameterError("panel optical power must be positive");
  }
  if (!(brightness > 0.0 && brightness <= 1.0)) throw ParameterError("panel brightness must lie in (0, 1]");
  if (led_count < 1) throw ParameterError("panel led_count must be at least 1");
  if (const auto* m = std::get_if<MoveableMount>(&mobility)) {
    if (!(m->max_tilt_deg >= 0.0 && m->max_tilt_deg <= 90.0)) {
      throw ParameterError("panel max_tilt must lie in [0, 90]");
    }
  }
}

void Receiver::validate() const {
  if (!(area_m2 > 0.0) || !std::isfinite(area_m2)) throw ParameterError("receiver area must be positive");
  if (!(fov_deg > 0.0 && fov_deg <= 90.0)) throw ParameterError("receiver fov must lie in (0, 90]");
  if (!(filter_gain > 0.0 && filter_gain <= 1.0)) throw ParameterError("receiver filter_gain must lie in (0, 1]");
  if (!(concentrator_index >= 1.0) || !std::isfinite(concentrator_index)) {
    throw ParameterError("receiver concentrator_index must be >= 1");
  }
  if (!(responsivity_gain > 0.0) || !std::isfinite(responsivity_gain)) {
    throw ParameterError("receiver responsivity_gain must be positive");
  }
}

double lambertian_order(double semi_angle_deg) {
  if (!(semi_angle_deg > 0.0 && semi_angle_deg < 90.0)) {
    throw ParameterError("semi-angle must lie strictly inside (0, 90) degrees");
  }
  return -std::numbers::ln2 / std::log(std::cos(deg_to_rad(semi_angle_deg)));
}

double radiant_intensity(const LedPanel& lp, double theta_deg) {
  if (!(theta_deg < 90.0)) return 0.0;
  const double m = lambertian_order(lp.semi_angle_deg);
  return (m + 1.0) / (2.0 * std::numbers::pi) * lp.total_power_w() * std::pow(std::cos(deg_to_rad(theta_deg)), m);
}

double concentrator_gain(const Receiver& rx, double phi_deg) {
  if (phi_deg > rx.fov_deg) return 0.0;
  const double s = std::sin(deg_to_rad(rx.fov_deg));
  return rx.concentrator_index * rx.concentrator_index / (s * s);
}

double los_gain(const geometry::LinkGeometry& geom, const LedPanel& lp, const Receiver& rx) {
  if (!(geom.distance > 0.0)) throw GeometryError("link distance must be positive");
  if (geom.theta >= 90.0 || geom.phi > rx.fov_deg) return 0.0;
  const double m = lambertian_order(lp.semi_angle_deg);
  const double d2 = geom.distance * geom.distance;
  const double h = (m + 1.0) / (2.0 * std::numbers::pi * d2) * rx.area_m2 *
                   std::pow(std::cos(deg_to_rad(geom.theta)), m) * rx.filter_gain *
                   concentrator_gain(rx, geom.phi) * std::cos(deg_to_rad(geom.phi));
  return std::max(h, 0.0);
}

double received_power(const LedPanel& lp, double gain, double responsivity_gain) {
  if (!(gain >= 0.0)) throw ParameterError("channel gain must be non-negative");
  return lp.total_power_w() * gain * responsivity_gain;
}

double to_db(double linear) {
  return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

SnrReport snr(double brightness, double received_power_w, const NoiseModel& noise) {
  if (!(noise.variance > 0.0) || !std::isfinite(noise.variance)) {
    throw ParameterError("noise variance must be positive");
  }
  if (!(received_power_w >= 0.0)) throw ParameterError("received power must be non-negative");
  SnrReport r;
  r.received_power_w = received_power_w;
  r.snr_linear = brightness * brightness * received_power_w / noise.variance;
  r.snr_db = to_db(r.snr_linear);
  return r;
}

SnrReport evaluate_link(const geometry::LinkGeometry& geom, const LedPanel& lp, const Receiver& rx,
                        const NoiseModel& noise) {
  const double h = los_gain(geom, lp, rx);
  SnrReport r = snr(lp.brightness, received_power(lp, h, rx.responsivity_gain), noise);
  r.channel_gain = h;
  return r;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double ber_ook(double snr_linear) {
  if (!(snr_linear >= 0.0)) throw ParameterError("SNR must be non-negative");
  return q_function(std::sqrt(snr_linear));
}

double ook_snr_for_ber(double target_ber) {
  if (!(target_ber > 0.0 && target_ber < 0.5)) throw ParameterError("target BER must lie in (0, 0.5)");
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q_function(mid) > target_ber ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);
  return x * x;
}

namespace {

void require_primary_link(const Scenario& s) {
  if (s.panels.empty() || s.receivers.empty()) {
    throw ScenarioError("scenario needs at least one panel and one receiver");
  }
}

geometry::LinkGeometry physical_primary_link(const Scenario& s) {
  require_primary_link(s);
  const auto& lp = s.panels.front();
  const auto& rx = s.receivers.front();
  return geometry::link_geometry(lp.position, lp.normal, rx.position, rx.normal);
}

double primary_power(const Scenario& s, const geometry::LinkGeometry& geom) {
  const auto& lp = s.panels.front();
  const auto& rx = s.receivers.front();
  return received_power(lp, los_gain(geom, lp, rx), rx.responsivity_gain);
}

}  // namespace

geometry::LinkGeometry anchor_link(const Scenario& scenario, double theta_deg, double phi_deg) {
  geometry::LinkGeometry g = physical_primary_link(scenario);
  g.theta = theta_deg;
  g.phi = phi_deg;
  return g;
}

geometry::LinkGeometry primary_link_at_theta(const Scenario& scenario, double theta_deg) {
  geometry::LinkGeometry g = physical_primary_link(scenario);
  g.theta = theta_deg;
  return g;
}

NoiseModel calibrate_to_anchor(const Scenario& scenario, double anchor_theta_deg, double anchor_phi_deg,
                               double anchor_snr_db) {
  if (!std::isfinite(anchor_snr_db)) throw ParameterError("anchor SNR must be finite");
  const double p = primary_power(scenario, anchor_link(scenario, anchor_theta_deg, anchor_phi_deg));
  if (!(p > 0.0)) throw CalibrationError("anchor link has zero channel gain; cannot calibrate");
  const double gamma = scenario.panels.front().brightness;
  return NoiseModel{gamma * gamma * p / from_db(anchor_snr_db)};
}

NoiseModel calibrate_to_ber(const Scenario& scenario, double theta_deg, double phi_deg, double target_ber) {
  const double p = primary_power(scenario, anchor_link(scenario, theta_deg, phi_deg));
  if (!(p > 0.0)) throw CalibrationError("anchor link has zero channel gain; cannot calibrate");
  const double gamma = scenario.panels.front().brightness;
  return NoiseModel{gamma * gamma * p / ook_snr_for_ber(target_ber)};
}

SnrReport primary_snr_at_theta(const Scenario& scenario, double theta_deg) {
  return evaluate_link(primary_link_at_theta(scenario, theta_deg), scenario.panels.front(),
                       scenario.receivers.front(), scenario.noise);
}

std::vector<SweepRow> table3_sweep(const Scenario& scenario) {
  std::vector<SweepRow> rows;
  for (double theta : kTableThetas) {
    const SnrReport r = evaluate_link(anchor_link(scenario, theta, kTablePhiDeg), scenario.panels.front(),
                                      scenario.receivers.front(), scenario.noise);
    rows.push_back({theta, r.snr_db});
  }
  return rows;
}

}  // namespace lifisim::channel
