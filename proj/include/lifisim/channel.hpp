#pragma once

#include <variant>
#include <vector>

#include "lifisim/geometry.hpp"

namespace lifisim {

struct Scenario;

namespace channel {

struct FixedMount {};
struct MoveableMount {
  double max_tilt_deg = 60.0;
};
using Mobility = std::variant<FixedMount, MoveableMount>;

struct LedPanel {
  geometry::Point3 position;
  geometry::Direction3 normal = geometry::Direction3::down();
  double semi_angle_deg = 60.0;  ///< half-power semi-angle
  double optical_power_w = 1.0;  ///< per LED
  double brightness = 1.0;       ///< gamma in (0, 1]
  Mobility mobility = FixedMount{};
  int led_count = 1;

  bool moveable() const { return std::holds_alternative<MoveableMount>(mobility); }
  double max_tilt_deg() const;
  /// Aggregate transmit power of all LEDs in the panel.
  double total_power_w() const { return optical_power_w * led_count; }
  void validate() const;
};

enum class DetectorKind { Pin, Apd };

struct Receiver {
  geometry::Point3 position;
  geometry::Direction3 normal = geometry::Direction3::up();
  double area_m2 = 1e-4;
  double fov_deg = 60.0;
  double filter_gain = 1.0;         ///< optical filter transmission T_s
  double concentrator_index = 1.5;  ///< refractive index n of the concentrator
  DetectorKind detector = DetectorKind::Pin;
  /// Multiplies received power; carries the detector's responsivity advantage.
  double responsivity_gain = 1.0;

  void validate() const;
};

struct NoiseModel {
  double variance = 1.0;  ///< total noise variance, same units as gamma^2 * P_rec
};

struct SnrReport {
  double snr_linear = 0.0;
  double snr_db = 0.0;  ///< -infinity when snr_linear == 0
  double received_power_w = 0.0;
  double channel_gain = 0.0;
};

/// m = -ln 2 / ln cos(semi_angle). Requires semi_angle in (0, 90) degrees.
double lambertian_order(double semi_angle_deg);

/// Radiant intensity (W/sr) of a Lambertian panel at irradiance angle theta.
double radiant_intensity(const LedPanel& lp, double theta_deg);

/// Concentrator gain n^2 / sin^2(fov) inside the field of view, 0 outside.
double concentrator_gain(const Receiver& rx, double phi_deg);

/// Line-of-sight DC gain H. Zero outside the receiver FOV or behind the panel.
double los_gain(const geometry::LinkGeometry& geom, const LedPanel& lp, const Receiver& rx);

/// P_rec = total transmit power * H * detector responsivity gain.
double received_power(const LedPanel& lp, double gain, double responsivity_gain = 1.0);

/// SNR = gamma^2 * P_rec / sigma^2_total, linear in P_rec.
SnrReport snr(double brightness, double received_power_w, const NoiseModel& noise);

/// Full link evaluation: geometry -> gain -> power -> SNR.
SnrReport evaluate_link(const geometry::LinkGeometry& geom, const LedPanel& lp, const Receiver& rx,
                        const NoiseModel& noise);

/// Gaussian tail probability Q(x).
double q_function(double x);

/// OOK bit error rate Q(sqrt(snr)).
double ber_ook(double snr_linear);

/// Smallest linear SNR at which ber_ook reaches `target_ber` (bisection).
double ook_snr_for_ber(double target_ber);

double to_db(double linear);
double from_db(double db);

// Scenario-level operations act on the primary link: panels[0] -> receivers[0].

/// Geometry of the primary link with theta and phi overridden and the
/// distance held at the physical value.
geometry::LinkGeometry anchor_link(const Scenario& scenario, double theta_deg, double phi_deg);

/// Primary link with only theta overridden; phi and distance from positions.
geometry::LinkGeometry primary_link_at_theta(const Scenario& scenario, double theta_deg);

/// Noise variance that makes the anchor link reach anchor_snr_db exactly.
/// Throws CalibrationError when the anchor link has zero gain.
NoiseModel calibrate_to_anchor(const Scenario& scenario, double anchor_theta_deg, double anchor_phi_deg,
                               double anchor_snr_db);

/// Noise variance placing the primary link at theta exactly on the OOK
/// target BER.
NoiseModel calibrate_to_ber(const Scenario& scenario, double theta_deg, double phi_deg,
                            double target_ber);

/// SNR of the primary link at an overridden irradiance angle.
SnrReport primary_snr_at_theta(const Scenario& scenario, double theta_deg);

struct SweepRow {
  double theta_deg;
  double snr_db;
};

inline constexpr double kTableThetas[] = {65.0, 68.0, 70.0, 75.0, 78.0};
inline constexpr double kTablePhiDeg = 45.0;

/// SNR over the five tabulated irradiance angles at phi = 45 deg and the
/// primary link's distance.
std::vector<SweepRow> table3_sweep(const Scenario& scenario);

}  // namespace channel
}  // namespace lifisim
