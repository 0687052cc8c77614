#pragma once

#include <cmath>
#include <numbers>

namespace lifisim::geometry {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Cartesian point in meters.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Point3 operator*(double s, Point3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(const Point3&, const Point3&) = default;
};

inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Point3 a) { return std::sqrt(dot(a, a)); }
inline Point3 cross(Point3 a, Point3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Unit direction vector. Construction normalizes the input; a zero or
/// non-finite vector is rejected with GeometryError.
class Direction3 {
 public:
  Direction3() = default;
  Direction3(double x, double y, double z);
  explicit Direction3(Point3 v) : Direction3(v.x, v.y, v.z) {}

  /// Accepts only vectors whose norm is within `tolerance` of one.
  static Direction3 from_unit(Point3 v, double tolerance);

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  Point3 vec() const { return v_; }

  static Direction3 down() { return {0.0, 0.0, -1.0}; }
  static Direction3 up() { return {0.0, 0.0, 1.0}; }

  friend bool operator==(const Direction3&, const Direction3&) = default;

 private:
  Point3 v_{0.0, 0.0, -1.0};
};

struct Room {
  double width = 5.0;
  double depth = 5.0;
  double height = 3.0;
  double receiver_plane_height = 0.85;

  /// Throws ParameterError unless all dimensions are positive and the
  /// receiver plane lies inside [0, height).
  void validate() const;
  bool contains(Point3 p, double slack = 1e-9) const;
};

/// Angles of one transmitter-receiver link, in degrees.
struct LinkGeometry {
  double theta = 0.0;     ///< angle of irradiance
  double phi = 0.0;       ///< angle of incidence
  double distance = 1.0;  ///< meters
};

/// theta is measured between tx_normal and the tx->rx ray, phi between
/// rx_normal and the rx->tx ray. Throws GeometryError for coincident points.
LinkGeometry link_geometry(Point3 tx_pos, Direction3 tx_normal, Point3 rx_pos, Direction3 rx_normal);

/// Rotates `normal` by tilt_deg about the horizontal axis perpendicular to
/// azimuth_deg, so a downward normal swings toward (cos az, sin az, 0).
/// tilt_deg must lie in [0, 90].
Direction3 tilt_panel(Direction3 normal, double tilt_deg, double azimuth_deg);

/// Angle in degrees between two directions, clamped against rounding.
double angle_between(Point3 a, Point3 b);

}  // namespace lifisim::geometry
