#include "lifisim/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "lifisim/error.hpp"

namespace lifisim::geometry {

namespace {

bool finite(Point3 p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

}  // namespace

Direction3::Direction3(double x, double y, double z) {
  const Point3 v{x, y, z};
  const double n = norm(v);
  if (!finite(v) || !(n > 0.0)) {
    throw GeometryError("direction vector must be finite and non-zero");
  }
  v_ = (1.0 / n) * v;
}

Direction3 Direction3::from_unit(Point3 v, double tolerance) {
  const double n = norm(v);
  if (!finite(v) || std::abs(n - 1.0) > tolerance) {
    std::ostringstream os;
    os << "direction (" << v.x << ", " << v.y << ", " << v.z << ") has norm " << n
       << ", expected 1 within " << tolerance;
    throw GeometryError(os.str());
  }
  return Direction3(v);
}

void Room::validate() const {
  if (!(width > 0.0) || !(depth > 0.0) || !(height > 0.0)) {
    throw ParameterError("room dimensions must be positive");
  }
  if (!(receiver_plane_height >= 0.0) || !(receiver_plane_height < height)) {
    throw ParameterError("receiver_plane_height must lie in [0, height)");
  }
}

bool Room::contains(Point3 p, double slack) const {
  return p.x >= -slack && p.x <= width + slack && p.y >= -slack && p.y <= depth + slack &&
         p.z >= -slack && p.z <= height + slack;
}

double angle_between(Point3 a, Point3 b) {
  const double c = dot(a, b) / (norm(a) * norm(b));
  return rad_to_deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

LinkGeometry link_geometry(Point3 tx_pos, Direction3 tx_normal, Point3 rx_pos, Direction3 rx_normal) {
  if (!finite(tx_pos) || !finite(rx_pos)) {
    throw GeometryError("link endpoints must be finite");
  }
  const Point3 ray = rx_pos - tx_pos;
  const double distance = norm(ray);
  if (!(distance > 0.0)) {
    throw GeometryError("transmitter and receiver positions coincide");
  }
  return {angle_between(tx_normal.vec(), ray), angle_between(rx_normal.vec(), -1.0 * ray), distance};
}

Direction3 tilt_panel(Direction3 normal, double tilt_deg, double azimuth_deg) {
  if (!(tilt_deg >= 0.0 && tilt_deg <= 90.0)) {
    throw ParameterError("tilt must lie in [0, 90] degrees");
  }
  const double t = deg_to_rad(tilt_deg);
  const double a = deg_to_rad(azimuth_deg);
  // Rodrigues rotation about k = (sin a, -cos a, 0).
  const Point3 k{std::sin(a), -std::cos(a), 0.0};
  const Point3 v = normal.vec();
  const Point3 r = std::cos(t) * v + std::sin(t) * cross(k, v) + (dot(k, v) * (1.0 - std::cos(t))) * k;
  return Direction3(r);
}

}  // namespace lifisim::geometry
