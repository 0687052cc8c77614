#include "lifisim/scenario.hpp"

#include <sstream>

#include "lifisim/error.hpp"

namespace lifisim {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::FixedWide: return "fixed_wide";
    case Strategy::Dedicated: return "dedicated";
    case Strategy::Moveable: return "moveable";
    case Strategy::Hybrid: return "hybrid";
  }
  return "unknown";
}

void Scenario::validate() const {
  auto fail = [](const std::string& what, std::size_t i, const std::exception& e) {
    std::ostringstream os;
    os << what << "[" << i << "]: " << e.what();
    throw ScenarioError(os.str());
  };
  try {
    room.validate();
  } catch (const Error& e) {
    throw ScenarioError(std::string("room: ") + e.what());
  }
  if (panels.empty()) throw ScenarioError("scenario needs at least one panel");
  for (std::size_t i = 0; i < panels.size(); ++i) {
    try {
      panels[i].validate();
    } catch (const Error& e) {
      fail("panels", i, e);
    }
    if (!room.contains(panels[i].position)) {
      std::ostringstream os;
      os << "panels[" << i << "].position lies outside the room";
      throw ScenarioError(os.str());
    }
  }
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    try {
      receivers[i].validate();
    } catch (const Error& e) {
      fail("receivers", i, e);
    }
    if (!room.contains(receivers[i].position)) {
      std::ostringstream os;
      os << "receivers[" << i << "].position lies outside the room";
      throw ScenarioError(os.str());
    }
  }
  if (!(noise.variance > 0.0)) throw ScenarioError("noise.variance must be positive");
  try {
    modem::validate(scheme);
  } catch (const Error& e) {
    throw ScenarioError(std::string("scheme: ") + e.what());
  }
  if (strategy == Strategy::Dedicated && panels.size() < receivers.size()) {
    throw ScenarioError("dedicated strategy needs at least as many panels as receivers");
  }
  if (designated_panel >= panels.size()) throw ScenarioError("designated_panel index out of range");
}

Scenario default_scenario() {
  Scenario s;
  s.room = geometry::Room{5.0, 5.0, 3.0, 0.85};
  channel::LedPanel lp;
  lp.position = {2.5, 2.5, 3.0};
  lp.normal = geometry::Direction3::down();
  lp.semi_angle_deg = 60.0;
  lp.optical_power_w = 1.0;
  lp.brightness = 1.0;
  lp.mobility = channel::MoveableMount{60.0};
  s.panels.push_back(lp);

  // Horizontal offset equal to the vertical drop gives phi = 45 deg.
  channel::Receiver rx;
  rx.position = {2.5 + (3.0 - 0.85), 2.5, 0.85};
  rx.normal = geometry::Direction3::up();
  rx.area_m2 = 1e-4;
  rx.fov_deg = 60.0;
  rx.filter_gain = 1.0;
  rx.concentrator_index = 1.5;
  s.receivers.push_back(rx);

  s.noise = channel::NoiseModel{1.0};
  s.scheme = modem::SchemeConfig{modem::Ook{0.5}};
  s.strategy = Strategy::Moveable;
  return s;
}

}  // namespace lifisim
