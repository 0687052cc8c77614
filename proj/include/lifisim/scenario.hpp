#pragma once

#include <string_view>
#include <vector>

#include "lifisim/channel.hpp"
#include "lifisim/geometry.hpp"
#include "lifisim/modem.hpp"

namespace lifisim {

enum class Strategy { FixedWide, Dedicated, Moveable, Hybrid };

std::string_view strategy_name(Strategy s);

/// The unit of simulation. The primary link used by the channel sweeps is
/// panels[0] -> receivers[0].
struct Scenario {
  geometry::Room room;
  std::vector<channel::LedPanel> panels;
  std::vector<channel::Receiver> receivers;
  channel::NoiseModel noise;
  modem::SchemeConfig scheme;
  Strategy strategy = Strategy::FixedWide;
  /// Panel serving every user under FixedWide.
  std::size_t designated_panel = 0;

  /// Throws ScenarioError on any violated invariant.
  void validate() const;
};

/// 5 x 5 x 3 m room, one moveable 60 deg panel at the ceiling center and one
/// receiver placed so the primary link has phi = 45 deg. Noise variance is
/// left at 1; callers calibrate it.
Scenario default_scenario();

}  // namespace lifisim
