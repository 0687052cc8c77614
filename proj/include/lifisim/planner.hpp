#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lifisim/channel.hpp"
#include "lifisim/scenario.hpp"

namespace lifisim::planner {

/// Receiver-plane lattice. Cell (i, j) is centred at
/// ((i + 0.5) * width / nx, (j + 0.5) * depth / ny), nx = ceil(width / resolution).
struct CoverageGrid {
  double resolution = 0.1;
  std::size_t nx = 0;
  std::size_t ny = 0;
  double width = 0.0;
  double depth = 0.0;
  double plane_height = 0.0;
  std::vector<channel::SnrReport> values;  ///< row-major, index j * nx + i
  std::vector<double> ber;                 ///< NaN where no analytic map exists
  std::vector<int> serving_panel;          ///< -1 where no panel reaches the cell
  bool ber_analytic = false;

  double x(std::size_t i) const;
  double y(std::size_t j) const;
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  const channel::SnrReport& at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
};

struct PanelAim {
  double tilt_deg = 0.0;
  double azimuth_deg = 0.0;
};

struct PlanReport {
  std::vector<std::size_t> assignment;  ///< receiver index -> panel index
  std::vector<PanelAim> tilts;          ///< one per panel
  std::vector<double> per_user_snr_db;
  std::vector<double> per_user_ber;
  double min_user_snr_db = 0.0;
  std::size_t overlap_cells = 0;
};

/// Receiver used to probe grid cells: the first scenario receiver's optics,
/// facing up, on the receiver plane.
channel::Receiver probe_receiver(const Scenario& scenario, double x, double y);

/// SNR of one panel (optionally re-aimed) at one receiver.
channel::SnrReport panel_snr(const Scenario& scenario, const channel::LedPanel& panel,
                             const channel::Receiver& rx);

/// Best-panel SNR per cell. Resolution must lie in (0.01, 1] m.
CoverageGrid coverage_grid(const Scenario& scenario, double resolution);

/// Receiver -> panel mapping for the scenario's strategy. Dedicated uses an
/// exhaustive max-min search up to six receivers and a greedy pass beyond.
std::vector<std::size_t> assign_users(const Scenario& scenario);

/// Minimum linear SNR over receivers for a given mapping.
double min_user_snr(const Scenario& scenario, const std::vector<std::size_t>& assignment);

/// Copy of the scenario with each panel normal rotated by its aim.
Scenario apply_aims(const Scenario& scenario, const std::vector<PanelAim>& aims);

/// Per-user evaluation of a fixed mapping and aims.
PlanReport evaluate_plan(const Scenario& scenario, std::vector<std::size_t> assignment,
                         std::vector<PanelAim> aims);

/// Plan with every panel left at its configured orientation.
PlanReport frozen_plan(const Scenario& scenario);

/// Grid search over tilt and azimuth for every moveable panel, maximizing
/// the minimum SNR of the users assigned to it. Requires a Moveable or
/// Hybrid strategy and tilt_step in [0.5, 5] deg. When overlap_threshold_db
/// is given, overlap_cells is counted on the re-aimed scenario.
PlanReport optimize_tilts(const Scenario& scenario, double tilt_step_deg,
                          std::optional<double> overlap_threshold_db = std::nullopt,
                          double overlap_resolution = 0.1);

/// Cells where at least two panels individually exceed snr_threshold_db.
std::size_t overlap_report(const Scenario& scenario, double snr_threshold_db, double resolution = 0.1);

}  // namespace lifisim::planner
