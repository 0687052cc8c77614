#include "lifisim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "lifisim/error.hpp"

namespace lifisim::planner {

namespace {

bool better(double candidate, double incumbent) {
  return candidate > incumbent + 1e-12 * std::abs(incumbent);
}

void check_resolution(double resolution) {
  if (!(resolution > 0.01 && resolution <= 1.0)) {
    throw ParameterError("grid resolution must lie in (0.01, 1] m");
  }
}

std::size_t cells_along(double extent, double resolution) {
  return static_cast<std::size_t>(std::ceil(extent / resolution - 1e-9));
}

// snr[r][p]: linear SNR of panel p at receiver r with current orientations.
std::vector<std::vector<double>> snr_matrix(const Scenario& s) {
  std::vector<std::vector<double>> m(s.receivers.size(), std::vector<double>(s.panels.size()));
  for (std::size_t r = 0; r < s.receivers.size(); ++r) {
    for (std::size_t p = 0; p < s.panels.size(); ++p) {
      m[r][p] = panel_snr(s, s.panels[p], s.receivers[r]).snr_linear;
    }
  }
  return m;
}

std::vector<std::size_t> exhaustive_matching(const std::vector<std::vector<double>>& snr, std::size_t panels) {
  const std::size_t users = snr.size();
  std::vector<std::size_t> current(users), best(users);
  std::vector<bool> used(panels, false);
  double best_min = -1.0, best_sum = -1.0;
  std::function<void(std::size_t, double, double)> recurse = [&](std::size_t u, double mn, double sum) {
    if (u == users) {
      if (better(mn, best_min) || (!better(best_min, mn) && better(sum, best_sum))) {
        best_min = mn;
        best_sum = sum;
        best = current;
      }
      return;
    }
    for (std::size_t p = 0; p < panels; ++p) {
      if (used[p]) continue;
      used[p] = true;
      current[u] = p;
      recurse(u + 1, std::min(mn, snr[u][p]), sum + snr[u][p]);
      used[p] = false;
    }
  };
  recurse(0, std::numeric_limits<double>::infinity(), 0.0);
  return best;
}

// Weakest users choose first, each taking its best remaining panel.
std::vector<std::size_t> greedy_matching(const std::vector<std::vector<double>>& snr, std::size_t panels) {
  const std::size_t users = snr.size();
  std::vector<std::size_t> order(users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *std::max_element(snr[a].begin(), snr[a].end()) < *std::max_element(snr[b].begin(), snr[b].end());
  });
  std::vector<bool> used(panels, false);
  std::vector<std::size_t> out(users);
  for (std::size_t u : order) {
    std::size_t pick = panels;
    for (std::size_t p = 0; p < panels; ++p) {
      if (!used[p] && (pick == panels || snr[u][p] > snr[u][pick])) pick = p;
    }
    used[pick] = true;
    out[u] = pick;
  }
  return out;
}

std::vector<std::size_t> best_panel_each(const std::vector<std::vector<double>>& snr) {
  std::vector<std::size_t> out;
  for (const auto& row : snr) {
    out.push_back(static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return out;
}

std::vector<std::size_t> one_to_one(const Scenario& s) {
  if (s.panels.size() < s.receivers.size()) {
    throw InfeasibleError("dedicated assignment needs at least as many panels as receivers");
  }
  const auto snr = snr_matrix(s);
  return s.receivers.size() <= 6 ? exhaustive_matching(snr, s.panels.size())
                                 : greedy_matching(snr, s.panels.size());
}

}  // namespace

double CoverageGrid::x(std::size_t i) const { return (static_cast<double>(i) + 0.5) * width / static_cast<double>(nx); }

double CoverageGrid::y(std::size_t j) const { return (static_cast<double>(j) + 0.5) * depth / static_cast<double>(ny); }

channel::Receiver probe_receiver(const Scenario& scenario, double x, double y) {
  channel::Receiver rx = scenario.receivers.empty() ? channel::Receiver{} : scenario.receivers.front();
  rx.position = {x, y, scenario.room.receiver_plane_height};
  rx.normal = geometry::Direction3::up();
  return rx;
}

channel::SnrReport panel_snr(const Scenario& scenario, const channel::LedPanel& panel,
                             const channel::Receiver& rx) {
  const auto geom = geometry::link_geometry(panel.position, panel.normal, rx.position, rx.normal);
  return channel::evaluate_link(geom, panel, rx, scenario.noise);
}

CoverageGrid coverage_grid(const Scenario& scenario, double resolution) {
  check_resolution(resolution);
  CoverageGrid g;
  g.resolution = resolution;
  g.width = scenario.room.width;
  g.depth = scenario.room.depth;
  g.nx = cells_along(g.width, resolution);
  g.ny = cells_along(g.depth, resolution);
  g.plane_height = scenario.room.receiver_plane_height;
  g.ber_analytic = std::holds_alternative<modem::Ook>(scenario.scheme.scheme);
  const std::size_t cells = g.nx * g.ny;
  g.values.resize(cells);
  g.ber.resize(cells);
  g.serving_panel.assign(cells, -1);
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t c = g.index(i, j);
      const channel::Receiver rx = probe_receiver(scenario, g.x(i), g.y(j));
      for (std::size_t p = 0; p < scenario.panels.size(); ++p) {
        const channel::SnrReport r = panel_snr(scenario, scenario.panels[p], rx);
        if (r.snr_linear > g.values[c].snr_linear) {
          g.values[c] = r;
          g.serving_panel[c] = static_cast<int>(p);
        }
      }
      if (g.serving_panel[c] < 0) {
        g.values[c].snr_db = -std::numeric_limits<double>::infinity();
        g.ber[c] = 0.5;
      } else {
        g.ber[c] = g.ber_analytic ? channel::ber_ook(g.values[c].snr_linear)
                                  : std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return g;
}

std::vector<std::size_t> assign_users(const Scenario& scenario) {
  switch (scenario.strategy) {
    case Strategy::FixedWide:
      if (scenario.designated_panel >= scenario.panels.size()) {
        throw ScenarioError("designated_panel index out of range");
      }
      return std::vector<std::size_t>(scenario.receivers.size(), scenario.designated_panel);
    case Strategy::Dedicated:
      return one_to_one(scenario);
    case Strategy::Moveable:
    case Strategy::Hybrid:
      if (scenario.panels.size() >= scenario.receivers.size()) return one_to_one(scenario);
      return best_panel_each(snr_matrix(scenario));
  }
  throw ScenarioError("unknown strategy");
}

double min_user_snr(const Scenario& scenario, const std::vector<std::size_t>& assignment) {
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < scenario.receivers.size(); ++r) {
    mn = std::min(mn, panel_snr(scenario, scenario.panels.at(assignment.at(r)), scenario.receivers[r]).snr_linear);
  }
  return mn;
}

Scenario apply_aims(const Scenario& scenario, const std::vector<PanelAim>& aims) {
  if (aims.size() != scenario.panels.size()) throw ParameterError("one aim per panel required");
  Scenario out = scenario;
  for (std::size_t p = 0; p < aims.size(); ++p) {
    out.panels[p].normal = geometry::tilt_panel(scenario.panels[p].normal, aims[p].tilt_deg, aims[p].azimuth_deg);
  }
  return out;
}

PlanReport evaluate_plan(const Scenario& scenario, std::vector<std::size_t> assignment, std::vector<PanelAim> aims) {
  const Scenario aimed = apply_aims(scenario, aims);
  PlanReport rep;
  rep.assignment = std::move(assignment);
  rep.tilts = std::move(aims);
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < aimed.receivers.size(); ++r) {
    const auto rpt = panel_snr(aimed, aimed.panels.at(rep.assignment.at(r)), aimed.receivers[r]);
    rep.per_user_snr_db.push_back(rpt.snr_db);
    rep.per_user_ber.push_back(channel::ber_ook(rpt.snr_linear));
    mn = std::min(mn, rpt.snr_linear);
  }
  rep.min_user_snr_db = aimed.receivers.empty() ? 0.0 : channel::to_db(mn);
  return rep;
}

PlanReport frozen_plan(const Scenario& scenario) {
  return evaluate_plan(scenario, assign_users(scenario), std::vector<PanelAim>(scenario.panels.size()));
}

PlanReport optimize_tilts(const Scenario& scenario, double tilt_step_deg, std::optional<double> overlap_threshold_db,
                          double overlap_resolution) {
  if (scenario.strategy != Strategy::Moveable && scenario.strategy != Strategy::Hybrid) {
    throw ScenarioError("tilt optimization needs a moveable or hybrid strategy");
  }
  if (!(tilt_step_deg >= 0.5 && tilt_step_deg <= 5.0)) throw ParameterError("tilt_step must lie in [0.5, 5] deg");
  const bool any_moveable =
      std::any_of(scenario.panels.begin(), scenario.panels.end(), [](const auto& p) { return p.moveable(); });
  if (scenario.strategy == Strategy::Moveable && !any_moveable) {
    throw ScenarioError("moveable strategy without any moveable panel");
  }

  const std::vector<std::size_t> assignment = assign_users(scenario);
  std::vector<PanelAim> aims(scenario.panels.size());
  const auto azimuth_steps = static_cast<int>(std::ceil(360.0 / tilt_step_deg - 1e-9));

  for (std::size_t p = 0; p < scenario.panels.size(); ++p) {
    const channel::LedPanel& base = scenario.panels[p];
    std::vector<const channel::Receiver*> users;
    for (std::size_t r = 0; r < assignment.size(); ++r) {
      if (assignment[r] == p) users.push_back(&scenario.receivers[r]);
    }
    if (!base.moveable() || users.empty()) continue;

    channel::LedPanel trial = base;
    auto objective = [&](double tilt, double az) {
      trial.normal = geometry::tilt_panel(base.normal, tilt, az);
      double mn = std::numeric_limits<double>::infinity();
      for (const auto* rx : users) mn = std::min(mn, panel_snr(scenario, trial, *rx).snr_linear);
      return mn;
    };

    PanelAim best{};
    double best_value = objective(0.0, 0.0);
    const auto tilt_steps = static_cast<int>(std::floor(base.max_tilt_deg() / tilt_step_deg + 1e-9));
    for (int ti = 1; ti <= tilt_steps; ++ti) {
      const double tilt = ti * tilt_step_deg;
      for (int ai = 0; ai < azimuth_steps; ++ai) {
        const double az = ai * tilt_step_deg;
        const double v = objective(tilt, az);
        if (better(v, best_value)) {
          best_value = v;
          best = {tilt, az};
        }
      }
    }
    aims[p] = best;
  }

  PlanReport rep = evaluate_plan(scenario, assignment, aims);
  if (overlap_threshold_db) {
    rep.overlap_cells = overlap_report(apply_aims(scenario, rep.tilts), *overlap_threshold_db, overlap_resolution);
  }
  return rep;
}

std::size_t overlap_report(const Scenario& scenario, double snr_threshold_db, double resolution) {
  check_resolution(resolution);
  const std::size_t nx = cells_along(scenario.room.width, resolution);
  const std::size_t ny = cells_along(scenario.room.depth, resolution);
  std::size_t overlap = 0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = (static_cast<double>(i) + 0.5) * scenario.room.width / static_cast<double>(nx);
      const double y = (static_cast<double>(j) + 0.5) * scenario.room.depth / static_cast<double>(ny);
      const channel::Receiver rx = probe_receiver(scenario, x, y);
      int covering = 0;
      for (const auto& panel : scenario.panels) {
        if (panel_snr(scenario, panel, rx).snr_db > snr_threshold_db) ++covering;
      }
      if (covering >= 2) ++overlap;
    }
  }
  return overlap;
}

}  // namespace lifisim::planner
