#include "lifisim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "lifisim/channel.hpp"
#include "lifisim/format.hpp"
#include "lifisim/linksim.hpp"
#include "lifisim/planner.hpp"
#include "lifisim/scenario_io.hpp"

namespace lifisim::cli {

namespace {

using format::shortest;
using format::sig6;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw UsageError(flag + ": '" + item + "' is not a finite number");
    values.push_back(v);
  }
  return values;
}

io::Anchor parse_anchor(const std::string& text) {
  const auto v = parse_list(text, "--calibrate-anchor");
  if (v.size() != 3) throw UsageError("--calibrate-anchor expects theta,phi,dB");
  return {v[0], v[1], v[2]};
}

// An explicit --calibrate-anchor replaces whatever noise the file specifies.
Scenario load_calibrated(const std::string& path, const std::string& anchor_flag) {
  io::ScenarioFile file = io::load_scenario(path);
  if (!anchor_flag.empty()) {
    const io::Anchor a = parse_anchor(anchor_flag);
    file.scenario.noise = channel::calibrate_to_anchor(file.scenario, a.theta_deg, a.phi_deg, a.snr_db);
  }
  return file.scenario;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io::IoError("cannot write " + path);
  return f;
}

int cmd_snr(const std::string& scenario_path, double theta, const std::string& anchor, std::ostream& out) {
  const Scenario s = load_calibrated(scenario_path, anchor);
  const auto geom = channel::primary_link_at_theta(s, theta);
  const auto r = channel::primary_snr_at_theta(s, theta);
  out << "theta_deg=" << shortest(theta) << "\n";
  out << "phi_deg=" << sig6(geom.phi) << "\n";
  out << "distance_m=" << sig6(geom.distance) << "\n";
  if (r.channel_gain > 0.0) {
    out << "gain=" << sig6(r.channel_gain) << "\n";
    out << "p_rec_w=" << sig6(r.received_power_w) << "\n";
    out << "snr_linear=" << sig6(r.snr_linear) << "\n";
    out << "snr_db=" << sig6(r.snr_db) << "\n";
  } else {
    out << "p_rec_w=0\n";
    out << "snr_linear=0\n";
    out << "snr_db=NONE gain=0\n";
  }
  return kExitOk;
}

int cmd_table3(const std::string& scenario_path, const std::string& anchor, std::ostream& out) {
  const Scenario s = load_calibrated(scenario_path, anchor);
  out << "theta_deg,snr_db\n";
  for (const auto& row : channel::table3_sweep(s)) out << shortest(row.theta_deg) << "," << sig6(row.snr_db) << "\n";
  return kExitOk;
}

int cmd_ber(const std::string& scheme_name, const std::string& snr_list, std::size_t bits, std::uint64_t seed,
            std::optional<double> dimming, unsigned threads, std::ostream& out) {
  modem::SchemeConfig cfg = io::parse_scheme_name(scheme_name);
  if (dimming) {
    std::visit(
        [&](auto& s) {
          if constexpr (requires { s.dimming; }) {
            s.dimming = *dimming;
          } else {
            throw UsageError("--dimming is not supported by scheme " + scheme_name);
          }
        },
        cfg.scheme);
    modem::validate(cfg);
  }
  const auto points = parse_list(snr_list, "--snr-db");
  const auto rows = linksim::ber_sweep(cfg, points, bits, seed, threads);
  out << "snr_db,ber,ci95\n";
  for (const auto& [snr, est] : rows) out << shortest(snr) << "," << sig6(est.ber) << "," << sig6(est.ci95_halfwidth) << "\n";
  return kExitOk;
}

void write_pgm(std::ostream& f, const planner::CoverageGrid& g, std::optional<double> threshold_db) {
  double max_db = 0.0;
  for (const auto& v : g.values) {
    if (std::isfinite(v.snr_db)) max_db = std::max(max_db, v.snr_db);
  }
  f << "P5\n" << g.nx << " " << g.ny << "\n255\n";
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double db = g.at(i, j).snr_db;
      unsigned char px = 0;
      const bool covered = std::isfinite(db) && db > 0.0 && (!threshold_db || db >= *threshold_db);
      if (covered && max_db > 0.0) px = static_cast<unsigned char>(std::lround(std::clamp(db / max_db, 0.0, 1.0) * 255.0));
      f.put(static_cast<char>(px));
    }
  }
}

int cmd_coverage(const std::string& scenario_path, double resolution, const std::string& csv_path,
                 const std::string& pgm_path, std::optional<double> threshold_db, std::ostream& out) {
  const Scenario s = io::load_scenario(scenario_path).scenario;
  const planner::CoverageGrid g = planner::coverage_grid(s, resolution);
  {
    std::ofstream f = open_output(csv_path);
    f << "x,y,snr_db,ber,serving_panel\n";
    for (std::size_t j = 0; j < g.ny; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t c = g.index(i, j);
        f << sig6(g.x(i)) << "," << sig6(g.y(j)) << "," << sig6(g.values[c].snr_db) << "," << sig6(g.ber[c]) << ","
          << g.serving_panel[c] << "\n";
      }
    }
    if (!f) throw io::IoError("failed writing " + csv_path);
  }
  if (!pgm_path.empty()) {
    std::ofstream f = open_output(pgm_path);
    write_pgm(f, g, threshold_db);
    if (!f) throw io::IoError("failed writing " + pgm_path);
  }
  out << "cells=" << g.nx << "x" << g.ny << "\n";
  if (threshold_db) out << "overlap_cells=" << planner::overlap_report(s, *threshold_db, resolution) << "\n";
  return kExitOk;
}

int cmd_plan(const std::string& scenario_path, double tilt_step, std::optional<double> threshold_db, std::ostream& out) {
  const Scenario s = io::load_scenario(scenario_path).scenario;
  const planner::PlanReport rep = planner::optimize_tilts(s, tilt_step, threshold_db);
  out << "strategy=" << strategy_name(s.strategy) << "\n";
  for (std::size_t r = 0; r < rep.assignment.size(); ++r) {
    out << "receiver=" << r << " panel=" << rep.assignment[r] << "\n";
  }
  for (std::size_t p = 0; p < rep.tilts.size(); ++p) {
    out << "panel=" << p << " tilt=" << format::min_decimals(rep.tilts[p].tilt_deg)
        << " azimuth=" << format::min_decimals(rep.tilts[p].azimuth_deg) << "\n";
  }
  out << "min_user_snr_db=" << sig6(rep.min_user_snr_db) << "\n";
  for (std::size_t r = 0; r < rep.per_user_ber.size(); ++r) {
    out << "user=" << r << " snr_db=" << sig6(rep.per_user_snr_db[r]) << " ber=" << sig6(rep.per_user_ber[r]) << "\n";
  }
  if (threshold_db) out << "overlap_cells=" << rep.overlap_cells << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Indoor Li-Fi link simulator", "lifisim"};
  app.require_subcommand(1);

  std::string scenario, anchor, scheme, snr_list, csv, pgm;
  double theta = 0.0, resolution = 0.1, tilt_step = 1.0;
  std::size_t bits = 1000000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::optional<double> threshold, dimming;

  auto* snr = app.add_subcommand("snr", "SNR of the primary link at an irradiance angle");
  snr->add_option("--scenario", scenario, "Scenario JSON")->required();
  snr->add_option("--theta", theta, "Angle of irradiance (deg)")->required();
  snr->add_option("--calibrate-anchor", anchor, "Override anchor as theta,phi,dB");

  auto* table = app.add_subcommand("table3", "SNR over theta in {65, 68, 70, 75, 78} at phi = 45");
  table->add_option("--scenario", scenario, "Scenario JSON")->required();
  table->add_option("--calibrate-anchor", anchor, "Override anchor as theta,phi,dB");

  auto* ber = app.add_subcommand("ber", "Monte Carlo BER sweep");
  ber->add_option("--scheme", scheme, std::string("One of: ") + std::string(io::kSchemeNames))->required();
  ber->add_option("--snr-db", snr_list, "Comma-separated SNR points (dB)")->required();
  ber->add_option("--bits", bits, "Bits per point")->capture_default_str();
  ber->add_option("--seed", seed, "Master seed")->capture_default_str();
  ber->add_option("--dimming", dimming, "Dimming level for ook, pwm, vppm");
  ber->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  auto* cov = app.add_subcommand("coverage", "Receiver-plane SNR/BER grid");
  cov->add_option("--scenario", scenario, "Scenario JSON")->required();
  cov->add_option("--resolution", resolution, "Cell size (m)")->capture_default_str();
  cov->add_option("--out", csv, "CSV output path")->required();
  cov->add_option("--heatmap", pgm, "Binary PGM output path");
  cov->add_option("--threshold-db", threshold, "Coverage threshold for overlap counting");

  auto* plan = app.add_subcommand("plan", "Optimize moveable panel tilts");
  plan->add_option("--scenario", scenario, "Scenario JSON")->required();
  plan->add_option("--tilt-step", tilt_step, "Grid step for tilt and azimuth (deg)")->capture_default_str();
  plan->add_option("--threshold-db", threshold, "Report overlap cells at this SNR threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "lifisim: " << e.what() << "\n";
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*snr) return cmd_snr(scenario, theta, anchor, out);
    if (*table) return cmd_table3(scenario, anchor, out);
    if (*ber) return cmd_ber(scheme, snr_list, bits, seed, dimming, threads, out);
    if (*cov) return cmd_coverage(scenario, resolution, csv, pgm, threshold, out);
    if (*plan) return cmd_plan(scenario, tilt_step, threshold, out);
  } catch (const io::IoError& e) {
    err << "lifisim: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "lifisim: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace lifisim::cli
