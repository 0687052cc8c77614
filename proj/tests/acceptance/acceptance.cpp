// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lifisim/channel.hpp"
#include "lifisim/cli.hpp"
#include "lifisim/linksim.hpp"
#include "lifisim/modem.hpp"
#include "lifisim/planner.hpp"
#include "lifisim/scenario_io.hpp"
#include "oracles.hpp"
#include "schemes.hpp"

using namespace lifisim;

namespace {

const std::string kDefault = LIFISIM_SOURCE_DIR "/scenarios/default.json";
const std::string kHybrid = LIFISIM_SOURCE_DIR "/scenarios/hybrid_two_user.json";

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string run_cli(std::vector<std::string> args, int& rc) {
  args.insert(args.begin(), "lifisim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

Outcome table3_anchor_and_trend() {
  Outcome o;
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"table3", "--scenario", kDefault},
        std::vector<std::string>{"table3", "--scenario", kDefault, "--calibrate-anchor", "65,45,128"}}) {
    int rc = 0;
    const std::string out = run_cli(args, rc);
    o.require(rc == 0, "table3 exited with " + std::to_string(rc));
    std::istringstream in(out);
    std::string line;
    std::getline(in, line);
    o.require(line == "theta_deg,snr_db", "bad header: " + line);
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    o.require(rows.size() == 5, "expected five rows");
    if (rows.empty()) return o;
    o.require(rows[0] == "65,128.000", "first row is " + rows[0]);
    double prev = INFINITY;
    for (const auto& r : rows) {
      const double v = std::stod(r.substr(r.find(',') + 1));
      o.require(v < prev, "printed SNR not strictly decreasing at " + r);
      prev = v;
    }
  }
  Scenario s = default_scenario();
  s.noise = channel::calibrate_to_anchor(s, 65.0, 45.0, 128.0);
  const auto rows = channel::table3_sweep(s);
  o.require(std::abs(rows[0].snr_db - 128.0) < 1e-9, fmt("anchor row %.12f dB", rows[0].snr_db));
  for (std::size_t i = 1; i < rows.size(); ++i) o.require(rows[i].snr_db < rows[i - 1].snr_db, "sweep not decreasing");
  o.detail = o.ok ? fmt("65 deg -> %.6f dB, 78 deg -> %.6f dB", rows.front().snr_db, rows.back().snr_db) : o.detail;
  return o;
}

Outcome ber_threshold_at_70() {
  Outcome o;
  Scenario s = default_scenario();
  s.noise = channel::calibrate_to_ber(s, 70.0, channel::kTablePhiDeg, 1e-5);
  const double target = oracle::q_inverse(1e-5);
  const auto at70 = channel::primary_snr_at_theta(s, 70.0);
  o.require(std::abs(at70.snr_linear - target * target) < 1e-9 * target * target,
            fmt("SNR at 70 deg is %.12f, expected %.12f", at70.snr_linear, target * target));
  std::string detail;
  for (double t : {65.0, 68.0, 75.0, 78.0}) {
    const double ber = channel::ber_ook(channel::primary_snr_at_theta(s, t).snr_linear);
    if (t < 70.0) {
      o.require(ber <= 1e-5, fmt("theta %.0f gives BER %.3e", t, ber));
    } else {
      o.require(ber > 1e-5, fmt("theta %.0f gives BER %.3e", t, ber));
    }
    detail += fmt("%.0f:%.2e ", t, ber);
  }
  if (o.ok) o.detail = "SNR(70) = " + fmt("%.4f dB; ", at70.snr_db) + detail;
  return o;
}

Outcome monte_carlo_vs_analytic() {
  Outcome o;
  const std::vector<double> pts{8.0, 10.0, 12.0};
  const std::size_t bits = 10000000;
  const auto rows = linksim::ber_sweep(modem::SchemeConfig{}, pts, bits, 20240601);
  std::string detail;
  for (const auto& [db, est] : rows) {
    const double p = oracle::q_tail(std::sqrt(std::pow(10.0, db / 10.0)));
    const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(est.bits));
    const double z = (est.ber - p) / sd;
    o.require(std::abs(z) <= 3.0, fmt("%.0f dB: z = %.2f", db, z));
    o.require(est.bits >= 1000000 && est.bits <= 10000000, "bit count out of range");
    detail += fmt("%.0fdB z=%+.2f ", db, z);
  }
  if (o.ok) o.detail = detail;
  return o;
}

Outcome modem_round_trip() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::vector<modem::SchemeConfig> configs = testing_support::default_schemes();
  for (double d : {0.25, 0.75}) {
    configs.push_back({modem::Ook{d}});
    configs.push_back({modem::Pwm{d, 0.1, 20}});
    configs.push_back({modem::Vppm{d, 20}});
  }
  std::size_t trips = 0;
  for (const auto& c : configs) {
    const std::string name = modem::scheme_name(c);
    double sum = 0.0;
    std::size_t samples = 0;
    for (int t = 0; t < 10000; ++t) {
      const auto bits = testing_support::random_bits(rng, 1 + rng() % 128);
      const auto w = modem::encode(bits, c);
      for (double x : w.samples) {
        if (!(x >= 0.0)) {
          o.require(false, name + ": negative sample");
          return o;
        }
      }
      if (modem::decode(w, c) != bits) {
        o.require(false, name + ": round trip mismatch");
        return o;
      }
      ++trips;
      const double frame_sum = std::accumulate(w.samples.begin(), w.samples.end(), 0.0);
      sum += frame_sum;
      samples += w.samples.size();
      const double frame_mean = frame_sum / static_cast<double>(w.samples.size());
      if (const auto* v = std::get_if<modem::Vppm>(&c.scheme)) {
        o.require(std::abs(frame_mean - v->dimming) <= 1.0 / v->resolution, name + ": VPPM symbol mean off");
      }
      if (const auto* p = std::get_if<modem::Ppm>(&c.scheme)) {
        o.require(std::abs(frame_mean - 1.0 / p->slots) <= 1e-12, name + ": PPM duty off");
      }
    }
    const double ensemble = sum / static_cast<double>(samples);
    const double mean_len = static_cast<double>(samples) / 10000.0;
    if (const auto* v = std::get_if<modem::Ook>(&c.scheme)) {
      o.require(std::abs(ensemble - v->dimming) <= 1.0 / mean_len, fmt("OOK %.2f mean %.5f", v->dimming, ensemble));
    }
    if (const auto* v = std::get_if<modem::Pwm>(&c.scheme)) {
      o.require(std::abs(ensemble - v->dimming) <= 1.0 / v->resolution,
                fmt("PWM %.2f mean %.5f", v->dimming, ensemble));
    }
  }
  if (o.ok) o.detail = std::to_string(trips) + " round trips over " + std::to_string(configs.size()) + " configs";
  return o;
}

Outcome aco_clipping() {
  Outcome o;
  std::mt19937_64 rng(77);
  double worst_anti = 0.0, worst_evm = 0.0;
  for (int n : {16, 64}) {
    for (int m : {4, 16}) {
      const modem::SchemeConfig c{modem::AcoOfdm{n, m}};
      const auto bits = testing_support::random_bits(rng, modem::bits_per_symbol(c) * 20);
      const auto pre = modem::ofdm::bipolar_blocks(bits, c);
      const auto ref = modem::ofdm::data_symbols(bits, c);
      const auto carriers = modem::ofdm::data_subcarriers(c.scheme);
      for (std::size_t b = 0; b < pre.size(); ++b) {
        std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < carriers.size(); ++i) {
          spectrum[carriers[i]] = ref[b][i];
          spectrum[n - carriers[i]] = std::conj(ref[b][i]);
        }
        const auto direct = oracle::idft(spectrum);
        for (int k = 0; k < n; ++k) {
          o.require(std::abs(direct[k].real() - pre[b][k]) < 1e-9, "pre-clip block differs from the inverse DFT");
        }
        for (int k = 0; k < n / 2; ++k) worst_anti = std::max(worst_anti, std::abs(pre[b][k] + pre[b][k + n / 2]));
      }
      const auto w = modem::encode(bits, c);
      const double e = modem::ofdm::evm(ref, modem::ofdm::recover_symbols(w, c));
      worst_evm = std::max(worst_evm, e);
    }
  }
  o.require(worst_anti <= 1e-9, fmt("antisymmetry residual %.3e", worst_anti));
  o.require(worst_evm < 1e-9, fmt("EVM %.3e", worst_evm));
  if (o.ok) o.detail = fmt("max antisymmetry residual %.2e, max EVM %.2e", worst_anti, worst_evm);
  return o;
}

Outcome power_conservation() {
  Outcome o;
  double worst = 0.0;
  for (double semi : {30.0, 45.0, 60.0}) {
    for (double pt : {1.0, 2.5}) {
      channel::LedPanel lp;
      lp.semi_angle_deg = semi;
      lp.optical_power_w = pt;
      const double p = oracle::hemisphere_power([&](double t) { return channel::radiant_intensity(lp, t); });
      const double rel = std::abs(p - pt) / pt;
      worst = std::max(worst, rel);
      o.require(rel < 1e-3, fmt("semi-angle %.0f: relative error %.3e", semi, rel));
    }
  }
  if (o.ok) o.detail = fmt("max relative error %.2e", worst);
  return o;
}

Outcome scheme_orderings() {
  Outcome o;
  const double peak = modem::scheme_metrics({modem::Ook{0.5}}).rate_factor;
  for (int i = 1; i < 100; ++i) {
    const double d = i / 100.0;
    if (i == 50) continue;
    o.require(modem::scheme_metrics({modem::Ook{d}}).rate_factor < peak, fmt("OOK rate at %.2f not below 50%%", d));
  }
  // Achieved information rate on an encoded frame against rate_factor x slot_rate.
  std::mt19937_64 rng(1);
  for (double d : {0.1, 0.3, 0.5, 0.6, 0.9}) {
    const modem::SchemeConfig c{modem::Ook{d}, 1e6};
    const auto bits = testing_support::random_bits(rng, 20000);
    const auto w = modem::encode(bits, c);
    const double achieved = static_cast<double>(bits.size()) / static_cast<double>(w.samples.size()) * c.slot_rate_hz;
    const double expected = modem::scheme_metrics(c).rate_factor * c.slot_rate_hz;
    o.require(std::abs(achieved - expected) <= expected / 1000.0, fmt("OOK %.1f rate %.1f", d, achieved));
  }
  const double ook_duty = modem::scheme_metrics({modem::Ook{0.5}}).duty_cycle;
  for (int l = 4; l <= 1024; l *= 2) {
    o.require(modem::scheme_metrics({modem::Ppm{l}}).duty_cycle < ook_duty, "PPM duty not below OOK");
  }
  int pairs = 0;
  for (int n = 2; n <= 64; ++n) {
    for (int w = 1; w < n; ++w) {
      if (n % w != 0) continue;
      const auto m = modem::scheme_metrics({modem::Oppm{n, w}});
      const double oppm = m.bits_per_slot * n;
      const double ppm = std::log2(static_cast<double>(n) / w);
      o.require(oppm >= ppm - 1e-12, fmt("OPPM below PPM at n=%.0f w=%.0f", n, w));
      o.require(std::abs(m.duty_cycle - 1.0 / (n / w)) < 1e-12, "OPPM duty differs from PPM duty");
      ++pairs;
    }
  }
  if (o.ok) o.detail = std::to_string(pairs) + " (n, w) pairs checked";
  return o;
}

Outcome planner_oracles() {
  Outcome o;
  std::mt19937_64 rng(8080);
  std::uniform_real_distribution<double> pos(0.2, 4.8), semi(20.0, 70.0);
  auto base = [] {
    Scenario s = default_scenario();
    s.noise.variance = 1e-9;
    s.panels.clear();
    s.receivers.clear();
    return s;
  };
  for (int trial = 0; trial < 100; ++trial) {
    Scenario s = base();
    s.strategy = Strategy::Dedicated;
    const std::size_t users = 3 + trial % 4;
    const std::size_t panels = users + static_cast<std::size_t>(trial % 3);
    for (std::size_t p = 0; p < panels; ++p) {
      channel::LedPanel lp;
      lp.position = {pos(rng), pos(rng), 3.0};
      lp.semi_angle_deg = semi(rng);
      s.panels.push_back(lp);
    }
    for (std::size_t r = 0; r < users; ++r) {
      channel::Receiver rx;
      rx.position = {pos(rng), pos(rng), 0.85};
      s.receivers.push_back(rx);
    }
    std::vector<std::vector<double>> snr(users, std::vector<double>(panels));
    for (std::size_t r = 0; r < users; ++r) {
      for (std::size_t p = 0; p < panels; ++p) {
        snr[r][p] = planner::panel_snr(s, s.panels[p], s.receivers[r]).snr_linear;
      }
    }
    const double got = planner::min_user_snr(s, planner::assign_users(s));
    const double want = oracle::brute_force_maxmin(snr);
    o.require(std::abs(got - want) <= 1e-12 * std::abs(want), "trial " + std::to_string(trial) + " differs from brute force");
  }

  for (int trial = 0; trial < 8; ++trial) {
    Scenario s = base();
    s.strategy = Strategy::Moveable;
    channel::LedPanel lp;
    lp.position = {2.5, 2.5, 3.0};
    lp.semi_angle_deg = 30.0;
    lp.mobility = channel::MoveableMount{60.0};
    s.panels.push_back(lp);
    channel::Receiver rx;
    rx.position = {pos(rng), pos(rng), 0.85};
    s.receivers.push_back(rx);
    const double step = trial % 2 ? 1.0 : 2.5;
    const auto rep = planner::optimize_tilts(s, step);
    const auto n = geometry::tilt_panel(lp.normal, rep.tilts[0].tilt_deg, rep.tilts[0].azimuth_deg);
    const double miss = geometry::angle_between(n.vec(), rx.position - lp.position);
    o.require(miss <= step, fmt("aim misses the user by %.3f deg (step %.1f)", miss, step));
    const auto g = geometry::link_geometry(lp.position, lp.normal, rx.position, rx.normal);
    const auto one_step = channel::evaluate_link({step, g.phi, g.distance}, lp, rx, s.noise);
    o.require(rep.min_user_snr_db >= one_step.snr_db, "tilt SNR below the one-step certificate");
  }

  const Scenario hybrid = io::load_scenario(kHybrid).scenario;
  const double opt = planner::optimize_tilts(hybrid, 1.0).min_user_snr_db;
  const double frozen = planner::frozen_plan(hybrid).min_user_snr_db;
  o.require(opt >= frozen, fmt("hybrid %.4f dB below frozen %.4f dB", opt, frozen));
  if (o.ok) o.detail = fmt("hybrid min-user SNR %.3f dB vs frozen %.3f dB", opt, frozen);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "SNR table anchor and trend", 1.0, table3_anchor_and_trend},
      {2, "70 degree BER threshold", 1.0, ber_threshold_at_70},
      {3, "Monte Carlo BER vs Q(sqrt(SNR))", 60.0, monte_carlo_vs_analytic},
      {4, "modem round trip and IM constraints", 30.0, modem_round_trip},
      {5, "ACO-OFDM clipping", 5.0, aco_clipping},
      {6, "Lambertian power conservation", 5.0, power_conservation},
      {7, "scheme ordering assertions", 5.0, scheme_orderings},
      {8, "planner oracles", 60.0, planner_oracles},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs >= c.budget_s) {
      o.ok = false;
      o.detail = fmt("runtime %.2f s exceeds %.0f s", secs, c.budget_s);
    }
    if (!o.ok) ++failures;
    std::printf("[%s] AC%d %s (%.2f s): %s\n", o.ok ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
