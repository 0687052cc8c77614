#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "lifisim/channel.hpp"
#include "lifisim/error.hpp"
#include "lifisim/linksim.hpp"
#include "lifisim/scenario.hpp"
#include "oracles.hpp"
#include "schemes.hpp"

using namespace lifisim;
using namespace lifisim::linksim;
using modem::SchemeConfig;

namespace {

bool same(const BerEstimate& a, const BerEstimate& b) {
  return a.errors == b.errors && a.bits == b.bits && a.ber == b.ber && a.ci95_halfwidth == b.ci95_halfwidth &&
         a.zero_gain == b.zero_gain;
}

double binomial_sigma(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace

TEST_SUITE("linksim") {
  TEST_CASE("stream rng is deterministic and streams differ") {
    StreamRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
      const auto x = a();
      CHECK(x == b());
      seen.insert(x);
      seen.insert(c());
      seen.insert(d());
    }
    CHECK(seen.size() == 3000);
  }

  TEST_CASE("mix64 reference values") {
    // SplitMix64 reference: first outputs for state 0 with the golden increment.
    CHECK(mix64(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);
    CHECK(mix64(0x3C6EF372FE94F82AULL) == 0x6E789E6AA1B965F4ULL);
  }

  TEST_CASE("run_link is deterministic") {
    for (const auto& c : testing_support::default_schemes()) {
      const LinkRun r{c, 6.0, 20000, 77, 0};
      CHECK(same(run_link(r), run_link(r)));
    }
  }

  TEST_CASE("high snr yields zero errors for every scheme") {
    for (const auto& c : testing_support::default_schemes()) {
      const auto e = run_link({c, 60.0, 10000, 1, 0});
      INFO(modem::scheme_name(c));
      CHECK(e.errors == 0);
      CHECK(e.bits >= 10000);
    }
  }

  TEST_CASE("budget is rounded up to whole symbols") {
    const auto e = run_link({SchemeConfig{modem::Ppm{16}}, 60.0, 1001, 1, 0});
    CHECK(e.bits == 1004);
  }

  TEST_CASE("invalid runs are rejected") {
    CHECK_THROWS_AS(run_link({SchemeConfig{}, 10.0, 999, 1, 0}), ParameterError);
    CHECK_THROWS_AS(run_link({SchemeConfig{}, std::nan(""), 1000, 1, 0}), ParameterError);
    CHECK_THROWS_AS(run_link({SchemeConfig{}, INFINITY, 1000, 1, 0}), ParameterError);
  }

  TEST_CASE("ook at the 1e-5 operating point") {
    const auto e = run_link({SchemeConfig{}, 12.60, 10000000, 42, 0});
    const double p = oracle::q_tail(std::sqrt(std::pow(10.0, 1.26)));
    CHECK(std::abs(e.ber - p) <= 3.0 * binomial_sigma(p, e.bits));
    CHECK(std::abs(e.ber - 1e-5) <= 3.0 * binomial_sigma(1e-5, e.bits) + std::abs(p - 1e-5));
    CHECK(e.ber == doctest::Approx(static_cast<double>(e.errors) / e.bits));
    CHECK(e.ci95_halfwidth == doctest::Approx(1.96 * binomial_sigma(e.ber, e.bits)));
  }

  TEST_CASE("sweep is monotone, ordered and thread independent") {
    const std::vector<double> pts{4.0, 8.0, 12.0};
    const auto one = ber_sweep(SchemeConfig{}, pts, 200000, 5, 1);
    const auto many = ber_sweep(SchemeConfig{}, pts, 200000, 5, 4);
    REQUIRE(one.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(one[i].first == pts[i]);
      CHECK(same(one[i].second, many[i].second));
      CHECK(same(one[i].second, run_link({SchemeConfig{}, pts[i], 200000, 5, i})));
    }
    CHECK(one[0].second.ber > one[1].second.ber);
    CHECK(one[1].second.ber > one[2].second.ber);
    CHECK(ber_sweep(SchemeConfig{}, std::vector<double>{}, 1000, 1).empty());
  }

  TEST_CASE("ber is monotone in snr for every scheme") {
    const std::vector<double> pts{0.0, 4.0, 8.0};
    for (const auto& c : testing_support::default_schemes()) {
      const auto rows = ber_sweep(c, pts, 50000, 9);
      INFO(modem::scheme_name(c));
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i - 1].second;
        const auto& b = rows[i].second;
        CHECK(b.ber <= a.ber + a.ci95_halfwidth + b.ci95_halfwidth);
      }
    }
  }

  TEST_CASE("sweep errors propagate") {
    const std::vector<double> bad{1.0, std::nan("")};
    CHECK_THROWS_AS(ber_sweep(SchemeConfig{}, bad, 1000, 1), ParameterError);
    const std::vector<double> ok{1.0};
    CHECK_THROWS_AS(ber_sweep(SchemeConfig{}, ok, 10, 1), ParameterError);
  }

  TEST_CASE("angle ber under the 70 degree calibration") {
    Scenario s = default_scenario();
    s.noise = channel::calibrate_to_ber(s, 70.0, 45.0, 1e-5);
    const auto at68 = angle_ber(s, 68.0, SchemeConfig{}, 10000000, 3);
    const auto at75 = angle_ber(s, 75.0, SchemeConfig{}, 1000000, 3);
    CHECK(at68.ber <= 1e-5);
    CHECK(at75.ber > 1e-5);
    CHECK_FALSE(at68.zero_gain);
  }

  TEST_CASE("outside the field of view is flagged") {
    Scenario s = default_scenario();
    s.panels[0].position = {0.2, 2.5, 3.0};
    s.receivers[0].position = {4.9, 2.5, 0.85};
    const auto e = angle_ber(s, 30.0, SchemeConfig{}, 10000, 1);
    CHECK(e.zero_gain);
    CHECK(e.ber == 0.5);
  }
}
