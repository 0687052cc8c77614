#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lifisim/modem.hpp"

namespace lifisim {
struct Scenario;
}

namespace lifisim::linksim {

/// Counter-based random bit generator. Stream s of a key draws the
/// SplitMix64 outputs at counters [s * 2^40, (s + 1) * 2^40), so distinct
/// streams of one key never share a draw.
class StreamRng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kStreamBits = 40;

  StreamRng(std::uint64_t key, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  std::uint64_t end_;
};

/// SplitMix64 output function (a bijection on 64-bit words).
std::uint64_t mix64(std::uint64_t z);

inline constexpr std::size_t kMinBitBudget = 1000;

struct LinkRun {
  modem::SchemeConfig scheme;
  double snr_db = 10.0;  ///< signal AC power per sample over noise variance
  std::size_t bit_budget = 100000;
  std::uint64_t seed = 1;
  /// Sub-stream index; run i of a sweep uses streams 2i (bits) and 2i + 1 (noise).
  std::uint64_t stream = 0;
};

struct BerEstimate {
  double ber = 0.0;
  std::size_t errors = 0;
  std::size_t bits = 0;
  double ci95_halfwidth = 0.0;
  bool zero_gain = false;
};

/// 95 % normal-approximation half-width for a binomial proportion.
double ci95_halfwidth(double p, std::size_t n);

/// Bits -> waveform -> additive Gaussian noise -> detection. Simulates at
/// least bit_budget bits, rounded up to whole symbols. Throws
/// ParameterError when bit_budget < 1000 or snr_db is not finite.
BerEstimate run_link(const LinkRun& run);

/// One run_link per point, executed on up to `threads` workers (0 = hardware
/// concurrency). Point i uses sub-stream i of `seed`; output order matches input.
std::vector<std::pair<double, BerEstimate>> ber_sweep(const modem::SchemeConfig& scheme,
                                                      std::span<const double> snr_db_points,
                                                      std::size_t bit_budget, std::uint64_t seed,
                                                      unsigned threads = 0);

/// SNR of the primary link at irradiance angle theta, then run_link at it.
/// Zero channel gain short-circuits to ber = 0.5 with zero_gain set.
BerEstimate angle_ber(const Scenario& scenario, double theta_deg, const modem::SchemeConfig& scheme,
                      std::size_t bit_budget, std::uint64_t seed);

}  // namespace lifisim::linksim
