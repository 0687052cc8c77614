#include "lifisim/linksim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "lifisim/channel.hpp"
#include "lifisim/error.hpp"
#include "lifisim/scenario.hpp"

namespace lifisim::linksim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::size_t kChunkBits = std::size_t{1} << 16;

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

StreamRng::StreamRng(std::uint64_t key, std::uint64_t stream)
    : key_(key), counter_(stream << kStreamBits), end_((stream + 1) << kStreamBits) {
  if (stream >= (std::uint64_t{1} << (64 - kStreamBits))) throw ParameterError("stream index out of range");
}

StreamRng::result_type StreamRng::operator()() {
  if (counter_ == end_) throw Error("random stream exhausted");
  return mix64(key_ + kGolden * counter_++);
}

double ci95_halfwidth(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

BerEstimate run_link(const LinkRun& run) {
  if (run.bit_budget < kMinBitBudget) throw ParameterError("bit_budget must be at least 1000");
  if (!std::isfinite(run.snr_db)) throw ParameterError("snr_db must be finite");
  modem::validate(run.scheme);

  StreamRng bit_rng(run.seed, 2 * run.stream);
  StreamRng noise_rng(run.seed, 2 * run.stream + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double sigma = std::sqrt(modem::signal_power(run.scheme) / channel::from_db(run.snr_db));
  const std::size_t k = modem::bits_per_symbol(run.scheme);
  const std::size_t chunk = (kChunkBits + k - 1) / k * k;

  BerEstimate est;
  modem::Bits bits;
  std::uint64_t word = 0;
  int left = 0;
  while (est.bits < run.bit_budget) {
    const std::size_t want = std::min(chunk, (run.bit_budget - est.bits + k - 1) / k * k);
    bits.resize(want);
    for (auto& b : bits) {
      if (left == 0) {
        word = bit_rng();
        left = 64;
      }
      b = static_cast<std::uint8_t>(word & 1U);
      word >>= 1;
      --left;
    }
    modem::Waveform w = modem::encode(bits, run.scheme);
    for (auto& s : w.samples) s += sigma * gauss(noise_rng);
    const modem::Bits out = modem::decode(w, run.scheme);
    for (std::size_t i = 0; i < want; ++i) est.errors += (out[i] != bits[i]);
    est.bits += want;
  }
  est.ber = static_cast<double>(est.errors) / static_cast<double>(est.bits);
  est.ci95_halfwidth = ci95_halfwidth(est.ber, est.bits);
  return est;
}

std::vector<std::pair<double, BerEstimate>> ber_sweep(const modem::SchemeConfig& scheme,
                                                      std::span<const double> snr_db_points,
                                                      std::size_t bit_budget, std::uint64_t seed,
                                                      unsigned threads) {
  for (double p : snr_db_points) {
    if (!std::isfinite(p)) throw ParameterError("sweep SNR points must be finite");
  }
  std::vector<std::pair<double, BerEstimate>> out(snr_db_points.size());
  if (out.empty()) return out;
  if (bit_budget < kMinBitBudget) throw ParameterError("bit_budget must be at least 1000");

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, out.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++) {
      try {
        out[i] = {snr_db_points[i], run_link({scheme, snr_db_points[i], bit_budget, seed, i})};
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

BerEstimate angle_ber(const Scenario& scenario, double theta_deg, const modem::SchemeConfig& scheme,
                      std::size_t bit_budget, std::uint64_t seed) {
  const channel::SnrReport r = channel::primary_snr_at_theta(scenario, theta_deg);
  if (!(r.snr_linear > 0.0)) {
    BerEstimate est;
    est.ber = 0.5;
    est.zero_gain = true;
    return est;
  }
  return run_link({scheme, r.snr_db, bit_budget, seed, 0});
}

}  // namespace lifisim::linksim
