#include "lifisim/modem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lifisim/error.hpp"

namespace lifisim::modem {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void config_error(const std::string& msg) { throw ConfigError(msg); }

bool open_unit(double v) { return v > 0.0 && v < 1.0; }

bool is_pow2(int v) { return v > 0 && std::has_single_bit(static_cast<unsigned>(v)); }

int log2_int(int v) { return std::countr_zero(static_cast<unsigned>(v)); }

bool valid_qam(int order) { return order >= 4 && is_pow2(order) && log2_int(order) % 2 == 0; }

int pwm_width(const Pwm& p, bool one) {
  const double frac = one ? p.dimming + p.width_delta : p.dimming - p.width_delta;
  return static_cast<int>(std::lround(frac * p.resolution));
}

int vppm_width(const Vppm& v) { return static_cast<int>(std::lround(v.dimming * v.resolution)); }

int oppm_bits(const Oppm& o) { return std::bit_width(static_cast<unsigned>(o.chips - o.pulse_width + 1)) - 1; }

double ook_compensation_fraction(double dimming) { return std::abs(2.0 * dimming - 1.0); }

std::size_t read_value(std::span<const std::uint8_t> bits, std::size_t pos, int width) {
  std::size_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 1) | (bits[pos + static_cast<std::size_t>(i)] ? 1U : 0U);
  return v;
}

void write_value(Bits& out, std::size_t value, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((value >> i) & 1U));
}

Bits padded(std::span<const std::uint8_t> bits, std::size_t symbol_bits) {
  Bits out(bits.begin(), bits.end());
  for (auto& b : out) b = b ? 1 : 0;
  const std::size_t rem = out.size() % symbol_bits;
  if (rem != 0) out.resize(out.size() + symbol_bits - rem, 0);
  return out;
}

Bits truncated(Bits bits, const Waveform& w) {
  if (w.payload_bits) {
    if (*w.payload_bits > bits.size()) throw FramingError("payload_bits exceeds decoded length");
    bits.resize(*w.payload_bits);
  }
  return bits;
}

std::size_t whole_symbols(const Waveform& w, std::size_t symbol_samples) {
  if (w.samples.size() % symbol_samples != 0) {
    std::ostringstream os;
    os << "waveform length " << w.samples.size() << " is not a multiple of the symbol length "
       << symbol_samples;
    throw FramingError(os.str());
  }
  return w.samples.size() / symbol_samples;
}

int ofdm_subcarriers(const Scheme& s) {
  if (const auto* d = std::get_if<DcoOfdm>(&s)) return d->subcarriers;
  return std::get<AcoOfdm>(s).subcarriers;
}

int ofdm_qam(const Scheme& s) {
  if (const auto* d = std::get_if<DcoOfdm>(&s)) return d->qam_order;
  return std::get<AcoOfdm>(s).qam_order;
}

double dco_bias(const DcoOfdm& d) {
  const double k = std::sqrt(std::pow(10.0, d.bias_db / 10.0) - 1.0);
  return k * ofdm::time_signal_sigma(d.subcarriers, static_cast<std::size_t>(d.subcarriers / 2 - 1));
}

// Gray-coded per-axis PAM level index <-> bit value.
std::size_t gray_decode(std::size_t g) {
  std::size_t i = 0;
  for (; g; g >>= 1) i ^= g;
  return i;
}

}  // namespace

void validate(const SchemeConfig& config) {
  if (!(config.slot_rate_hz > 0.0) || !std::isfinite(config.slot_rate_hz)) {
    config_error("slot_rate_hz must be positive");
  }
  std::visit(
      Overloaded{
          [](const Ook& o) {
            if (!open_unit(o.dimming)) config_error("OOK dimming must lie in (0, 1)");
          },
          [](const Pwm& p) {
            if (!open_unit(p.dimming)) config_error("PWM dimming must lie in (0, 1)");
            if (!(p.width_delta > 0.0 && p.width_delta < std::min(p.dimming, 1.0 - p.dimming))) {
              config_error("PWM width_delta must lie in (0, min(d, 1 - d))");
            }
            if (p.resolution < 2) config_error("PWM resolution must be at least 2 samples");
            if (pwm_width(p, false) >= pwm_width(p, true)) {
              config_error("PWM resolution too coarse to separate the two pulse widths");
            }
          },
          [](const Ppm& p) {
            if (p.slots < 2 || !is_pow2(p.slots)) config_error("PPM slots must be a power of two >= 2");
          },
          [](const Vppm& v) {
            if (!open_unit(v.dimming)) config_error("VPPM dimming must lie in (0, 1)");
            if (v.resolution < 2 || v.resolution % 2 != 0) {
              config_error("VPPM resolution must be an even number of samples >= 2");
            }
            const int w = vppm_width(v);
            if (w < 1 || w > v.resolution - 1) {
              config_error("VPPM resolution too coarse for the requested dimming");
            }
          },
          [](const Oppm& o) {
            if (o.chips < 2) config_error("OPPM needs at least 2 chips per symbol");
            if (o.pulse_width < 1 || o.pulse_width >= o.chips) {
              config_error("OPPM pulse width must satisfy 1 <= w < n");
            }
          },
          [](const DcoOfdm& d) {
            if (d.subcarriers < 8 || !is_pow2(d.subcarriers)) {
              config_error("DCO-OFDM subcarriers must be a power of two >= 8");
            }
            if (!valid_qam(d.qam_order)) config_error("QAM order must be a square power of two >= 4");
            if (!(d.bias_db > 0.0) || !std::isfinite(d.bias_db)) config_error("DCO-OFDM bias_db must be positive");
          },
          [](const AcoOfdm& a) {
            if (a.subcarriers < 8 || !is_pow2(a.subcarriers)) {
              config_error("ACO-OFDM subcarriers must be a power of two >= 8");
            }
            if (!valid_qam(a.qam_order)) config_error("QAM order must be a square power of two >= 4");
          },
      },
      config.scheme);
}

std::string scheme_name(const SchemeConfig& config) {
  return std::visit(Overloaded{
                        [](const Ook&) -> std::string { return "ook"; },
                        [](const Pwm&) -> std::string { return "pwm"; },
                        [](const Ppm& p) { return "ppm" + std::to_string(p.slots); },
                        [](const Vppm&) -> std::string { return "vppm"; },
                        [](const Oppm& o) {
                          return "oppm" + std::to_string(o.chips) + "," + std::to_string(o.pulse_width);
                        },
                        [](const DcoOfdm&) -> std::string { return "dco-ofdm"; },
                        [](const AcoOfdm&) -> std::string { return "aco-ofdm"; },
                    },
                    config.scheme);
}

std::size_t bits_per_symbol(const SchemeConfig& config) {
  return std::visit(Overloaded{
                        [](const Ook&) -> std::size_t { return 1; },
                        [](const Pwm&) -> std::size_t { return 1; },
                        [](const Ppm& p) -> std::size_t { return log2_int(p.slots); },
                        [](const Vppm&) -> std::size_t { return 1; },
                        [](const Oppm& o) -> std::size_t { return oppm_bits(o); },
                        [](const DcoOfdm& d) -> std::size_t {
                          return static_cast<std::size_t>(d.subcarriers / 2 - 1) * log2_int(d.qam_order);
                        },
                        [](const AcoOfdm& a) -> std::size_t {
                          return static_cast<std::size_t>(a.subcarriers / 4) * log2_int(a.qam_order);
                        },
                    },
                    config.scheme);
}

std::size_t samples_per_symbol(const SchemeConfig& config) {
  return std::visit(Overloaded{
                        [](const Ook&) -> std::size_t { return 1; },
                        [](const Pwm& p) -> std::size_t { return p.resolution; },
                        [](const Ppm& p) -> std::size_t { return p.slots; },
                        [](const Vppm& v) -> std::size_t { return v.resolution; },
                        [](const Oppm& o) -> std::size_t { return o.chips; },
                        [](const DcoOfdm& d) -> std::size_t { return d.subcarriers; },
                        [](const AcoOfdm& a) -> std::size_t { return a.subcarriers; },
                    },
                    config.scheme);
}

std::size_t ook_frame_slots(std::size_t data_bits, double dimming) {
  const double f = ook_compensation_fraction(dimming);
  return static_cast<std::size_t>(std::llround(static_cast<double>(data_bits) / (1.0 - f)));
}

Waveform encode(std::span<const std::uint8_t> bits, const SchemeConfig& config) {
  validate(config);
  Waveform w;
  w.slot_rate_hz = config.slot_rate_hz;
  w.payload_bits = bits.size();
  if (bits.empty()) return w;

  const std::size_t k = bits_per_symbol(config);
  const Bits data = padded(bits, k);
  const std::size_t symbols = data.size() / k;
  auto& out = w.samples;

  std::visit(
      Overloaded{
          [&](const Ook& o) {
            const std::size_t total = ook_frame_slots(data.size(), o.dimming);
            out.reserve(total);
            for (auto b : data) out.push_back(b ? 1.0 : 0.0);
            out.resize(total, o.dimming > 0.5 ? 1.0 : 0.0);
          },
          [&](const Pwm& p) {
            w.samples_per_slot = p.resolution;
            const int w0 = pwm_width(p, false);
            const int w1 = pwm_width(p, true);
            out.reserve(symbols * p.resolution);
            for (auto b : data) {
              const int width = b ? w1 : w0;
              for (int j = 0; j < p.resolution; ++j) out.push_back(j < width ? 1.0 : 0.0);
            }
          },
          [&](const Ppm& p) {
            out.assign(symbols * p.slots, 0.0);
            for (std::size_t s = 0; s < symbols; ++s) {
              out[s * p.slots + read_value(data, s * k, static_cast<int>(k))] = 1.0;
            }
          },
          [&](const Vppm& v) {
            w.samples_per_slot = v.resolution / 2;
            const int width = vppm_width(v);
            out.assign(symbols * v.resolution, 0.0);
            for (std::size_t s = 0; s < symbols; ++s) {
              const std::size_t start = s * v.resolution + (data[s] ? v.resolution - width : 0);
              std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(start), width, 1.0);
            }
          },
          [&](const Oppm& o) {
            out.assign(symbols * o.chips, 0.0);
            for (std::size_t s = 0; s < symbols; ++s) {
              const std::size_t pos = read_value(data, s * k, static_cast<int>(k));
              std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(s * o.chips + pos), o.pulse_width, 1.0);
            }
          },
          [&](const DcoOfdm& d) {
            const double bias = dco_bias(d);
            for (const auto& block : ofdm::bipolar_blocks(data, config)) {
              for (double x : block) out.push_back(std::max(0.0, x + bias));
            }
          },
          [&](const AcoOfdm&) {
            for (const auto& block : ofdm::bipolar_blocks(data, config)) {
              for (double x : block) out.push_back(std::max(0.0, x));
            }
          },
      },
      config.scheme);
  return w;
}

Bits decode(const Waveform& waveform, const SchemeConfig& config) {
  validate(config);
  const auto& x = waveform.samples;
  Bits out;
  if (x.empty()) return truncated(out, waveform);
  const std::size_t k = bits_per_symbol(config);

  std::visit(
      Overloaded{
          [&](const Ook& o) {
            // Recover the data length from the frame length.
            const double f = ook_compensation_fraction(o.dimming);
            const auto guess = static_cast<std::size_t>(static_cast<double>(x.size()) * (1.0 - f));
            std::optional<std::size_t> n;
            for (std::size_t c = guess > 2 ? guess - 2 : 0; c <= guess + 2; ++c) {
              if (ook_frame_slots(c, o.dimming) == x.size()) {
                n = c;
                break;
              }
            }
            if (!n) throw FramingError("OOK frame length matches no data length at this dimming");
            out.reserve(*n);
            for (std::size_t i = 0; i < *n; ++i) out.push_back(x[i] > 0.5 ? 1 : 0);
          },
          [&](const Pwm& p) {
            const std::size_t symbols = whole_symbols(waveform, p.resolution);
            const int w0 = pwm_width(p, false);
            const int w1 = pwm_width(p, true);
            const double threshold = 0.5 * (w1 - w0);
            for (std::size_t s = 0; s < symbols; ++s) {
              double acc = 0.0;
              for (int j = w0; j < w1; ++j) acc += x[s * p.resolution + j];
              out.push_back(acc > threshold ? 1 : 0);
            }
          },
          [&](const Ppm& p) {
            const std::size_t symbols = whole_symbols(waveform, p.slots);
            for (std::size_t s = 0; s < symbols; ++s) {
              const auto first = x.begin() + static_cast<std::ptrdiff_t>(s * p.slots);
              const auto idx = static_cast<std::size_t>(std::max_element(first, first + p.slots) - first);
              write_value(out, idx, static_cast<int>(k));
            }
          },
          [&](const Vppm& v) {
            const std::size_t symbols = whole_symbols(waveform, v.resolution);
            const int width = vppm_width(v);
            for (std::size_t s = 0; s < symbols; ++s) {
              const std::size_t base = s * v.resolution;
              double lead = 0.0, trail = 0.0;
              for (int j = 0; j < width; ++j) {
                lead += x[base + j];
                trail += x[base + v.resolution - width + j];
              }
              out.push_back(trail > lead ? 1 : 0);
            }
          },
          [&](const Oppm& o) {
            const std::size_t symbols = whole_symbols(waveform, o.chips);
            const std::size_t positions = std::size_t{1} << k;
            for (std::size_t s = 0; s < symbols; ++s) {
              const std::size_t base = s * o.chips;
              std::size_t best = 0;
              double best_corr = -std::numeric_limits<double>::infinity();
              for (std::size_t p = 0; p < positions; ++p) {
                double corr = 0.0;
                for (int j = 0; j < o.pulse_width; ++j) corr += x[base + p + j];
                if (corr > best_corr) {
                  best_corr = corr;
                  best = p;
                }
              }
              write_value(out, best, static_cast<int>(k));
            }
          },
          [&](const auto& ofdm_scheme) {
            const int order = ofdm_qam(Scheme{ofdm_scheme});
            for (const auto& block : ofdm::recover_symbols(waveform, config)) {
              const Bits b = ofdm::qam_slice(block, order);
              out.insert(out.end(), b.begin(), b.end());
            }
          },
      },
      config.scheme);
  return truncated(std::move(out), waveform);
}

double mean_intensity(const SchemeConfig& config) {
  validate(config);
  return std::visit(Overloaded{
                        [](const Ook& o) { return o.dimming; },
                        [](const Pwm& p) {
                          return (pwm_width(p, false) + pwm_width(p, true)) / (2.0 * p.resolution);
                        },
                        [](const Ppm& p) { return 1.0 / p.slots; },
                        [](const Vppm& v) { return static_cast<double>(vppm_width(v)) / v.resolution; },
                        [](const Oppm& o) { return static_cast<double>(o.pulse_width) / o.chips; },
                        [](const DcoOfdm& d) { return dco_bias(d); },
                        [](const AcoOfdm& a) {
                          const double sigma = ofdm::time_signal_sigma(
                              a.subcarriers, static_cast<std::size_t>(a.subcarriers / 4));
                          return sigma / std::sqrt(2.0 * std::numbers::pi);
                        },
                    },
                    config.scheme);
}

double signal_power(const SchemeConfig& config) {
  validate(config);
  if (const auto* d = std::get_if<DcoOfdm>(&config.scheme)) {
    const double s = ofdm::time_signal_sigma(d->subcarriers, static_cast<std::size_t>(d->subcarriers / 2 - 1));
    return s * s;
  }
  if (const auto* a = std::get_if<AcoOfdm>(&config.scheme)) {
    // Half-wave rectified Gaussian: E[x+^2] - E[x+]^2.
    const double s = ofdm::time_signal_sigma(a->subcarriers, static_cast<std::size_t>(a->subcarriers / 4));
    return s * s * (0.5 - 1.0 / (2.0 * std::numbers::pi));
  }
  // Two-level signals: variance of a Bernoulli(mean) sample.
  const double mu = mean_intensity(config);
  return mu * (1.0 - mu);
}

SchemeMetrics scheme_metrics(const SchemeConfig& config) {
  validate(config);
  const double bits = static_cast<double>(bits_per_symbol(config));
  return std::visit(
      Overloaded{
          [](const Ook& o) { return SchemeMetrics{1.0, o.dimming, 1.0 - ook_compensation_fraction(o.dimming)}; },
          [](const Pwm& p) { return SchemeMetrics{1.0, p.dimming, 1.0}; },
          [](const Ppm& p) { return SchemeMetrics{std::log2(p.slots) / p.slots, 1.0 / p.slots, 1.0}; },
          [](const Vppm& v) { return SchemeMetrics{0.5, v.dimming, 1.0}; },
          [](const Oppm& o) {
            return SchemeMetrics{std::log2(o.chips - o.pulse_width + 1) / o.chips,
                                 static_cast<double>(o.pulse_width) / o.chips, 1.0};
          },
          [&](const DcoOfdm& d) {
            // Peak taken three unclipped standard deviations above the bias.
            const double sigma = std::sqrt(signal_power(SchemeConfig{d}));
            const double bias = dco_bias(d);
            return SchemeMetrics{bits / d.subcarriers, bias / (bias + 3.0 * sigma), 1.0};
          },
          [&](const AcoOfdm& a) {
            return SchemeMetrics{bits / a.subcarriers, 1.0 / (3.0 * std::sqrt(2.0 * std::numbers::pi)), 1.0};
          },
      },
      config.scheme);
}

namespace ofdm {

std::vector<Complex> qam_map(std::span<const std::uint8_t> bits, int order) {
  if (!valid_qam(order)) config_error("QAM order must be a square power of two >= 4");
  const int axis_bits = log2_int(order) / 2;
  const int levels = 1 << axis_bits;
  const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
  const auto per_symbol = static_cast<std::size_t>(2 * axis_bits);
  if (bits.size() % per_symbol != 0) throw FramingError("bit count is not a whole number of QAM symbols");
  std::vector<Complex> out;
  out.reserve(bits.size() / per_symbol);
  for (std::size_t pos = 0; pos < bits.size(); pos += per_symbol) {
    const auto i = gray_decode(read_value(bits, pos, axis_bits));
    const auto q = gray_decode(read_value(bits, pos + axis_bits, axis_bits));
    out.emplace_back(scale * (2.0 * static_cast<double>(i) - (levels - 1)),
                     scale * (2.0 * static_cast<double>(q) - (levels - 1)));
  }
  return out;
}

Bits qam_slice(std::span<const Complex> symbols, int order) {
  if (!valid_qam(order)) config_error("QAM order must be a square power of two >= 4");
  const int axis_bits = log2_int(order) / 2;
  const int levels = 1 << axis_bits;
  const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
  auto level_index = [&](double v) {
    const double idx = std::round((v / scale + (levels - 1)) / 2.0);
    return static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(levels - 1)));
  };
  Bits out;
  out.reserve(symbols.size() * 2 * axis_bits);
  for (const auto& s : symbols) {
    const std::size_t i = level_index(s.real());
    const std::size_t q = level_index(s.imag());
    write_value(out, i ^ (i >> 1), axis_bits);
    write_value(out, q ^ (q >> 1), axis_bits);
  }
  return out;
}

std::vector<int> data_subcarriers(const Scheme& scheme) {
  const int n = ofdm_subcarriers(scheme);
  const int step = std::holds_alternative<AcoOfdm>(scheme) ? 2 : 1;
  std::vector<int> idx;
  for (int k = 1; k < n / 2; k += step) idx.push_back(k);
  return idx;
}

double time_signal_sigma(int subcarriers, std::size_t data_carriers) {
  return std::sqrt(2.0 * static_cast<double>(data_carriers) / subcarriers);
}

std::vector<std::vector<Complex>> data_symbols(std::span<const std::uint8_t> bits, const SchemeConfig& config) {
  validate(config);
  const int order = ofdm_qam(config.scheme);
  const std::size_t carriers = data_subcarriers(config.scheme).size();
  const Bits data = padded(bits, bits_per_symbol(config));
  const std::vector<Complex> symbols = qam_map(data, order);
  std::vector<std::vector<Complex>> blocks;
  for (std::size_t pos = 0; pos < symbols.size(); pos += carriers) {
    blocks.emplace_back(symbols.begin() + static_cast<std::ptrdiff_t>(pos),
                        symbols.begin() + static_cast<std::ptrdiff_t>(pos + carriers));
  }
  return blocks;
}

std::vector<std::vector<double>> bipolar_blocks(std::span<const std::uint8_t> bits, const SchemeConfig& config) {
  const int n = ofdm_subcarriers(config.scheme);
  const std::vector<int> carriers = data_subcarriers(config.scheme);
  std::vector<std::vector<double>> out;
  std::vector<Complex> spectrum(static_cast<std::size_t>(n));
  for (const auto& block : data_symbols(bits, config)) {
    std::fill(spectrum.begin(), spectrum.end(), Complex{});
    for (std::size_t i = 0; i < carriers.size(); ++i) {
      const auto k = static_cast<std::size_t>(carriers[i]);
      spectrum[k] = block[i];
      spectrum[static_cast<std::size_t>(n) - k] = std::conj(block[i]);
    }
    fft(spectrum, /*inverse=*/true);
    std::vector<double> time(static_cast<std::size_t>(n));
    std::transform(spectrum.begin(), spectrum.end(), time.begin(), [](Complex c) { return c.real(); });
    out.push_back(std::move(time));
  }
  return out;
}

std::vector<std::vector<Complex>> recover_symbols(const Waveform& waveform, const SchemeConfig& config) {
  validate(config);
  const int n = ofdm_subcarriers(config.scheme);
  const std::size_t blocks = whole_symbols(waveform, static_cast<std::size_t>(n));
  const std::vector<int> carriers = data_subcarriers(config.scheme);
  const double gain = std::holds_alternative<AcoOfdm>(config.scheme) ? 2.0 : 1.0;
  std::vector<std::vector<Complex>> out;
  out.reserve(blocks);
  std::vector<Complex> spectrum(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < blocks; ++b) {
    for (int i = 0; i < n; ++i) spectrum[static_cast<std::size_t>(i)] = waveform.samples[b * n + i];
    fft(spectrum, /*inverse=*/false);
    std::vector<Complex> data;
    data.reserve(carriers.size());
    for (int k : carriers) data.push_back(gain * spectrum[static_cast<std::size_t>(k)]);
    out.push_back(std::move(data));
  }
  return out;
}

double evm(std::span<const std::vector<Complex>> reference, std::span<const std::vector<Complex>> received) {
  if (reference.size() != received.size()) throw ParameterError("EVM inputs differ in block count");
  double err = 0.0, ref = 0.0;
  for (std::size_t b = 0; b < reference.size(); ++b) {
    if (reference[b].size() != received[b].size()) throw ParameterError("EVM inputs differ in block size");
    for (std::size_t i = 0; i < reference[b].size(); ++i) {
      err += std::norm(received[b][i] - reference[b][i]);
      ref += std::norm(reference[b][i]);
    }
  }
  return ref > 0.0 ? std::sqrt(err / ref) : 0.0;
}

}  // namespace ofdm
}  // namespace lifisim::modem
