#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lifisim::modem {

using Bits = std::vector<std::uint8_t>;

/// Non-negative intensity samples. A slot spans samples_per_slot samples.
struct Waveform {
  std::vector<double> samples;
  int samples_per_slot = 1;
  double slot_rate_hz = 1e6;
  /// Number of payload bits before symbol padding, when known.
  std::optional<std::size_t> payload_bits;
};

/// On-off keying. Away from 50 % dimming a fraction |2d - 1| of the frame is
/// compensation slots held at the majority level.
struct Ook {
  double dimming = 0.5;
};

/// Binary pulse-width modulation: widths d - delta (bit 0) and d + delta (bit 1).
struct Pwm {
  double dimming = 0.5;
  double width_delta = 0.1;
  int resolution = 20;  ///< samples per symbol
};

/// L-slot pulse position modulation, log2(L) bits per symbol.
struct Ppm {
  int slots = 4;
};

/// Binary variable PPM. Each symbol is two slots; the pulse width sets the
/// dimming level and its position (leading or trailing) carries the bit.
struct Vppm {
  double dimming = 0.5;
  int resolution = 20;  ///< samples per symbol (two slots)
};

/// Overlapping PPM: one pulse of `pulse_width` contiguous chips starting at
/// any of chips - pulse_width + 1 positions.
struct Oppm {
  int chips = 8;
  int pulse_width = 4;
};

/// DC-biased optical OFDM. Bias is B = k * sigma with bias_db = 10 log10(k^2 + 1).
struct DcoOfdm {
  int subcarriers = 64;
  int qam_order = 4;
  double bias_db = 13.0;
};

/// Asymmetrically clipped optical OFDM, data on odd subcarriers only.
struct AcoOfdm {
  int subcarriers = 64;
  int qam_order = 4;
};

using Scheme = std::variant<Ook, Pwm, Ppm, Vppm, Oppm, DcoOfdm, AcoOfdm>;

struct SchemeConfig {
  Scheme scheme = Ook{};
  double slot_rate_hz = 1e6;
};

struct SchemeMetrics {
  double bits_per_slot = 0.0;
  double duty_cycle = 0.0;
  double rate_factor = 1.0;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const SchemeConfig& config);

std::string scheme_name(const SchemeConfig& config);

/// Data bits carried per modulation symbol.
std::size_t bits_per_symbol(const SchemeConfig& config);

/// Samples per modulation symbol (OOK compensation slots excluded).
std::size_t samples_per_symbol(const SchemeConfig& config);

/// Encodes bits, zero-padding to a whole symbol. Empty input yields an
/// empty waveform.
Waveform encode(std::span<const std::uint8_t> bits, const SchemeConfig& config);

/// Maximum-likelihood per-symbol detection. Returns payload_bits bits when
/// the waveform records it, otherwise every decoded bit. Throws FramingError
/// when the length is not a whole frame.
Bits decode(const Waveform& waveform, const SchemeConfig& config);

SchemeMetrics scheme_metrics(const SchemeConfig& config);

/// Expected per-sample AC (mean-removed) power of the encoded signal for
/// uniformly random data. The link simulator scales noise against it.
double signal_power(const SchemeConfig& config);

/// Expected mean intensity of the encoded signal.
double mean_intensity(const SchemeConfig& config);

/// Number of OOK slots (data + compensation) used for n data bits.
std::size_t ook_frame_slots(std::size_t data_bits, double dimming);

namespace ofdm {

using Complex = std::complex<double>;

/// Unit-average-energy Gray-coded square QAM.
std::vector<Complex> qam_map(std::span<const std::uint8_t> bits, int order);
Bits qam_slice(std::span<const Complex> symbols, int order);

/// Indices of data-bearing subcarriers (below N/2; mirrored halves implied).
std::vector<int> data_subcarriers(const Scheme& scheme);

/// Standard deviation of the unclipped bipolar time signal.
double time_signal_sigma(int subcarriers, std::size_t data_carriers);

/// Data-carrier symbols for each OFDM block of the padded bit stream.
std::vector<std::vector<Complex>> data_symbols(std::span<const std::uint8_t> bits,
                                              const SchemeConfig& config);

/// Real bipolar time-domain blocks before biasing or clipping.
std::vector<std::vector<double>> bipolar_blocks(std::span<const std::uint8_t> bits,
                                               const SchemeConfig& config);

/// Equalized data-carrier symbols recovered from a received waveform
/// (ACO-OFDM includes the x2 clipping compensation).
std::vector<std::vector<Complex>> recover_symbols(const Waveform& waveform, const SchemeConfig& config);

/// Root-mean-square error vector magnitude relative to reference power.
double evm(std::span<const std::vector<Complex>> reference,
           std::span<const std::vector<Complex>> received);

}  // namespace ofdm

/// In-place radix-2 FFT with unitary 1/sqrt(N) scaling. `inverse` selects
/// the sign of the exponent. Size must be a power of two.
void fft(std::span<std::complex<double>> data, bool inverse);

}  // namespace lifisim::modem
