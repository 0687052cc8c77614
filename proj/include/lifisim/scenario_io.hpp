#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lifisim/error.hpp"
#include "lifisim/scenario.hpp"

namespace lifisim::io {

/// Schema or syntax violation in a scenario document. The message carries
/// the source name and either line:column or the offending field path.
class ScenarioFileError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

/// The file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

struct Anchor {
  double theta_deg = 65.0;
  double phi_deg = 45.0;
  double snr_db = 128.0;
};

/// A parsed scenario plus the calibration anchor its noise section named,
/// if any. When an anchor is present, scenario.noise already holds the
/// calibrated variance.
struct ScenarioFile {
  Scenario scenario;
  std::optional<Anchor> anchor;
};

ScenarioFile parse_scenario(std::string_view json_text, std::string_view source = "<scenario>");
ScenarioFile load_scenario(const std::filesystem::path& path);

/// JSON document for a scenario. The noise section is written as an anchor
/// when one is given and as an explicit variance otherwise.
std::string to_json(const Scenario& scenario, const std::optional<Anchor>& anchor = std::nullopt);

/// Parses a scheme name: ook, pwm, ppm<L>, vppm, oppm<n>,<w>, dco-ofdm, aco-ofdm.
modem::SchemeConfig parse_scheme_name(std::string_view name);

inline constexpr std::string_view kSchemeNames = "ook, pwm, ppm<L>, vppm, oppm<n>,<w>, dco-ofdm, aco-ofdm";

}  // namespace lifisim::io
