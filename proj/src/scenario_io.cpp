#include "lifisim/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lifisim::io {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw ScenarioFileError(path + ": " + msg);
}

// Field-by-field reader over one JSON object. finish() rejects any key
// that was never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema_error(path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& get(const std::string& key) {
    if (!has(key)) schema_error(field(key), "missing required field");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) schema_error(field(key), "expected a number");
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) schema_error(field(key), "expected an integer");
    return v.get<long long>();
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) schema_error(field(key), "expected a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  geometry::Point3 point(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
      schema_error(field(key), "expected an array of three numbers");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }

  geometry::Direction3 direction(const std::string& key, geometry::Direction3 fallback) {
    if (!has(key)) return fallback;
    try {
      return geometry::Direction3::from_unit(point(key), 1e-6);
    } catch (const GeometryError& e) {
      schema_error(field(key), e.what());
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) schema_error(field(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

geometry::Room read_room(ObjectReader r) {
  geometry::Room room;
  room.width = r.number("width");
  room.depth = r.number("depth");
  room.height = r.number("height");
  room.receiver_plane_height = r.number("receiver_plane_height");
  r.finish();
  return room;
}

channel::LedPanel read_panel(ObjectReader r) {
  channel::LedPanel p;
  p.position = r.point("position");
  p.normal = r.direction("normal", geometry::Direction3::down());
  p.semi_angle_deg = r.number("semi_angle_deg", p.semi_angle_deg);
  p.optical_power_w = r.number("optical_power_w", p.optical_power_w);
  p.brightness = r.number("brightness", p.brightness);
  p.led_count = static_cast<int>(r.integer("led_count", p.led_count));
  const std::string mobility = r.string("mobility", "fixed");
  if (mobility == "fixed") {
    if (r.has("max_tilt_deg")) schema_error(r.field("max_tilt_deg"), "only valid for moveable panels");
    p.mobility = channel::FixedMount{};
  } else if (mobility == "moveable") {
    p.mobility = channel::MoveableMount{r.number("max_tilt_deg", 60.0)};
  } else {
    schema_error(r.field("mobility"), "expected \"fixed\" or \"moveable\"");
  }
  r.finish();
  return p;
}

channel::Receiver read_receiver(ObjectReader r) {
  channel::Receiver rx;
  rx.position = r.point("position");
  rx.normal = r.direction("normal", geometry::Direction3::up());
  rx.area_m2 = r.number("area_m2", rx.area_m2);
  rx.fov_deg = r.number("fov_deg", rx.fov_deg);
  rx.filter_gain = r.number("filter_gain", rx.filter_gain);
  rx.concentrator_index = r.number("concentrator_index", rx.concentrator_index);
  const std::string det = r.string("detector", "pin");
  if (det == "pin") {
    rx.detector = channel::DetectorKind::Pin;
  } else if (det == "apd") {
    rx.detector = channel::DetectorKind::Apd;
  } else {
    schema_error(r.field("detector"), "expected \"pin\" or \"apd\"");
  }
  rx.responsivity_gain = r.number("responsivity_gain", rx.responsivity_gain);
  r.finish();
  return rx;
}

modem::SchemeConfig read_scheme(ObjectReader r) {
  const std::string name = r.string("name");
  modem::SchemeConfig cfg;
  try {
    cfg = parse_scheme_name(name);
  } catch (const ConfigError& e) {
    schema_error(r.field("name"), e.what());
  }
  auto as_int = [&](const std::string& key, int fallback) { return static_cast<int>(r.integer(key, fallback)); };
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, modem::Ook>) {
          s.dimming = r.number("dimming", s.dimming);
        } else if constexpr (std::is_same_v<T, modem::Pwm>) {
          s.dimming = r.number("dimming", s.dimming);
          s.width_delta = r.number("width_delta", s.width_delta);
          s.resolution = as_int("resolution", s.resolution);
        } else if constexpr (std::is_same_v<T, modem::Ppm>) {
          s.slots = as_int("slots", s.slots);
        } else if constexpr (std::is_same_v<T, modem::Vppm>) {
          s.dimming = r.number("dimming", s.dimming);
          s.resolution = as_int("resolution", s.resolution);
        } else if constexpr (std::is_same_v<T, modem::Oppm>) {
          s.chips = as_int("chips", s.chips);
          s.pulse_width = as_int("pulse_width", s.pulse_width);
        } else if constexpr (std::is_same_v<T, modem::DcoOfdm>) {
          s.subcarriers = as_int("subcarriers", s.subcarriers);
          s.qam_order = as_int("qam_order", s.qam_order);
          s.bias_db = r.number("bias_db", s.bias_db);
        } else {
          s.subcarriers = as_int("subcarriers", s.subcarriers);
          s.qam_order = as_int("qam_order", s.qam_order);
        }
      },
      cfg.scheme);
  cfg.slot_rate_hz = r.number("slot_rate_hz", cfg.slot_rate_hz);
  r.finish();
  return cfg;
}

Strategy read_strategy(const json& j) {
  if (!j.is_string()) schema_error("$.strategy", "expected a string");
  const auto s = j.get<std::string>();
  for (Strategy st : {Strategy::FixedWide, Strategy::Dedicated, Strategy::Moveable, Strategy::Hybrid}) {
    if (s == strategy_name(st)) return st;
  }
  schema_error("$.strategy", "expected one of fixed_wide, dedicated, moveable, hybrid");
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

json point_json(geometry::Point3 p) { return json::array({p.x, p.y, p.z}); }

}  // namespace

modem::SchemeConfig parse_scheme_name(std::string_view name) {
  auto parse_int = [&](std::string_view digits) {
    int v = 0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || res.ec != std::errc{} || res.ptr != digits.data() + digits.size()) {
      throw ConfigError("unknown scheme '" + std::string(name) + "'; valid: " + std::string(kSchemeNames));
    }
    return v;
  };
  modem::SchemeConfig cfg;
  if (name == "ook") {
    cfg.scheme = modem::Ook{};
  } else if (name == "pwm") {
    cfg.scheme = modem::Pwm{};
  } else if (name == "vppm") {
    cfg.scheme = modem::Vppm{};
  } else if (name == "dco-ofdm") {
    cfg.scheme = modem::DcoOfdm{};
  } else if (name == "aco-ofdm") {
    cfg.scheme = modem::AcoOfdm{};
  } else if (name.starts_with("oppm")) {
    const auto rest = name.substr(4);
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError("unknown scheme '" + std::string(name) + "'; valid: " + std::string(kSchemeNames));
    }
    cfg.scheme = modem::Oppm{parse_int(rest.substr(0, comma)), parse_int(rest.substr(comma + 1))};
  } else if (name.starts_with("ppm")) {
    cfg.scheme = modem::Ppm{parse_int(name.substr(3))};
  } else {
    throw ConfigError("unknown scheme '" + std::string(name) + "'; valid: " + std::string(kSchemeNames));
  }
  modem::validate(cfg);
  return cfg;
}

ScenarioFile parse_scenario(std::string_view json_text, std::string_view source) {
  const std::string src(source);
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioFileError(src + ":" + line_col(json_text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }

  ScenarioFile out;
  try {
    ObjectReader top(doc, "$");
    Scenario& s = out.scenario;
    s.room = read_room(ObjectReader(top.get("room"), "$.room"));

    const json& panels = top.get("panels");
    if (!panels.is_array()) schema_error("$.panels", "expected an array");
    for (std::size_t i = 0; i < panels.size(); ++i) {
      s.panels.push_back(read_panel(ObjectReader(panels[i], "$.panels[" + std::to_string(i) + "]")));
    }
    const json& receivers = top.get("receivers");
    if (!receivers.is_array()) schema_error("$.receivers", "expected an array");
    for (std::size_t i = 0; i < receivers.size(); ++i) {
      s.receivers.push_back(read_receiver(ObjectReader(receivers[i], "$.receivers[" + std::to_string(i) + "]")));
    }

    ObjectReader noise(top.get("noise"), "$.noise");
    const bool has_var = noise.has("variance");
    const bool has_anchor = noise.has("anchor");
    if (has_var == has_anchor) schema_error("$.noise", "give exactly one of \"variance\" or \"anchor\"");
    if (has_var) {
      s.noise.variance = noise.number("variance");
    } else {
      ObjectReader a(noise.get("anchor"), "$.noise.anchor");
      out.anchor = Anchor{a.number("theta_deg"), a.number("phi_deg"), a.number("snr_db")};
      a.finish();
    }
    noise.finish();

    s.scheme = read_scheme(ObjectReader(top.get("scheme"), "$.scheme"));
    s.strategy = read_strategy(top.get("strategy"));
    const long long designated = top.integer("designated_panel", 0);
    if (designated < 0) schema_error("$.designated_panel", "must be non-negative");
    s.designated_panel = static_cast<std::size_t>(designated);
    top.finish();

    if (out.anchor) s.noise = channel::calibrate_to_anchor(s, out.anchor->theta_deg, out.anchor->phi_deg, out.anchor->snr_db);
    s.validate();
  } catch (const ScenarioFileError& e) {
    throw ScenarioFileError(src + ": " + e.what());
  } catch (const Error& e) {
    throw ScenarioFileError(src + ": " + e.what());
  } catch (const json::exception& e) {
    throw ScenarioFileError(src + ": " + e.what());
  }
  return out;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string());
}

std::string to_json(const Scenario& s, const std::optional<Anchor>& anchor) {
  json doc;
  doc["room"] = {{"width", s.room.width},
                 {"depth", s.room.depth},
                 {"height", s.room.height},
                 {"receiver_plane_height", s.room.receiver_plane_height}};
  doc["panels"] = json::array();
  for (const auto& p : s.panels) {
    json jp = {{"position", point_json(p.position)},
               {"normal", point_json(p.normal.vec())},
               {"semi_angle_deg", p.semi_angle_deg},
               {"optical_power_w", p.optical_power_w},
               {"brightness", p.brightness},
               {"led_count", p.led_count},
               {"mobility", p.moveable() ? "moveable" : "fixed"}};
    if (p.moveable()) jp["max_tilt_deg"] = p.max_tilt_deg();
    doc["panels"].push_back(jp);
  }
  doc["receivers"] = json::array();
  for (const auto& r : s.receivers) {
    doc["receivers"].push_back({{"position", point_json(r.position)},
                                {"normal", point_json(r.normal.vec())},
                                {"area_m2", r.area_m2},
                                {"fov_deg", r.fov_deg},
                                {"filter_gain", r.filter_gain},
                                {"concentrator_index", r.concentrator_index},
                                {"detector", r.detector == channel::DetectorKind::Pin ? "pin" : "apd"},
                                {"responsivity_gain", r.responsivity_gain}});
  }
  if (anchor) {
    doc["noise"] = {{"anchor", {{"theta_deg", anchor->theta_deg}, {"phi_deg", anchor->phi_deg}, {"snr_db", anchor->snr_db}}}};
  } else {
    doc["noise"] = {{"variance", s.noise.variance}};
  }
  json scheme = {{"name", modem::scheme_name(s.scheme)}, {"slot_rate_hz", s.scheme.slot_rate_hz}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, modem::Ook>) {
          scheme["dimming"] = v.dimming;
        } else if constexpr (std::is_same_v<T, modem::Pwm>) {
          scheme["dimming"] = v.dimming;
          scheme["width_delta"] = v.width_delta;
          scheme["resolution"] = v.resolution;
        } else if constexpr (std::is_same_v<T, modem::Ppm>) {
          scheme["slots"] = v.slots;
        } else if constexpr (std::is_same_v<T, modem::Vppm>) {
          scheme["dimming"] = v.dimming;
          scheme["resolution"] = v.resolution;
        } else if constexpr (std::is_same_v<T, modem::Oppm>) {
          scheme["chips"] = v.chips;
          scheme["pulse_width"] = v.pulse_width;
        } else if constexpr (std::is_same_v<T, modem::DcoOfdm>) {
          scheme["subcarriers"] = v.subcarriers;
          scheme["qam_order"] = v.qam_order;
          scheme["bias_db"] = v.bias_db;
        } else {
          scheme["subcarriers"] = v.subcarriers;
          scheme["qam_order"] = v.qam_order;
        }
      },
      s.scheme.scheme);
  doc["scheme"] = scheme;
  doc["strategy"] = std::string(strategy_name(s.strategy));
  doc["designated_panel"] = s.designated_panel;
  return doc.dump(2) + "\n";
}

}  // namespace lifisim::io
