#include "lifisim/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace lifisim::format {

std::string sig6(double v) {
  if (!std::isfinite(v)) return "NONE";
  if (v == 0.0) return "0.00000";
  // Exponent after rounding to six significant digits.
  std::array<char, 32> sci{};
  std::snprintf(sci.data(), sci.size(), "%.5e", v);
  const int exponent = std::atoi(std::strchr(sci.data(), 'e') + 1);
  if (exponent >= 5) {
    // Mantissa digits followed by zeros.
    std::string out = v < 0.0 ? "-" : "";
    for (const char* c = sci.data(); *c != 'e'; ++c) {
      if (*c >= '0' && *c <= '9') out += *c;
    }
    out.append(static_cast<std::size_t>(exponent - 5), '0');
    return out;
  }
  std::array<char, 400> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", 5 - exponent, v);
  return buf.data();
}

std::string shortest(double v) {
  if (!std::isfinite(v)) return "NONE";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string min_decimals(double v) {
  std::array<char, 64> buf{};
  for (int d = 1; d < 9; ++d) {
    std::snprintf(buf.data(), buf.size(), "%.*f", d, v);
    if (std::abs(std::strtod(buf.data(), nullptr) - v) < 1e-9) break;
  }
  return buf.data();
}

}  // namespace lifisim::format
