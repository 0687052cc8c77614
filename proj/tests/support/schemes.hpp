#pragma once

#include <random>
#include <vector>

#include "lifisim/modem.hpp"

namespace testing_support {

inline std::vector<lifisim::modem::SchemeConfig> default_schemes() {
  using namespace lifisim::modem;
  return {SchemeConfig{Ook{}},  SchemeConfig{Pwm{}},     SchemeConfig{Ppm{}},    SchemeConfig{Vppm{}},
          SchemeConfig{Oppm{}}, SchemeConfig{DcoOfdm{}}, SchemeConfig{AcoOfdm{}}};
}

inline lifisim::modem::Bits random_bits(std::mt19937_64& rng, std::size_t n) {
  lifisim::modem::Bits b(n);
  for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 1U);
  return b;
}

}  // namespace testing_support
