#pragma once

#include <string>

namespace lifisim::format {

/// Fixed-point with six significant digits ("128.000", "0.0000100000").
/// Non-finite values render as "NONE".
std::string sig6(double v);

/// Shortest round-trip representation ("65", "12.6").
std::string shortest(double v);

/// Fixed-point with the fewest decimals (at least one) that represents v to
/// 1e-9 ("0.0", "12.5", "2.25").
std::string min_decimals(double v);

}  // namespace lifisim::format
