#pragma once

#include <string>

namespace compactvis {

/// Shortest decimal that reads back to the same double.
std::string format_shortest(double v);

/// Fixed-point with `precision` decimals; never emits "-0".
std::string format_fixed(double v, int precision);

}  // namespace compactvis
