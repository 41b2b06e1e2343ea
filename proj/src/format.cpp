#include "compactvis/format.hpp"

#include <array>
#include <charconv>

namespace compactvis {

std::string format_shortest(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v == 0.0 ? 0.0 : v);
  return std::string(buf.data(), res.ptr);
}

std::string format_fixed(double v, int precision) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, precision);
  std::string out(buf.data(), res.ptr);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

}  // namespace compactvis
