#include "eonsurv/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace eonsurv {

std::string format_sig(double value, int significant) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                           std::chars_format::general, significant);
  return std::string(buf.data(), res.ptr);
}

std::string format_shortest(double value) {
  if (value == 0.0) value = 0.0;
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

}  // namespace eonsurv
