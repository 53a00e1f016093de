#pragma once

#include <string>

namespace eonsurv {

// Locale-independent number text.
std::string format_sig(double value, int significant = 6);
// Shortest text that parses back to the same double.
std::string format_shortest(double value);

}  // namespace eonsurv
