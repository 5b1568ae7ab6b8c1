#pragma once

#include <string>

namespace flexlex {

// '.' decimal point regardless of the global locale; 6 significant digits, or round-trip precision.
std::string format_real(double value, bool full_precision = false);

}  // namespace flexlex
