#include "flexlex/format.hpp"

#include <charconv>
#include <cmath>

namespace flexlex {

std::string format_real(double value, bool full_precision) {
    if (std::isnan(value)) return "NA";
    char buf[64];
    const auto res = full_precision ? std::to_chars(buf, buf + sizeof buf, value)
                                    : std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

}  // namespace flexlex
