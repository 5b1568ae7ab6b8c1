#include "flexlex/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace flexlex {

unsigned resolve_thread_count(unsigned requested) {
    unsigned n = requested;
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FLEXLEX_THREADS")) {
        const std::string_view s(env);
        unsigned cap = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), cap);
        if (res.ec == std::errc() && cap > 0) n = std::min(n, cap);
    }
    return n;
}

}  // namespace flexlex
