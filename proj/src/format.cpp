#include "fdrclass/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace fdrclass {

std::string format_double(double x)
{
    if (!std::isfinite(x)) {
        return "NA";
    }
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

} // namespace fdrclass
