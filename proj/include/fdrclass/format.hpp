#ifndef FDRCLASS_FORMAT_HPP
#define FDRCLASS_FORMAT_HPP

#include <string>

namespace fdrclass {

/// Shortest decimal text that parses back to exactly the same double.
/// Non-finite values print as "NA".
std::string format_double(double x);

} // namespace fdrclass

#endif // FDRCLASS_FORMAT_HPP
