#pragma once

#include <string>

namespace haltlab {

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

}  // namespace haltlab
