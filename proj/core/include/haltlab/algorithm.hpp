#pragma once

#include <optional>
#include <string_view>

namespace haltlab {

enum class Algorithm { QR, QRShifted, Jacobi, TodaT1, CG };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

// QR, QRShifted and Jacobi iterate a map on symmetric matrices.
constexpr bool is_discrete_eigen(Algorithm a) {
  return a == Algorithm::QR || a == Algorithm::QRShifted || a == Algorithm::Jacobi;
}

}  // namespace haltlab
