#include "haltlab/algorithm.hpp"

namespace haltlab {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::QR: return "QR";
    case Algorithm::QRShifted: return "QRShifted";
    case Algorithm::Jacobi: return "Jacobi";
    case Algorithm::TodaT1: return "TodaT1";
    case Algorithm::CG: return "CG";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::QR, Algorithm::QRShifted, Algorithm::Jacobi, Algorithm::TodaT1,
                 Algorithm::CG})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

}  // namespace haltlab
