#include "bosonic/error.hpp"

namespace bosonic {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DomainError: return "DomainError";
    case Errc::NoSignChange: return "NoSignChange";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::RangeExhausted: return "RangeExhausted";
    case Errc::ProfileMismatch: return "ProfileMismatch";
    case Errc::Infeasible: return "Infeasible";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TooManyModes: return "TooManyModes";
  }
  return "Unknown";
}

}  // namespace bosonic
