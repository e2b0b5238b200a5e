#include "chshkit/error.hpp"

namespace chshkit {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotPsd: return "NotPSD";
    case Errc::TraceNotOne: return "TraceNotOne";
    case Errc::NotPositive: return "NotPositive";
    case Errc::GammaOutOfRange: return "GammaOutOfRange";
    case Errc::BlochVectorTooLong: return "BlochVectorTooLong";
    case Errc::NonUnitDirection: return "NonUnitDirection";
    case Errc::EmptyCounts: return "EmptyCounts";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NonpositiveError: return "NonpositiveError";
    case Errc::EmptyData: return "EmptyData";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace chshkit
