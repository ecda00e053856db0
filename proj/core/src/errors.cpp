#include "imcergo/errors.hpp"

namespace imcergo {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::PmfMass: return "PmfMass";
    case Errc::IncoherentIntervals: return "IncoherentIntervals";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::NotStronglyConnected: return "NotStronglyConnected";
    case Errc::SubsetNotClosed: return "SubsetNotClosed";
    case Errc::SubsetNotCommunicating: return "SubsetNotCommunicating";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::IntervalRowsPresent: return "IntervalRowsPresent";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

NoConvergence::NoConvergence(const std::string& what, std::size_t iterations,
                             double last_residual)
    : Error(Errc::NoConvergence, what), iterations_(iterations),
      last_residual_(last_residual) {}

} // namespace imcergo
