#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace imcergo {

enum class Errc {
    SchemaViolation,
    PmfMass,
    IncoherentIntervals,
    DuplicateLabel,
    DimensionMismatch,
    EmptySubset,
    NotStronglyConnected,
    SubsetNotClosed,
    SubsetNotCommunicating,
    NoConvergence,
    IntervalRowsPresent,
    CapExceeded,
    InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised when an iteration hits its cap before reaching the requested tolerance.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::size_t iterations, double last_residual);

    std::size_t iterations() const noexcept { return iterations_; }
    double last_residual() const noexcept { return last_residual_; }

private:
    std::size_t iterations_;
    double last_residual_;
};

} // namespace imcergo
