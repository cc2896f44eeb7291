#pragma once

#include <stdexcept>
#include <string>

namespace simplex_neumann {

/// Base class of every error raised by the library. `kind()` is the stable,
/// machine-readable name reported by the command-line tool.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SIMPLEX_NEUMANN_ERROR(Name)                                            \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& message) : Error(#Name, message) {}   \
    }

SIMPLEX_NEUMANN_ERROR(DegenerateSimplex);
SIMPLEX_NEUMANN_ERROR(FaceIndexOutOfRange);
SIMPLEX_NEUMANN_ERROR(InvalidCoefficients);
SIMPLEX_NEUMANN_ERROR(IdenticallyZeroMode);
SIMPLEX_NEUMANN_ERROR(QuadratureDimensionMismatch);
SIMPLEX_NEUMANN_ERROR(ResourceLimit);
SIMPLEX_NEUMANN_ERROR(NumericalBreakdown);
SIMPLEX_NEUMANN_ERROR(NoSuchTriangle);
SIMPLEX_NEUMANN_ERROR(InconsistentData);
SIMPLEX_NEUMANN_ERROR(EpsilonTooLarge);
SIMPLEX_NEUMANN_ERROR(InvalidArgument);

#undef SIMPLEX_NEUMANN_ERROR

} // namespace simplex_neumann
