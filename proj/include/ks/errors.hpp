#pragma once

#include <stdexcept>
#include <string>

namespace ks {

enum class ErrorKind {
    FamilyMismatch,
    PointNotInLine,
    EndpointsOutOfOrder,
    NoProgress,
    ExposeZero,
    JunctionMismatch,
    TagAbsent,
    NotContinuousDeclared,
    NotRegulated,
    NotNBV,
    UnsupportedSet,
    InvalidRegularity,
    NotAmenable,
    NotNondecreasing,
    SystemNotFine,
    NotGDifferentiable,
    ProbeFailed,
    PreconditionViolated,
    OverlappingSets,
    HypothesisViolated,
    NotAdmissible,
    SeriesDivergent,
    ParseError,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

    ErrorKind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

} // namespace ks
