#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spinsync {

enum class ErrorKind {
    InvalidArgument,
    MixedSector,
    DegenerateLimitCycle,
    SingularCoherenceBlock,
    ZeroResponse,
    DegenerateSteadyState,
    NonDiagonalizable,
    InvalidConfig,
};

std::string_view error_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

}  // namespace spinsync
