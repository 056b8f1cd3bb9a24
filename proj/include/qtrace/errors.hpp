#pragma once

#include <stdexcept>
#include <string>

namespace qtrace {

// Every library error carries a stable kind string so the CLI can report it.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)), message_(msg) {}
    const std::string& kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string kind_;
    std::string message_;
};

#define QTRACE_ERROR(Name)                                                   \
    struct Name : Error {                                                    \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}         \
    }

QTRACE_ERROR(ParseError);
QTRACE_ERROR(OverflowError);
QTRACE_ERROR(GluingError);
QTRACE_ERROR(ConnectivityError);
QTRACE_ERROR(MismatchedAlgebra);
QTRACE_ERROR(UnknownEdge);
QTRACE_ERROR(DegenerateCorner);
QTRACE_ERROR(JunctureMismatch);
QTRACE_ERROR(ElevationClash);
QTRACE_ERROR(StateDomainError);
QTRACE_ERROR(OrientationError);
QTRACE_ERROR(NotSimple);
QTRACE_ERROR(LayoutError);
QTRACE_ERROR(ArityMismatch);
QTRACE_ERROR(StateArityMismatch);
QTRACE_ERROR(NoCrossing);
QTRACE_ERROR(BadConfig);
QTRACE_ERROR(ZeroFactor);
QTRACE_ERROR(UnbalancedJuncture);
QTRACE_ERROR(ParityError);

#undef QTRACE_ERROR

}  // namespace qtrace
