#pragma once

#include <stdexcept>
#include <string>

namespace odospec {

/// Base class of every error raised by the kernel.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two scalars living in distinct quadratic extensions were combined.
struct MixedContextError : Error {
    using Error::Error;
};

/// A zero-test (or residue, or division) could not be decided because the
/// truncated data runs out before the confidence threshold.
struct InconclusivePrecision : Error {
    explicit InconclusivePrecision(const std::string& what, long attained = 0)
        : Error(what), attained_prec(attained) {}
    long attained_prec;
};

/// A second, incompatible square root was requested in a context that
/// already owns one.
struct IrrationalSupport : Error {
    using Error::Error;
};

/// The c2 coefficient of a family constructor has a pole at z = 0.
struct IrregularC2 : Error {
    using Error::Error;
};

/// The two classification pipelines disagree.  Fatal by design.
struct ConsistencyError : Error {
    using Error::Error;
};

/// A series valuation fell below the global pole-order cap.
struct PoleCapError : Error {
    using Error::Error;
};

/// A pseudo-differential computation needs more kept depth than available.
struct DepthExhausted : Error {
    using Error::Error;
};

/// Malformed textual input (expressions, rationals, configs).
struct ParseError : Error {
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(make(what, line, column)), line(line), column(column) {}
    int line;
    int column;

private:
    static std::string make(const std::string& what, int line, int column) {
        if (line <= 0) return what;
        return what + " at line " + std::to_string(line) + ", column " + std::to_string(column);
    }
};

/// A job configuration or an operation precondition failed validation.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace odospec
