#ifndef SOLVDIFF_ERRORS_HPP
#define SOLVDIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace solvdiff {

// Base class for all library errors. Subclasses mirror the failure modes of
// the individual components so callers can catch precisely.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A series or iteration hit its term/step cap before reaching tolerance.
struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

// Gamma function evaluated at a non-positive integer.
struct PoleError : Error {
    explicit PoleError(const std::string& msg) : Error(msg) {}
};

struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& msg) : Error(msg) {}
};

// Requested a spectral quantity of a process without a discrete spectrum.
struct NoSpectrum : Error {
    explicit NoSpectrum(const std::string& msg) : Error(msg) {}
};

struct Unsupported : Error {
    explicit Unsupported(const std::string& msg) : Error(msg) {}
};

struct InvalidCoefficients : Error {
    explicit InvalidCoefficients(const std::string& msg) : Error(msg) {}
};

// The candidate gauge function h crossed zero on the validation grid.
struct NonPositiveH : Error {
    explicit NonPositiveH(const std::string& msg) : Error(msg) {}
};

struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& msg) : Error(msg) {}
};

struct BaseMismatch : Error {
    explicit BaseMismatch(const std::string& msg) : Error(msg) {}
};

// The dyadic integrability probe could not separate convergent from
// divergent behaviour (near-critical exponent).
struct InconclusiveIntegrability : Error {
    explicit InconclusiveIntegrability(const std::string& msg) : Error(msg) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& msg) : Error(msg) {}
};

struct DegenerateDerivative : Error {
    explicit DegenerateDerivative(const std::string& msg) : Error(msg) {}
};

// R(x) polynomial vanishes on the interval required by the family.
struct InvalidR : Error {
    explicit InvalidR(const std::string& msg) : Error(msg) {}
};

struct NumericBlowup : Error {
    explicit NumericBlowup(const std::string& msg) : Error(msg) {}
};

struct TooFewSamples : Error {
    explicit TooFewSamples(const std::string& msg) : Error(msg) {}
};

struct IOError : Error {
    explicit IOError(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace solvdiff

#endif
