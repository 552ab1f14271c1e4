#pragma once

#include <stdexcept>
#include <string>

namespace nmq {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonHermitianInput : Error {
    using Error::Error;
};

struct InvalidState : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

struct ToleranceNotReached : Error {
    using Error::Error;
};

struct GridTooCoarse : Error {
    using Error::Error;
};

// Signals that a decay rate is being evaluated too close to a zero of G(t),
// where gamma_1 = -2 Re[Gdot/G] diverges. Carries the offending time.
struct PoleProximity : Error {
    double time;
    PoleProximity(const std::string& what, double t) : Error(what), time(t) {}
};

struct BranchError : Error {
    using Error::Error;
};

struct NotAvailable : Error {
    using Error::Error;
};

struct GeneratorUnavailable : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct NoCrossing : Error {
    using Error::Error;
};

}  // namespace nmq
