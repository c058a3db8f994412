#pragma once

#include <stdexcept>
#include <string>

namespace poolparty {

// Base for everything this library throws on purpose. Catching this (or a
// specific subclass) is part of the API; anything else escaping is a bug.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- protocol / codec ---

// Message length is not a multiple of the packet width. No implicit padding:
// the caller decides how to pad, we refuse to guess.
struct NonDivisibleMessage : Error {
    using Error::Error;
};

// Chunk value does not fit the requested width.
struct ValueOutOfRange : Error {
    using Error::Error;
};

// Pool too small to carry even a 1-bit packet (needs 2^1 + 1 = 3 slots).
struct PoolTooSmall : Error {
    using Error::Error;
};

// Role swap requested while a transfer leg is still in flight.
struct RoleSwapUnavailable : Error {
    using Error::Error;
};

// --- pool ---

// Pool created with a non-positive limit.
struct InvalidLimit : Error {
    using Error::Error;
};

// A release the caller believed valid was rejected; signals a simulator bug,
// not a modeled browser behavior.
struct PoolAccessFailure : Error {
    using Error::Error;
};

// --- simulation ---

// Event scheduled before the current virtual time.
struct PastEvent : Error {
    using Error::Error;
};

// run_until_idle processed more events than the configured cap; the usual
// cause is a protocol pathology that keeps rescheduling itself forever.
struct EventLimitExceeded : Error {
    using Error::Error;
};

// Distribution parameter out of domain (negative rate, p outside [0,1], ...).
struct InvalidDistribution : Error {
    using Error::Error;
};

// --- experiments / config ---

// Bisection could not bracket the target success rate.
struct CalibrationFailed : Error {
    using Error::Error;
};

// Sweep over a parameter this build does not know.
struct UnknownParameter : Error {
    using Error::Error;
};

// Scenario file is syntactically broken (bad line, unknown key, bad number).
struct ParseError : Error {
    using Error::Error;
};

// Scenario parsed fine but violates a protocol or pool invariant.
struct ValidationError : Error {
    using Error::Error;
};

// File could not be read or written.
struct IoError : Error {
    using Error::Error;
};

}  // namespace poolparty
