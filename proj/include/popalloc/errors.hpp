#pragma once

// Exception hierarchy. Everything the library throws derives from
// popalloc::Error; the CLI maps subclasses onto process exit codes
// (InvalidConfig -> 2, everything else -> 3).

#include <stdexcept>

namespace popalloc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A SystemConfig field violates an invariant (negative capacity,
// beta_min > beta_max, non-finite value, ...).
class InvalidConfig : public Error {
public:
    using Error::Error;
};

// Admission ceiling exceeded: session_count * beta_min > capacity.
class OverCapacity : public Error {
public:
    using Error::Error;
};

class DuplicateSessionId : public Error {
public:
    using Error::Error;
};

class RankOutOfRange : public Error {
public:
    using Error::Error;
};

class BandwidthOutOfRange : public Error {
public:
    using Error::Error;
};

// Scenario specification is unsatisfiable (e.g. scenario 2 with one session).
class InvalidSpec : public Error {
public:
    using Error::Error;
};

// Event trace violates the session lifecycle or time ordering.
class MalformedTrace : public Error {
public:
    using Error::Error;
};

// Malformed input data (snapshot or trace CSV).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace popalloc
