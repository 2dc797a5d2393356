#pragma once

#include <stdexcept>
#include <string>

namespace bnsim {

// Base class for all engine errors. Subclasses map to distinct CLI exit
// codes (see exit_code_for and the README).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document (syntax, unknown node/state label).
class ParseError : public Error {
public:
    using Error::Error;
};

// A network violated its invariants where a valid one was required.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Graph-structure problem: unknown id, missing arc, cycle.
class StructuralError : public Error {
public:
    using Error::Error;
};

// An operation's stated precondition does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Observed evidence has probability zero; posteriors are undefined.
class ImpossibleEvidenceError : public Error {
public:
    using Error::Error;
};

// Joint state space exceeds the configured enumeration cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

// An estimate with zero total weight (or zero accepted trials) was queried.
class UndefinedEstimateError : public Error {
public:
    using Error::Error;
};

// Evidential integration got stuck: a required reversal would create a
// cycle under every ordering the integrator tries.
class IntegrationError : public Error {
public:
    using Error::Error;
};

// Sampler runtime failure: Gibbs initialization retries exhausted or an
// inconsistent state reached during a sweep.
class SamplingError : public Error {
public:
    using Error::Error;
};

// Process exit code for a caught error; 0 is success, 1 is reserved for
// command-line usage errors.
int exit_code_for(const std::exception& e);

} // namespace bnsim
