#pragma once

#include <stdexcept>
#include <string>

namespace partlin {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression could not be parsed against the grammar.
class ParseError : public Error {
public:
    using Error::Error;
};

// Evaluation outside the admissible domain (log of nonpositive, division
// by zero, t outside a declared time domain).
class DomainError : public Error {
public:
    using Error::Error;
};

// Adaptive integrator could not meet the requested tolerance.
class StepFailure : public Error {
public:
    using Error::Error;
};

// Solution norm exceeded the blow-up cap.
class BlowUp : public Error {
public:
    using Error::Error;
};

class HorizonTooShort : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class OrderingError : public Error {
public:
    using Error::Error;
};

class ParamError : public Error {
public:
    using Error::Error;
};

class EnvelopeViolation : public Error {
public:
    using Error::Error;
};

// The decay exponent of an improper integral is not negative, so no
// finite truncation horizon can certify the requested tail tolerance.
class TailBoundUnavailable : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class InverseDiverged : public Error {
public:
    using Error::Error;
};

class GapFailure : public Error {
public:
    using Error::Error;
};

class SpectrumNotSeparated : public Error {
public:
    using Error::Error;
};

class IllConditioned : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

} // namespace partlin
