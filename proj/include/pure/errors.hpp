#pragma once

#include <stdexcept>
#include <string>

namespace pure {

// Base class for all library errors so callers can catch pure failures as one family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyInput : Error {
    using Error::Error;
};

struct InvalidBox : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(std::size_t line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line(line) {}
    // For document-level failures where no single input line is at fault.
    explicit ParseError(const std::string& reason) : Error(reason), line(0) {}
    std::size_t line;
};

struct DegenerateBox : Error {
    using Error::Error;
};

struct InsufficientSamples : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct ConstantSeries : Error {
    using Error::Error;
};

struct TooFewSamples : Error {
    using Error::Error;
};

struct InvalidThreshold : Error {
    using Error::Error;
};

struct InfeasibleScene : Error {
    using Error::Error;
};

struct MissingGroundTruth : Error {
    using Error::Error;
};

}  // namespace pure
