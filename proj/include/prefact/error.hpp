#pragma once

#include <stdexcept>
#include <string>

namespace prefact {

// Base class for everything the engine can throw on bad data or bad state.
// The CLI maps these to exit code 2; usage problems are handled by the
// argument parser and exit with 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Well-formed input that violates a record invariant or a value range.
class ValidationError : public Error {
public:
    using Error::Error;
};

// No available evidence channel to score from.
class InsufficientEvidenceError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite loss. Names the offending epoch.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& msg, int epoch)
        : Error(msg + " at epoch " + std::to_string(epoch)), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

// Profile store I/O failure or corrupt snapshot file.
class StoreError : public Error {
public:
    using Error::Error;
};

// Lookup of an id or domain that does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace prefact
