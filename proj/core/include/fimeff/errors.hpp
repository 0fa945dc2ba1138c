// fimeff/errors.hpp — exception taxonomy shared by every module.
//
// The CLI maps these onto process exit codes, so the distinctions matter:
// bad argument values (InputError) are recoverable caller mistakes, while
// NotPsdError / DegenerateSpectrumError / DegenerateColumnError diagnose
// pathological data (usually dimensional collapse).

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fimeff {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A precondition on argument values was violated.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

// Command-line misuse (unknown selector, out-of-range flag).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

// A matrix required to be positive semidefinite has a significantly
// negative eigenvalue.
class NotPsdError : public Error {
public:
    explicit NotPsdError(const std::string& what) : Error(what) {}
};

// An all-zero spectrum where at least one positive eigenvalue is required.
class DegenerateSpectrumError : public Error {
public:
    explicit DegenerateSpectrumError(const std::string& what) : Error(what) {}
};

// A representation dimension with (near-)zero batch variance; carries the
// offending dimension index.
class DegenerateColumnError : public Error {
public:
    DegenerateColumnError(const std::string& what, std::size_t dimension)
        : Error(what), dimension_(dimension) {}

    std::size_t dimension() const noexcept { return dimension_; }

private:
    std::size_t dimension_;
};

// Training left the stable regime (loss blow-up or non-finite values).
class DivergenceError : public Error {
public:
    explicit DivergenceError(const std::string& what) : Error(what) {}
};

// Malformed input file; carries a line number (text formats) or byte
// offset (binary formats), whichever applies.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t byte_offset)
        : Error(what), line_(line), byte_offset_(byte_offset) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t line_;
    std::size_t byte_offset_;
};

} // namespace fimeff
