#pragma once

#include <stdexcept>
#include <string>

namespace subcount {

// Base class for all library errors. Subclasses exist so callers (and the
// CLI's exit-code mapping) can tell input mistakes, scale guards, sparsity
// violations and internal defects apart without parsing messages.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Structural misuse of a graph: unknown/duplicate vertex, loop, duplicate or
// missing edge, reserved color, vertex removal while edges are incident.
class GraphError : public Error {
public:
    using Error::Error;
};

// Malformed text input; carries file and line context in the message.
class ParseError : public Error {
public:
    ParseError(const std::string& where, std::size_t line, const std::string& what)
        : Error(where + ":" + std::to_string(line) + ": " + what) {}
    explicit ParseError(const std::string& what) : Error(what) {}
};

// A configured scale guard was exceeded (pattern too large, generated member
// set too big, oracle input beyond its supported size).
class GuardError : public Error {
public:
    using Error::Error;
};

// The maintained in-degree bound cannot be restored under a strict cap: the
// host graph has left the declared sparsity class.
class SparsityError : public Error {
public:
    using Error::Error;
};

// Exact counter arithmetic left the representable range. Counts are never
// allowed to wrap silently.
class CountOverflowError : public Error {
public:
    using Error::Error;
};

// An internal invariant failed. Always a bug (or an unsatisfied assumption of
// the compiled pattern machinery); never triggered by user input alone.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace subcount
