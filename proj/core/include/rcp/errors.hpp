#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcp {

// Root of all library errors. Verdict-carrying results (sat/unsat/unknown,
// inclusion checks, emptiness witnesses) are plain return values; exceptions
// are reserved for contract violations and unsupported input.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input uses a codepoint outside the alphabet of the operation.
class AlphabetMismatch : public Error {
public:
    explicit AlphabetMismatch(const std::string& msg) : Error(msg) {}
};

// Determinization (complement, inclusion) hit the configured state cap.
class StateCapExceeded : public Error {
public:
    explicit StateCapExceeded(const std::string& msg) : Error(msg) {}
};

// Forward propagation requested for a function whose image need not be regular.
class NotForwardable : public Error {
public:
    explicit NotForwardable(const std::string& msg) : Error(msg) {}
};

// evaluate() called on a word outside the function's domain.
class NotInDomain : public Error {
public:
    explicit NotInDomain(const std::string& msg) : Error(msg) {}
};

// evaluate() called on a transducer that relates the input to several outputs.
class NotFunctional : public Error {
public:
    explicit NotFunctional(const std::string& msg) : Error(msg) {}
};

// Transducer description fails a structural check (bad state ids, empty
// initial/final sets, malformed labels).
class MalformedTransducer : public Error {
public:
    explicit MalformedTransducer(const std::string& msg) : Error(msg) {}
};

// Proof-tree operation addressed a node that is closed or not a leaf.
class LeafClosed : public Error {
public:
    explicit LeafClosed(const std::string& msg) : Error(msg) {}
};

// A flow sequence does not match the sequent it is executed against.
class FlowMismatch : public Error {
public:
    explicit FlowMismatch(const std::string& msg) : Error(msg) {}
};

// Splitting-graph construction saw a function outside the supported fragment.
class UnsupportedFunction : public Error {
public:
    explicit UnsupportedFunction(const std::string& msg) : Error(msg) {}
};

// Surface input uses a feature the solver deliberately rejects (length
// constraints, arithmetic, unknown operators). `feature` names it.
class UnsupportedFeature : public Error {
public:
    UnsupportedFeature(std::string feature_name, const std::string& msg)
        : Error(msg), feature(std::move(feature_name)) {}
    std::string feature;
};

// Surface syntax error with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(size_t line_, size_t col_, const std::string& msg)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
    size_t line;
    size_t col;
};

} // namespace rcp
