#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace olstar {

// Base class for every error this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unknown symbol, mismatched alphabets, duplicate names, non-total maps.
class AlphabetError : public Error {
public:
    using Error::Error;
};

// Malformed machine or output-map file.
class ParseError : public Error {
public:
    using Error::Error;
};

// Caller violated an operation's contract (e.g. building a hypothesis from a
// table that still has defects, or processing a word that is not a
// counterexample).
class ContractError : public Error {
public:
    using Error::Error;
};

// A bounded search hit its configured limit before finishing.
class ResourceError : public Error {
public:
    using Error::Error;
};

// compose() found a reachable state/input pair whose transition rule yields no
// output symbol, or more than one. `witness` is the input word (by name) that
// reaches the offending pair, including the failing input itself.
class CompositionError : public Error {
public:
    enum class Kind { zero_outputs, ambiguous };

    CompositionError(Kind kind, std::vector<std::string> witness, const std::string& what)
        : Error(what), kind_(kind), witness_(std::move(witness)) {}

    Kind kind() const { return kind_; }
    const std::vector<std::string>& witness() const { return witness_; }

private:
    Kind kind_;
    std::vector<std::string> witness_;
};

} // namespace olstar
