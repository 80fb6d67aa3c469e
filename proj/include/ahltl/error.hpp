#pragma once

#include <stdexcept>
#include <string>

namespace ahltl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input text did not match a grammar. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Structural problem with a Kripke structure (totality, unknown names, reserved props).
class ModelError : public Error {
public:
    using Error::Error;
};

enum class FormulaErrorKind { UnboundVariable, DuplicateQuantifier, NestedModality, Malformed };

class FormulaError : public Error {
public:
    FormulaError(FormulaErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    FormulaErrorKind kind() const { return kind_; }

private:
    FormulaErrorKind kind_;
};

// The formula lies outside the fragment a decision procedure supports.
class FragmentError : public Error {
public:
    using Error::Error;
};

// A configured state or size cap was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace ahltl
