#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace modcheck
{

// Malformed textual input (models and formulas). Line and column are 1-based.
class ParseError : public std::runtime_error
{
    std::size_t _line;
    std::size_t _column;

public:
    ParseError( std::size_t line, std::size_t column, const std::string& message )
        : std::runtime_error{ std::to_string( line ) + ":" + std::to_string( column ) + ": " + message },
          _line{ line }, _column{ column } {}

    [[nodiscard]] std::size_t line() const { return _line; }
    [[nodiscard]] std::size_t column() const { return _column; }
};

// A well-formed input that violates a semantic invariant (blocked state,
// unclassifiable state, invalid pruning, formula outside the expected fragment...).
class ModelError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A configurable size cap was exceeded. The stage names the construction
// that gave up (acg, dpw, nta, game, prunings).
class ResourceError : public std::runtime_error
{
    std::string _stage;
    std::size_t _cap;

public:
    ResourceError( std::string stage, std::size_t cap )
        : std::runtime_error{ "resource cap exceeded in stage '" + stage + "' (cap " + std::to_string( cap ) + ")" },
          _stage{ std::move( stage ) }, _cap{ cap } {}

    [[nodiscard]] const std::string& stage() const { return _stage; }
    [[nodiscard]] std::size_t cap() const { return _cap; }
};

} // namespace modcheck
