#pragma once

#include <stdexcept>
#include <string>

namespace jibisim {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input from the caller: unknown state, unknown action, empty alphabet.
struct InputError : Error {
    explicit InputError(const std::string& what) : Error(what) {}
};

// A construction would exceed the configured state budget.
struct BudgetError : Error {
    explicit BudgetError(const std::string& what) : Error(what) {}
};

// An operation was called outside its contract (e.g. asking for a
// distinguishing formula of a bisimilar pair).
struct ContractError : Error {
    explicit ContractError(const std::string& what) : Error(what) {}
};

// Source-position-annotated error from the term or formula parser.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line(line),
          column(column) {}
};

inline constexpr std::size_t kDefaultStateBudget = 10'000;

} // namespace jibisim
