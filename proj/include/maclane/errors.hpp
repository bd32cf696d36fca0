#pragma once

#include <stdexcept>
#include <string>

namespace maclane {

/// Malformed textual input (group/ring specs, table files, cache payloads).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A structural invariant failed to hold (non-associative table, lattice
/// inclusion violation, ...). The message carries a witness when one exists.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration would exceed the configured budget. The message names the
/// required size so the caller can decide whether to raise the budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace maclane
