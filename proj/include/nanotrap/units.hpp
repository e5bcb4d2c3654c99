#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nanotrap::units {

enum class Kind { Length, Current, Field, Temperature, Time, Dimensionless };

struct Quantity {
    double value = 0.0;  // in SI base units (m, A, T, K, s)
    Kind kind = Kind::Dimensionless;
};

/// Thrown on malformed numbers or unknown unit suffixes; the message names
/// the offending token.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Suffix strictness: when relaxed, bare numbers parse as SI base units of
/// whatever dimension the caller expects. Default strict.
void set_strict_suffixes(bool strict);
bool strict_suffixes();

/// Parse "<number> <suffix>" with suffix in
/// {nm, um, mm, m, mA, uA, A, mG, G, T, nK, uK, K, s, ms} into SI units.
/// Locale-independent.
Quantity parse(std::string_view text);

/// Parse and require a specific dimension.
double parse_as(std::string_view text, Kind expected);

/// Parse a plain dimensionless number (no suffix allowed).
double parse_number(std::string_view text);

/// Format an SI value with the given suffix so that re-parsing reproduces it
/// to better than 1 part in 1e12.
std::string format(double value_si, std::string_view suffix);

const char* kind_name(Kind k);

} // namespace nanotrap::units
