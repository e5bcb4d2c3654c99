#include "nanotrap/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nanotrap::units {

namespace {

struct Suffix {
    const char* name;
    double factor;
    Kind kind;
};

constexpr std::array<Suffix, 15> suffixes{{
    {"nm", 1e-9, Kind::Length},
    {"um", 1e-6, Kind::Length},
    {"mm", 1e-3, Kind::Length},
    {"m", 1.0, Kind::Length},
    {"mA", 1e-3, Kind::Current},
    {"uA", 1e-6, Kind::Current},
    {"A", 1.0, Kind::Current},
    {"mG", 1e-7, Kind::Field},
    {"G", 1e-4, Kind::Field},
    {"T", 1.0, Kind::Field},
    {"nK", 1e-9, Kind::Temperature},
    {"uK", 1e-6, Kind::Temperature},
    {"K", 1.0, Kind::Temperature},
    {"ms", 1e-3, Kind::Time},
    {"s", 1.0, Kind::Time},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_double_token(std::string_view tok) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("malformed number: '" + std::string(tok) + "'");
    return v;
}

} // namespace

namespace {
bool g_strict = true;
}

void set_strict_suffixes(bool strict) { g_strict = strict; }
bool strict_suffixes() { return g_strict; }

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Length: return "length";
        case Kind::Current: return "current";
        case Kind::Field: return "magnetic field";
        case Kind::Temperature: return "temperature";
        case Kind::Time: return "time";
        default: return "dimensionless";
    }
}

Quantity parse(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw ParseError("empty quantity");
    // Split at the last whitespace or at the start of the trailing alpha run.
    std::size_t split = s.size();
    while (split > 0) {
        char c = s[split - 1];
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            --split;
        } else {
            break;
        }
    }
    if (split == s.size()) {
        if (!g_strict) return {parse_double_token(s), Kind::Dimensionless};
        throw ParseError("missing unit suffix in '" + std::string(text) + "'");
    }
    std::string_view suffix = s.substr(split);
    std::string_view num = trim(s.substr(0, split));
    if (num.empty()) throw ParseError("missing number in '" + std::string(text) + "'");
    for (const auto& u : suffixes) {
        if (suffix == u.name) {
            return {parse_double_token(num) * u.factor, u.kind};
        }
    }
    throw ParseError("unknown unit suffix: '" + std::string(suffix) + "'");
}

double parse_as(std::string_view text, Kind expected) {
    Quantity q = parse(text);
    if (q.kind != expected) {
        if (!g_strict && q.kind == Kind::Dimensionless) return q.value;  // bare SI value
        throw ParseError("expected a " + std::string(kind_name(expected)) + " but got '" +
                         std::string(text) + "'");
    }
    return q.value;
}

double parse_number(std::string_view text) {
    return parse_double_token(trim(text));
}

std::string format(double value_si, std::string_view suffix) {
    for (const auto& u : suffixes) {
        if (suffix == u.name) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.15g %s", value_si / u.factor, u.name);
            return buf;
        }
    }
    throw ParseError("unknown unit suffix: '" + std::string(suffix) + "'");
}

} // namespace nanotrap::units
