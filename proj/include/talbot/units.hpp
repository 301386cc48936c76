#pragma once

#include <string>

namespace talbot::units {

/// "0.4 um" -> 4e-7. The unit suffix is mandatory; accepts pm, nm, um, mm,
/// cm, m. Throws std::invalid_argument on malformed input.
double parse_length(const std::string& text);

/// Localization strength with unit: "1e-3 mm^-1um^-2" or "1e12 m^-3".
/// The display-to-SI factor is exact: 1 mm^-1 um^-2 = 1e15 m^-3.
double parse_lambda(const std::string& text);

/// Unitless number / integer / boolean ("true"/"false").
double parse_number(const std::string& text);
long parse_integer(const std::string& text);
bool parse_flag(const std::string& text);

/// Full-precision decimal, round-trip safe.
std::string format_full(double v);

double length_unit_factor(const std::string& unit);  // throws on unknown unit
double lambda_unit_factor(const std::string& unit);

}  // namespace talbot::units
