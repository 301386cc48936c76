#include "talbot/units.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace talbot::units {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// splits "<number><spaces><unit>"; unit may be empty
void split_number_unit(const std::string& text, double& value, std::string& unit) {
  const std::string t = trim(text);
  const char* begin = t.c_str();
  char* end = nullptr;
  value = std::strtod(begin, &end);
  if (end == begin) throw std::invalid_argument("expected a number in '" + text + "'");
  unit = trim(std::string(end));
}

}  // namespace

double length_unit_factor(const std::string& unit) {
  if (unit == "pm") return 1e-12;
  if (unit == "nm") return 1e-9;
  if (unit == "um" || unit == "µm") return 1e-6;
  if (unit == "mm") return 1e-3;
  if (unit == "cm") return 1e-2;
  if (unit == "m") return 1.0;
  throw std::invalid_argument("unknown length unit '" + unit + "'");
}

double lambda_unit_factor(const std::string& unit) {
  if (unit == "m^-3" || unit == "1/m^3") return 1.0;
  if (unit == "mm^-1um^-2" || unit == "mm^-1.um^-2") return 1e15;
  throw std::invalid_argument("unknown localization-strength unit '" + unit + "'");
}

double parse_length(const std::string& text) {
  double v;
  std::string unit;
  split_number_unit(text, v, unit);
  if (unit.empty())
    throw std::invalid_argument("length '" + text + "' needs a unit suffix");
  return v * length_unit_factor(unit);
}

double parse_lambda(const std::string& text) {
  double v;
  std::string unit;
  split_number_unit(text, v, unit);
  if (unit.empty())
    throw std::invalid_argument("localization strength '" + text + "' needs a unit suffix");
  return v * lambda_unit_factor(unit);
}

double parse_number(const std::string& text) {
  double v;
  std::string unit;
  split_number_unit(text, v, unit);
  if (!unit.empty())
    throw std::invalid_argument("unexpected suffix '" + unit + "' on number '" + text + "'");
  return v;
}

long parse_integer(const std::string& text) {
  const std::string t = trim(text);
  const char* begin = t.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || trim(std::string(end)) != "")
    throw std::invalid_argument("expected an integer, got '" + text + "'");
  return v;
}

bool parse_flag(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "on") return true;
  if (t == "false" || t == "0" || t == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + text + "'");
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace talbot::units
