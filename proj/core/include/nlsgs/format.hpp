#pragma once

#include <initializer_list>
#include <string>

namespace nlsgs {

/// Shortest round-trip-safe text of a double with 17 significant digits.
std::string format_double(double x);

/// Comma-joined format_double of each value.
std::string join_csv(std::initializer_list<double> values);

}  // namespace nlsgs
