#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace chanalloc::csv {

// Six significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string num(double v);

std::vector<std::string> split(std::string_view line, char sep = ',');

// Throws InvalidParameter naming `what` when the field is not a number.
double parse_double(const std::string& field, std::string_view what);

}  // namespace chanalloc::csv
