#pragma once

#include <initializer_list>
#include <ostream>
#include <string>

namespace eitcav::csv {

/// Shortest round-trip is not needed for the tables; 12 significant digits are.
std::string format(double value);

void write_row(std::ostream& out, std::initializer_list<double> values);

}  // namespace eitcav::csv
