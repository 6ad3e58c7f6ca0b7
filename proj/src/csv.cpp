#include "eitcav/csv.hpp"

#include <cstdio>

namespace eitcav::csv {

std::string format(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format(v);
    first = false;
  }
  out << '\n';
}

}  // namespace eitcav::csv
