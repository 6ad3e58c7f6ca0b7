#include <doctest.h>

#include <sstream>

#include "eitcav/validation.hpp"

using namespace eitcav;

TEST_CASE("built-in self-checks pass") {
  const auto results = run_validation(2);
  CHECK(results.size() >= 10);
  for (const auto& r : results) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.passed);
  }
  std::ostringstream os;
  print_validation(os, results);
  CHECK(os.str().find(results.front().name) != std::string::npos);
}
