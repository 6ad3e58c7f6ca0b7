#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "eitcav/parallel.hpp"

using namespace eitcav;

TEST_CASE("every index is visited once") {
  for (int threads : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(101);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("called on an empty range"); });
}

TEST_CASE("the lowest failing index wins") {
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
