#pragma once

#include <string>
#include <vector>

namespace eitcav::simd {

enum class Backend { kScalar, kAvx2 };

/// Backend used by the data-parallel kernels. Chosen at first use from the CPU
/// features; the environment variable EITCAV_SIMD=scalar|avx2 overrides it.
Backend active_backend();

/// Forces a backend. Throws std::invalid_argument if the CPU or build lacks it.
void set_backend(Backend backend);

bool available(Backend backend);
std::vector<Backend> available_backends();
const char* to_string(Backend backend);

}  // namespace eitcav::simd
