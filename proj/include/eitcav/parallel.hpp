#pragma once

#include <cstddef>
#include <functional>

namespace eitcav {

/// Number of workers to use for `requested` (0 = one per hardware thread).
int resolve_threads(int requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; if any call throws, the exception of the lowest
/// failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace eitcav
