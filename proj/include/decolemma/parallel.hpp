#pragma once

#include <cstddef>
#include <functional>

namespace decolemma {

// Worker count for sweeps: hardware concurrency, capped by DECOLEMMA_THREADS
// when that variable holds a positive integer.
std::size_t worker_count();

// Calls body(i) for every i in [0, n). Each index is visited exactly once;
// body must only write to state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace decolemma
