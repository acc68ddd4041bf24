#pragma once

#include <cstddef>
#include <functional>

namespace dcl {

/// Worker count: hardware concurrency, capped by the DCL_THREADS environment
/// variable when it is set to a positive integer.
std::size_t thread_count();

/// Runs body(chunk, begin, end) over [0, n) split into contiguous chunks, one
/// per worker. Chunk boundaries depend only on n and the worker count, so
/// callers reducing per-chunk results in chunk order get deterministic output.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                     std::size_t max_chunks = 0);

/// Runs body(i) for every i in [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dcl
