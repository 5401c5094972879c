#pragma once

#include <cstddef>
#include <functional>

namespace nonlocal {

/// Worker count: `requested` if nonzero, else NONLOCAL_AUDIT_THREADS if set
/// and nonzero, else std::thread::hardware_concurrency() (at least 1).
unsigned resolve_workers(unsigned requested = 0);

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// body(chunk_index, begin, end) for each. Chunk boundaries depend only on
/// (n, workers), so callers can reduce per-chunk results in chunk order and
/// stay deterministic regardless of scheduling.
void parallel_chunks(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace nonlocal
