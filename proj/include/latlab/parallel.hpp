#pragma once

#include <cstddef>
#include <functional>

namespace latlab {

// Samples per deterministic chunk.  Each chunk draws from its own substream
// and writes into its own result slot, so the reduction (done serially in
// chunk order by the caller) is independent of the worker count.
inline constexpr long long kChunkSamples = 256;

// Runs fn(chunk_index) for every index in [0, n_chunks).  threads <= 1 runs
// inline.  Exceptions from workers are rethrown on the calling thread.
void parallel_for_chunks(std::size_t n_chunks, int threads,
                         const std::function<void(std::size_t)>& fn);

}  // namespace latlab
