#pragma once

#include <cstddef>
#include <functional>

namespace wcw {

// 0 means "not specified": falls back to WCW_THREADS, then hardware concurrency.
unsigned resolve_threads(unsigned requested);

// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks write to
// disjoint, pre-sized slots; the caller folds the slots in index order, so
// results never depend on the worker count. The first exception thrown by a
// task is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace wcw
