#pragma once

#include <cstddef>
#include <functional>

namespace pmchwt::parallel {

void set_threads(int n);
int threads();

/// Runs fn(i) for i in [begin, end) split into contiguous blocks, one per worker.
/// Callers must make each i write to disjoint output; results are then
/// independent of the worker count.
void for_each(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& fn);

}  // namespace pmchwt::parallel
