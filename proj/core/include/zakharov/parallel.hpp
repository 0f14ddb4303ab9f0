#pragma once

#include <cstddef>
#include <functional>

namespace zakharov {

/// Caps the worker count used by parallel_for. 0 means hardware concurrency.
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Every index is computed independently, so
/// results do not depend on the thread count as long as body writes only to
/// slot i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace zakharov
