#pragma once

#include <functional>

namespace nlsnorm {

// Worker cap: NLSNORM_THREADS if set, else hardware concurrency.
int thread_cap();

// Runs body(0..n-1) on up to thread_cap() workers. Jobs must be independent;
// each writes only its own output slot, so results do not depend on the
// thread count.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace nlsnorm
