#ifndef CCBAM_THREADING_HPP
#define CCBAM_THREADING_HPP

#include <functional>

namespace ccbam {

// Worker-thread cap. Reads CCBAM_NUM_THREADS once; 0 (or unset on a
// single-core host) means single-threaded deterministic mode.
int thread_count();

// Runs fn(begin, end) over a contiguous partition of [0, n). Each index is
// processed by exactly one worker with a fixed partition, so results do not
// depend on the thread count as long as fn writes disjoint outputs.
void parallel_for(long n, const std::function<void(long, long)>& fn);

}  // namespace ccbam

#endif
