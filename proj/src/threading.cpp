#include "ccbam/threading.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ccbam {

static int resolve_thread_count() {
    const char* env = std::getenv("CCBAM_NUM_THREADS");
    if (env != nullptr) {
        int n = std::atoi(env);
        return n <= 0 ? 1 : n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

int thread_count() {
    static int n = resolve_thread_count();
    return n;
}

void parallel_for(long n, const std::function<void(long, long)>& fn) {
    if (n <= 0) return;
    int workers = thread_count();
    if (workers <= 1 || n == 1) {
        fn(0, n);
        return;
    }
    long chunks = std::min<long>(workers, n);
    long per = (n + chunks - 1) / chunks;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(chunks));
    for (long c = 0; c < chunks; ++c) {
        long b = c * per;
        long e = std::min(n, b + per);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ccbam
