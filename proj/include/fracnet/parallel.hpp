#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace fracnet {

/// Worker cap: FRACNET_THREADS when set, hardware concurrency otherwise.
inline int max_threads() {
    if (const char* env = std::getenv("FRACNET_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Runs body(i) for i in [0, n); each index writes only its own slot, so the
/// result is identical to the serial order.
inline void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& body) {
    const int workers = std::min<Eigen::Index>(max_threads(), std::max<Eigen::Index>(n, 1));
    if (workers <= 1 || n <= 1) {
        for (Eigen::Index i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (Eigen::Index i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fracnet
