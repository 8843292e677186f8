#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace beltrami {

// Data-parallel width, capped by the BELTRAMI_THREADS environment variable.
inline unsigned parallel_width() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BELTRAMI_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

// Runs body(i) for i in [0, n). Each index is touched exactly once and bodies
// must write disjoint outputs, so results are bit-identical for any width.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    unsigned width = parallel_width();
    if (width <= 1 || n < 4096) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    std::size_t chunk = (n + width - 1) / width;
    for (unsigned t = 0; t < width; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace beltrami
