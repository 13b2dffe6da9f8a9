#include "xrt/threading.hpp"

#include <atomic>

namespace xrt {

namespace {
int g_threads = 0;  // 0 = auto
}

void set_thread_count(int n) { g_threads = n; }

int thread_count() {
    if (g_threads > 0) return g_threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_chunks(int n_chunks, const std::function<void(int)>& fn) {
    int nt = std::min(thread_count(), n_chunks);
    if (nt <= 1) {
        for (int c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (int t = 0; t < nt; ++t)
        workers.emplace_back([&] {
            for (;;) {
                int c = next.fetch_add(1);
                if (c >= n_chunks) break;
                fn(c);
            }
        });
    for (auto& w : workers) w.join();
}

}  // namespace xrt
