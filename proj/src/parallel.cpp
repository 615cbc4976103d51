#include "ctk/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ctk {
namespace {

int g_thread_cap = 0;

} // namespace

void set_thread_cap(int threads) { g_thread_cap = threads < 0 ? 0 : threads; }

int thread_cap() {
    if (g_thread_cap > 0) return g_thread_cap;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& body) {
    if (n <= 0) return;
    const int workers = std::min(n, thread_cap());
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto run = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace ctk
