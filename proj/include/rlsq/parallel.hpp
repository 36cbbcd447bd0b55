#pragma once

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace rlsq {

/// Run task(0..count-1) on a worker pool and hand each result to
/// commit(i, result) in index order on the calling thread. Tasks must not
/// throw. With threads <= 1 everything runs inline, in order.
template <typename Task, typename Commit>
void ordered_parallel_run(std::size_t count, int threads, Task task, Commit commit) {
    using Result = decltype(task(std::size_t{0}));
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) commit(i, task(i));
        return;
    }

    std::vector<std::optional<Result>> done(count);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            Result r = task(i);
            {
                std::lock_guard<std::mutex> lk(mu);
                done[i] = std::move(r);
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    const int nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

    for (std::size_t k = 0; k < count; ++k) {
        std::unique_lock<std::mutex> lk(mu);
        cv.wait(lk, [&] { return done[k].has_value(); });
        Result r = std::move(*done[k]);
        done[k].reset();
        lk.unlock();
        commit(k, std::move(r));
    }
    for (auto& th : pool) th.join();
}

inline int default_thread_count() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

} // namespace rlsq
