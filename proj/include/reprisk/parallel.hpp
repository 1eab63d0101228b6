#ifndef REPRISK_PARALLEL_HPP
#define REPRISK_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace reprisk {

inline unsigned int resolve_worker_count(unsigned int requested) {
    if (requested > 0) return requested;
    const unsigned int hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(i) for i in [0, count) across `workers` threads, pulling indices
// from a shared counter. Results must be written into index-addressed
// storage by the caller so reductions stay order-fixed regardless of
// scheduling. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for_indexed(std::size_t count, unsigned int workers, Fn&& fn) {
    workers = resolve_worker_count(workers);
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker_body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    const unsigned int spawn = static_cast<unsigned int>(
        std::min<std::size_t>(workers, count));
    threads.reserve(spawn);
    for (unsigned int t = 0; t < spawn; ++t) threads.emplace_back(worker_body);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace reprisk

#endif
