#ifndef CGO_PARALLEL_HPP
#define CGO_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cgo {

namespace detail {
inline std::atomic<int>& thread_setting()
{
    static std::atomic<int> n{0};
    return n;
}
}  // namespace detail

/// 0 selects hardware concurrency.
inline void set_num_threads(int n) { detail::thread_setting().store(std::max(0, n)); }

inline int num_threads()
{
    const int n = detail::thread_setting().load();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, count) across worker threads. Jobs must write to
/// disjoint outputs; the first exception thrown is rethrown on the caller.
template <class F>
void parallel_for(std::size_t count, F&& f)
{
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace cgo

#endif  // CGO_PARALLEL_HPP
