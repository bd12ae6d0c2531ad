#ifndef SUBCOVER_PARALLEL_HPP
#define SUBCOVER_PARALLEL_HPP

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace subcover {

// Replica-level parallelism: body(i) must write only to its own slot i.
// Results are independent of the worker count by construction; exceptions
// are rethrown on the calling thread.
inline void parallel_for(long long n, int workers,
                         const std::function<void(long long)>& body) {
    if (n <= 0)
        return;
    if (workers <= 1 || n == 1) {
        for (long long i = 0; i < n; ++i)
            body(i);
        return;
    }
    const int nw = static_cast<int>(std::min<long long>(workers, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nw));
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (long long i = w; i < n; i += nw)
                    body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace subcover

#endif
