#include "mvlab/numerics.hpp"

#include <atomic>
#include <thread>

#include <boost/math/special_functions/expint.hpp>

namespace mvlab {

void parallel_blocks(std::size_t nblocks, unsigned workers, const std::function<void(std::size_t)>& fn) {
    if (nblocks == 0) return;
    if (workers <= 1 || nblocks == 1) {
        for (std::size_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    unsigned nthreads = std::min<std::size_t>(workers, nblocks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= nblocks || failed.load()) return;
                try {
                    fn(b);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load() && err) std::rethrow_exception(err);
}

double expint_e1(double x) {
    return boost::math::expint(1, x);
}

} // namespace mvlab
