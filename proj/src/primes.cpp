#include "mvlab/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace mvlab {

namespace {

std::shared_ptr<const PrimeTable> sieve_table(std::uint64_t bound) {
    auto table = std::make_shared<PrimeTable>();
    table->bound = bound;
    if (bound < 2) return table;
    // Odd-only bit sieve; composite[i] marks n = 2i+3.
    std::uint64_t half = (bound - 1) / 2; // count of odd numbers 3..bound
    std::vector<bool> composite(half, false);
    for (std::uint64_t i = 0;; ++i) {
        std::uint64_t p = 2 * i + 3;
        if (p * p > bound) break;
        if (composite[i]) continue;
        for (std::uint64_t j = (p * p - 3) / 2; j < half; j += p) composite[j] = true;
    }
    table->primes.reserve(half ? std::size_t(double(bound) / std::log(double(bound)) * 1.15) + 16 : 1);
    table->primes.push_back(2);
    for (std::uint64_t i = 0; i < half; ++i)
        if (!composite[i]) table->primes.push_back(std::uint32_t(2 * i + 3));
    return table;
}

std::mutex cache_mutex;
std::shared_ptr<const PrimeTable> cached; // grows monotonically

} // namespace

std::size_t PrimeTable::count_below(std::uint64_t x) const {
    auto it = std::upper_bound(primes.begin(), primes.end(), x);
    return std::size_t(it - primes.begin());
}

std::shared_ptr<const PrimeTable> PrimeTable::up_to(std::uint64_t bound) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (!cached || cached->bound < bound) cached = sieve_table(std::max<std::uint64_t>(bound, 1024));
    return cached;
}

std::vector<PrimePowerEntry> prime_powers_up_to(std::uint64_t bound) {
    auto table = PrimeTable::up_to(bound);
    std::vector<PrimePowerEntry> out;
    out.reserve(table->count_below(bound) + 4096);
    for (std::uint32_t p : table->primes) {
        if (p > bound) break;
        double lp = std::log(double(p));
        std::uint64_t n = p;
        std::uint32_t k = 1;
        for (;;) {
            out.push_back({n, p, k, lp});
            if (n > bound / p) break;
            n *= p;
            ++k;
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimePowerEntry& a, const PrimePowerEntry& b) { return a.n < b.n; });
    return out;
}

} // namespace mvlab
