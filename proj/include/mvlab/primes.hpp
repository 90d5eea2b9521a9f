// Shared prime tables.  Every module enumerates primes through here so the
// Eratosthenes pass runs once per bound and the table is shared read-only.
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace mvlab {

// Immutable sorted table of all primes <= bound.
struct PrimeTable {
    std::uint64_t bound = 0;
    std::vector<std::uint32_t> primes;

    std::size_t count_below(std::uint64_t x) const; // pi(x) for x <= bound

    // Process-wide cache; grows monotonically, returns a shared immutable table.
    static std::shared_ptr<const PrimeTable> up_to(std::uint64_t bound);
};

// Prime powers p^k <= bound with their von Mangoldt weight log p, sorted by n.
struct PrimePowerEntry {
    std::uint64_t n;  // p^k
    std::uint32_t p;
    std::uint32_t k;
    double log_p;
};
std::vector<PrimePowerEntry> prime_powers_up_to(std::uint64_t bound);

} // namespace mvlab
