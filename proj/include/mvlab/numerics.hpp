// Small numeric utilities shared by every module: compensated accumulators,
// the deterministic per-prime RNG, a fixed-block parallel map, and least squares.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvlab {

using cplx = std::complex<double>;

// Neumaier variant of Kahan summation.  10^8-term accumulations at double
// precision lose ~3 digits with a naive loop; this keeps them at ~1 ulp.
struct csum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    // Ordered merge of a partial sum (used by the segment reduction).
    void merge(const csum& o) { add(o.s); add(o.c); }
    double value() const { return s + c; }
};

struct czsum {
    csum re, im;
    void add(cplx z) { re.add(z.real()); im.add(z.imag()); }
    void merge(const czsum& o) { re.merge(o.re); im.merge(o.im); }
    cplx value() const { return {re.value(), im.value()}; }
};

// splitmix64: the standard 64-bit mixer.  Pure function of the state, so
// seeded-random prime values are identical across runs and platforms.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0,1) from a (seed, key, stream) triple.
inline double seeded_uniform(std::uint64_t seed, std::uint64_t key, std::uint64_t stream) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(key + 0x632be59bd9b4e019ULL * stream));
    return double(h >> 11) * 0x1.0p-53;
}

// Sequential RNG for the property/trial suites (seeded, reproducible).
struct rng64 {
    std::uint64_t state;
    explicit rng64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() { return splitmix64(state++); }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Runs fn(block_index) for block_index in [0, nblocks) on up to `workers`
// threads.  Blocks are fixed by the caller, so results do not depend on the
// worker count; fn must write only to slots owned by its block.
void parallel_blocks(std::size_t nblocks, unsigned workers, const std::function<void(std::size_t)>& fn);

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    if (n < 2) return 0.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= double(n); my /= double(n);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return den > 0 ? num / den : 0.0;
}

// Exponential integral E1(x), x > 0.  Backed by Boost.Math.
double expint_e1(double x);

// FNV-1a over a byte string; spec hashing and the table cache key.
inline std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mvlab
