// Segmented sieve: evaluates g(n) for every n <= x by extracting full prime
// powers per segment, and accumulates all summatory quantities the verifiers
// consume.  Compensated summation on every accumulator; segments merge in a
// deterministic ordered reduction, so results do not depend on worker count.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvlab/multfn.hpp"
#include "mvlab/numerics.hpp"

namespace mvlab {

struct SieveConfig {
    std::uint64_t segment_length = std::uint64_t(1) << 20;
    std::uint64_t x_max = 10000000;
    unsigned worker_count = 2;
    double v_step = 0.05; // grid for the Lambda-weighted partial sums
};

struct SummatoryTable {
    std::uint64_t x_max = 0;
    std::uint64_t spec_hash = 0;
    std::vector<std::uint64_t> checkpoints; // ascending
    std::vector<cplx> M_g;
    std::vector<double> M_abs;
    std::vector<cplx> N_g;
    std::vector<double> N_abs;
    std::vector<cplx> L_g;
    std::vector<double> L_abs;
    double v_step = 0.05;
    std::vector<cplx> lambda_partials; // sum_{n <= e^{k v_step}} g(n) Lambda(n)

    std::size_t index_of(std::uint64_t x) const; // throws if x not a checkpoint
    cplx M_at(std::uint64_t x) const { return M_g[index_of(x)]; }
    double M_abs_at(std::uint64_t x) const { return M_abs[index_of(x)]; }
    cplx L_at(std::uint64_t x) const { return L_g[index_of(x)]; }
    double L_abs_at(std::uint64_t x) const { return L_abs[index_of(x)]; }
    std::string to_csv() const;
};

// Exact sums at every checkpoint (floating rounding aside).
SummatoryTable summatory(const MultFnSpec& spec, const SieveConfig& config,
                         std::vector<std::uint64_t> checkpoints);

// sum_{n<=x} rho^{omega(n)}, exact via the sieve.
double selberg_sum(double rho, std::uint64_t x, const SieveConfig& config = {});

struct SelbergConstant {
    double value = 0.0;          // truncated F(rho)
    double log_tail_bound = 0.0; // bound on |log tail| beyond the cutoff
};
// F(rho) = Gamma(rho)^{-1} prod_p (1 + rho/(p-1)) (1 - 1/p)^rho, truncated.
SelbergConstant selberg_constant(double rho, std::uint64_t prime_cutoff);

// Residual of the log = 1*Lambda convolution identity: N_g(x) against the
// Lambda(p^l)-weighted convolution (p-free summatory for the strong extension,
// plain M_g with g_d = g(p^l) for the complete one).
double lambda_convolution_identity(const MultFnSpec& spec, std::uint64_t x);

// (M_{|g|}(ca) - M_{|g|}(a)) / M_{|g|}(a): the short-interval growth ratio.
double short_interval_ratio(const MultFnSpec& spec, std::uint64_t a, double c,
                            const SieveConfig& config = {});

// Partial sums of g(n) Lambda(n) over n <= e^v on the v-grid.
std::vector<cplx> mangoldt_weighted_partials(const MultFnSpec& spec, double v_max, double v_step);

// Exact jump stream (n = p^k, weight g Lambda) sorted by n; the Parseval
// oracle integrates the piecewise-constant partial sums against it exactly.
struct MangoldtJump {
    std::uint64_t n;
    cplx weight; // g(p^k) log p
};
std::vector<MangoldtJump> mangoldt_jumps(const MultFnSpec& spec, std::uint64_t n_max);

// Dense prefix of M_g over [1, x] (x capped at the two-pass range 10^6).
std::vector<cplx> dense_prefix_M(const MultFnSpec& spec, std::uint64_t x);

// ---- binary table cache ----------------------------------------------------
// Tables are keyed by (spec hash, x_max); a cached table serves any request
// whose checkpoints are a subset of the stored ones.
bool save_table(const SummatoryTable& table, const std::string& path);
bool load_table(SummatoryTable& table, const std::string& path, std::uint64_t spec_hash, std::uint64_t x_max);

// Cache-aware wrapper: loads from cache_dir when possible, otherwise sieves
// (with the union of stored and requested checkpoints) and stores the result.
// Empty cache_dir disables caching.
SummatoryTable summatory_cached(const MultFnSpec& spec, const SieveConfig& config,
                                std::vector<std::uint64_t> checkpoints, const std::string& cache_dir);

} // namespace mvlab
