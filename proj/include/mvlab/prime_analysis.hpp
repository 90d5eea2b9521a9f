// Prime-indexed sums: Mertens and von Mangoldt sums, pretentious distances
// with their tau-grid minimizers, and the exponent bookkeeping of the
// explicit Halasz-type bounds.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvlab/multfn.hpp"
#include "mvlab/numerics.hpp"

namespace mvlab {

// ---- tau grid -------------------------------------------------------------
// Nonuniform symmetric grid on [-T, T], built from uniform segments:
// step h1 on |tau| <= 10(sigma-1), step sigma-1 on |tau| <= 2, step 0.05
// beyond (the regimes change at |tau| ~ sigma-1 and |tau| = 2).
struct TauSegment {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 0;
    double at(std::size_t k) const { return start + step * double(k); }
};

struct TauGrid {
    std::vector<TauSegment> segments;
    double T = 0.0;
    double base_step = 0.0;

    std::size_t size() const;
    std::vector<double> points() const;

    // cap_step additionally bounds the region-2/3 steps (used by j_integral).
    static TauGrid profile(double sigma_minus_1, double T, double base_step, double cap_step = 0.0);
};

// Re sum_i w_i e^{-i tau l_i} on a uniform tau segment, added into out[0..count).
// Rotation-recurrence kernel; fixed 1024-point blocks keep the result
// independent of the worker count.
void phase_sweep(const std::vector<double>& log_p, const std::vector<double>& w_re,
                 const std::vector<double>& w_im, const TauSegment& seg, double* out, unsigned workers);

// ---- prime sums -------------------------------------------------------------
double mertens_sum(std::uint64_t x);
double mertens_sum(const MultFnSpec& spec, std::uint64_t x, int class_index);
double mertens_sum_residue(std::uint64_t x, std::uint32_t q, std::uint32_t r);

// D_E(g~, n^{i tau}; x) with the B_j normalization g~(p) = g(p)/B_j.
// class_index empty: sum over every class (S excluded).
double pretentious_distance(const MultFnSpec& spec, double tau, std::uint64_t x,
                            std::optional<int> class_index = std::nullopt);

struct DistanceReport {
    std::uint64_t x = 0;
    double T = 0.0;
    double tau_grid_step = 0.0;
    std::vector<double> tau;                 // grid points, ascending
    std::vector<std::vector<double>> D;      // [class][grid point]
    std::vector<double> tau_star;            // per-class minimizer
    std::vector<double> rho;                 // per-class minimum
    std::vector<bool> boundary_min;          // minimum attained at +-T
    double rho_total(double at_tau) const;   // sum over classes at nearest grid point
};

// Grid minimum of D_{E_j}(g~, n^{i tau}; x) over |tau| <= log^{D_exp} x.
// grid_step = 0 selects the default (sigma-1)/4; T_override > 0 replaces
// log^{D_exp} x (used by the truncated pointwise sweeps).
DistanceReport rho_min(const MultFnSpec& spec, std::uint64_t x, double D_exp, double grid_step,
                       unsigned workers = 2, double T_override = 0.0);

// ---- von Mangoldt sums ------------------------------------------------------
struct MangoldtSumResult {
    double sum = 0.0;
    double predicted = 0.0; // log z (+ fitted constant reported separately)
    double c_fit = 0.0;     // sum - log z
};
MangoldtSumResult lambda_mangoldt_sum(std::uint64_t z);

struct MangoldtCoprimeResult {
    double sum = 0.0;
    double predicted = 0.0; // phi(P)/P * y/x
};
MangoldtCoprimeResult lambda_mangoldt_coprime(std::uint64_t x, double y, const std::vector<std::uint32_t>& P_primes);

struct SigmaDiffResult {
    double lhs = 0.0;            // truncated sum + tail bound
    double rhs_bound_shape = 0.0; // 1 + |log(|tau|/(sigma-1))|
    double tail_bound = 0.0;
    bool degenerate = false;     // tau = 0
};
SigmaDiffResult sigma_diff_sum(std::uint64_t x, double tau, std::uint64_t prime_cutoff);

// ---- exponent bookkeeping for the explicit upper bounds --------------------
struct ExponentBundle {
    std::uint64_t t = 0;
    double lambda = 0.0;
    double kappa = 0.0;
    double S_kappa = 0.0;          // sum_{t^k < p <= t} |g(p)|/p
    std::vector<double> c;         // c_j
    std::vector<double> gamma0;    // gamma_{0,j} = (27/1024pi)(delta_j/B_j) beta_j^3
    std::vector<double> d;         // d_j (1 or delta_j/B_j)
    double gamma0_min = 0.0;
    double gamma = 0.0;            // min_j delta_j beta_j^3
    bool nondecreasing = false;
    bool reasonable = false;
    bool degenerate = false;       // kappa floored
    double inequality_lhs = 0.0;   // C (B/delta) kappa^{-lambda} e^{-S_kappa/2}
    double inequality_slack = 0.0; // 1/2 - lhs
    std::vector<double> class_abs_over_p; // sum_{p<=t, E_j} |g(p)|/p
    std::string to_json() const;
};
ExponentBundle exponent_bundle(const MultFnSpec& spec, std::uint64_t t, double C);

// gamma_{0,j} for arbitrary parameters (exposed for the verifiers).
double gamma0_of(double delta, double B, double beta);

struct DensityResult {
    double measured = 0.0;
    double predicted = 0.0;
};
// E = {p : frac(tau log p / 2pi) in (alpha, beta]}: measured sum 1/p vs
// (beta - alpha) log log x.
DensityResult good_partition_density(double tau, double alpha, double beta, std::uint64_t x);

std::string distance_report_csv(const DistanceReport& rep);

} // namespace mvlab
