// Theorem-level verifiers: assemble sieve and Dirichlet quantities into both
// sides of each main inequality/asymptotic and produce pass/fail ratio reports.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvlab/dirichlet.hpp"
#include "mvlab/multfn.hpp"
#include "mvlab/sieve.hpp"

namespace mvlab {

struct VerifyOptions {
    double D_exp = 2.1;           // tau-range exponent, T = log^D x
    unsigned workers = 2;
    std::string cache_dir;        // empty: no table cache
    double tolerance_factor = 10.0; // implicit-constant policy: ratio <= 10x smallest-x fit
    double c6_threshold = 1.0;    // C_b condition vi constant (0 admits real-positive g)
    SieveConfig sieve;
};

struct SeriesPoint {
    std::uint64_t x = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct TheoremReport {
    std::string theorem;
    std::string spec_label;
    std::uint64_t spec_hash = 0;
    std::vector<SeriesPoint> series;
    double fit_constant = 0.0; // ratio at the smallest grid x
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    double trend_slope = 0.0;  // least squares of ratio against log x
    double tolerance = 10.0;
    bool pass = false;
    std::string detail;
    double wall_seconds = 0.0;
    // named auxiliary series (chain links, reported residuals)
    std::vector<std::pair<std::string, std::vector<double>>> extra;

    std::string to_json() const;
    std::string to_csv() const;
    void finish_stats(); // fills fit/max/min/slope from the series
};

struct AsymptoticReport {
    std::string theorem;
    std::string spec_label;
    std::vector<std::uint64_t> x;
    std::vector<cplx> A;          // exp(sum (g-|g|)/p)
    std::vector<cplx> measured;   // M_g / M_{|g|} (or M_g / M_f)
    std::vector<double> residual; // |measured - main term|
    std::vector<double> budget;   // R (or (P/phi P)(R1|A| + R2 X))
    // budget components, per x
    std::vector<double> term_eta;   // eta^{1/2}|A|(d1 + ...) block
    std::vector<double> term_Apow;  // |A|^{gamma0/(4(1+gamma0))}(...) block
    std::vector<double> prefactor;  // (B^2/delta)(P/phi(P)) (or (B/delta)^2 ...)
    // WIRSINGEXT-specific series
    std::vector<double> X;
    std::vector<double> R1, R2;
    std::vector<double> F_exponent; // F(x; g) of variant i
    double eta = 0.0, delta = 0.0, B = 0.0, d1 = 0.0, gamma0 = 0.0, gamma = 0.0, beta_min = 0.0;
    double fit_constant = 0.0;
    double max_excess = 0.0; // max residual/(fit * budget)
    bool pass = false;
    std::string detail;
    std::string to_json() const;
};

// General upper bound: |M_g| vs (B^2/delta)(P/phi P) M_{|g|} exp(-sum_j B_j (rho_j - sum (1-|g~|)/p)).
TheoremReport verify_upper_general(const MultFnSpec& spec, const std::vector<std::uint64_t>& x_grid,
                                   const VerifyOptions& opt = {});

// Explicit upper bound: the c_j exponent, for C_b specs.
TheoremReport verify_upper_explicit(const MultFnSpec& spec, const std::vector<std::uint64_t>& x_grid,
                                    const VerifyOptions& opt = {});

// Small-argument asymptotic: residual |M_g/M_{|g|} - A| against the R budget.
AsymptoticReport verify_asymptotic(const MultFnSpec& spec, const std::vector<std::uint64_t>& x_grid,
                                   const VerifyOptions& opt = {});

// Lower mean value: M_lambda vs delta (phi(P)/P)(x/log x) prod (1 + lambda(p)/p).
TheoremReport verify_lower_mean_value(const MultFnSpec& lambda_spec, const std::vector<std::uint64_t>& x_grid,
                                      const VerifyOptions& opt = {});

// Ratio limit: M_g/M_f against the partial Euler product, with the
// zero-interpretation clause.
TheoremReport verify_wirsing_limit(const MultFnSpec& g_spec, const MultFnSpec& f_spec,
                                   const std::vector<std::uint64_t>& x_grid, const VerifyOptions& opt = {});

struct WirsingExtResult {
    TheoremReport report;    // variant i ratio series (empty for variant ii)
    AsymptoticReport asym;   // variant ii residual/budget (empty for variant i)
};
WirsingExtResult verify_wirsing_ext(const MultFnSpec& g_spec, const MultFnSpec& f_spec,
                                    const std::vector<std::uint64_t>& x_grid, int variant,
                                    const VerifyOptions& opt = {});

// The lower-bound chain M_{|g|} >> integral average >> L_{|g|} >> G_abs(sigma)
// as a linked ratio report (with the explicit L-vs-product constants), plus
// the short-interval average residual ratio (reported, not asserted).
TheoremReport verify_integral_average_chain(const MultFnSpec& spec, const std::vector<std::uint64_t>& t_grid,
                                            const VerifyOptions& opt = {});

// R_h(lambda) = max_t |M_h(t)|/M_{|g|}(t) log^lambda t over the table's
// checkpoints, h = g - A|g|: the weighted sup-ratio driving the iteration.
double weighted_ratio_max(const SummatoryTable& table, cplx A, double lambda);

// Default geometric grid {10^4, 10^4.5, ..., 10^7}; extended appends up to 10^8.
std::vector<std::uint64_t> default_x_grid(bool extended = false);

} // namespace mvlab
