// Euler products and line-integral analytics: G(s), the absolute series
// G_abs(s), the G0 factorization, a zeta evaluator, pointwise Halasz-decay
// bounds, and the J_F integrals with their Parseval sieve oracle.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvlab/multfn.hpp"
#include "mvlab/numerics.hpp"
#include "mvlab/prime_analysis.hpp"

namespace mvlab {

struct zero_divisor_error : std::runtime_error {
    std::uint32_t p;
    explicit zero_divisor_error(std::uint32_t prime)
        : std::runtime_error("Euler factor vanishes at p = " + std::to_string(prime)), p(prime) {}
};

struct EulerProductResult {
    cplx s;
    cplx value = 1.0;
    cplx log_value = 0.0; // principal-branch accumulation, factor by factor
    std::uint64_t prime_cutoff = 0;
    double tail_bound = 0.0; // bound on |log tail| via the prime tail integral
};

// Product of (1 + g(p)/(p^s - 1)) [strong] or (1 - g(p)p^{-s})^{-1} [complete]
// over p <= cutoff; `absolute` substitutes |g|.  class_index restricts to one
// partition class (the per-class factors G_j / G_abs_j).
EulerProductResult euler_product(const MultFnSpec& spec, cplx s, std::uint64_t cutoff, bool absolute,
                                 std::optional<int> class_index = std::nullopt);

struct G0Result {
    cplx g0 = 0.0;
    double bound = 0.0; // 2 e^{B(B+1)} (log(1+B))^{4B}, meaningful for B >= 1
    double ratio = 0.0; // |g0| / bound
    bool bound_checked = false;
};
// G0(s) = G(s) exp(-sum_{p<=cutoff} g(p) p^{-s}) with matching cutoffs.
G0Result g0_factor(const MultFnSpec& spec, cplx s, std::uint64_t cutoff);

struct ZetaResult {
    cplx value;
    bool precision_warning = false; // Re(s) < 1 + 1e-3
};
// Truncated Dirichlet sum with Euler-Maclaurin tail correction (200 terms,
// 6 Bernoulli corrections); relative error <= 1e-9 on Re(s) >= 1 + 1e-3.
ZetaResult zeta(cplx s);

// ---- pointwise Halasz decay -------------------------------------------------
struct HalaszBoundsRecord {
    double lhs = 0.0;      // |G(s)| / G_abs(sigma)
    double bound_distance = 0.0;     // (a) distance exponential, tau-independent
    double bound_class_product = 0.0; // (b) per-class decay product at this tau
    double bound_two_regime = 0.0; // (c) two-regime zeta-style decay bound
    double bound_fixed_power = 0.0; // (d) fixed power of |G(sigma)/G_abs(sigma)|, tau-independent
    bool skipped_zero = false;
};

// Precomputed tau-independent data for a pointwise sweep at one x.
struct HalaszContext {
    std::uint64_t x = 0;
    double sigma = 0.0;
    double G_abs_sigma = 0.0;    // G_abs(sigma)
    double G_sigma_abs = 0.0;    // |G(sigma)|
    std::vector<double> Gj_abs_sigma; // per-class G_abs_j(sigma)
    double bound_distance = 0.0;
    double bound_fixed_power = 0.0;
    double rho_T = 0.0; // tau range the rho minimization covered
};
HalaszContext halasz_context(const MultFnSpec& spec, std::uint64_t x, const DistanceReport& rho);

HalaszBoundsRecord halasz_pointwise(const MultFnSpec& spec, std::uint64_t x, double tau, const HalaszContext& ctx);
// Convenience form; builds the context with a default grid.
HalaszBoundsRecord halasz_pointwise(const MultFnSpec& spec, std::uint64_t x, double tau);

struct HalaszSweep {
    HalaszContext ctx;
    std::vector<double> tau;
    std::vector<double> lhs;            // |G(s)|/G_abs(sigma)
    std::vector<double> bound_class_product; // per point
    std::vector<double> bound_two_regime;
    std::vector<bool> skipped;
    std::size_t zero_skips_outside_excluded = 0;
    std::string to_csv() const;
};
// Fast layered sweep of lhs and the tau-dependent bounds over the tau profile
// truncated at T_cap (0 = full log^D x range).
HalaszSweep halasz_sweep(const MultFnSpec& spec, std::uint64_t x, double D_exp, double T_cap,
                         unsigned workers = 2);

// ---- line integrals ----------------------------------------------------------
enum class IntegrandKind { JG, JGabs, JH, Lambda };

struct LineIntegralResult {
    double sigma = 0.0;
    IntegrandKind kind = IntegrandKind::JG;
    cplx A = 0.0;
    double T_max = 0.0;
    std::uint64_t cutoff = 0;
    double value = 0.0;         // quadrature over |tau| <= T_max
    double tail_estimate = 0.0; // beyond T_max
    double series_tail = 0.0;   // from truncating the Dirichlet series
    double base_step = 0.0;
    std::string to_json() const;
};

// Composite trapezoid on the prime_analysis tau profile with an extra step cap
// 0.25/log(cutoff) so the integrand's oscillation (frequencies up to
// log cutoff) stays resolved.
LineIntegralResult j_integral(const MultFnSpec& spec, IntegrandKind kind, double sigma, double T_max,
                              std::uint64_t cutoff, cplx A = 0.0, unsigned workers = 2);

struct ParsevalResult {
    double value = 0.0;            // 2 pi int_0^inf e^{-2 v sigma} |P(v)|^2 dv, P truncated at e^{v_max}
    double truncation_bound = 0.0; // e^{-2 v_max (sigma-1)} (B v_max)^2 shape
};
ParsevalResult parseval_oracle(const MultFnSpec& spec, double sigma, double v_max);

struct MontgomeryResult {
    int trials = 0;
    int passes = 0;
    double max_ratio = 0.0;
};
// Random Dirichlet polynomials |a_n| <= b_n; checks
// int_{-T}^{T} |A|^2 <= 3 int_{-T}^{T} |B|^2 by dense quadrature.
MontgomeryResult montgomery_majorant_check(int trials, std::uint64_t seed);

struct ZeroFreeVerdict {
    bool zeros_possible = false; // false when B <= 1
    double min_factor_modulus = 0.0;
    double excluded_tau = 0.0; // sigma / log B for B > 1
    bool pass = false;
};
ZeroFreeVerdict zero_free_check(const MultFnSpec& spec, double sigma, double tau_range);

} // namespace mvlab
