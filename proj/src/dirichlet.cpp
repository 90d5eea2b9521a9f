#include "mvlab/dirichlet.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "mvlab/primes.hpp"
#include "mvlab/sieve.hpp"

namespace mvlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalC = 27.0 / (1024.0 * kPi); // admissible pointwise-decay constant
constexpr std::uint32_t kSmallPrimeCut = 97;    // exact factors below, p^{-ks} layers above

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

cplx p_pow(double p, cplx s) { return std::exp(-s * std::log(p)); } // p^{-s}

cplx euler_factor(cplx g, double p, cplx s, bool complete) {
    cplx w = p_pow(p, s);
    if (complete) {
        cplx d = 1.0 - g * w;
        if (d == cplx(0.0)) throw zero_divisor_error(std::uint32_t(p));
        return 1.0 / d;
    }
    cplx f = 1.0 + g * w / (1.0 - w);
    if (f == cplx(0.0)) throw zero_divisor_error(std::uint32_t(p));
    return f;
}

} // namespace

EulerProductResult euler_product(const MultFnSpec& spec, cplx s, std::uint64_t cutoff, bool absolute,
                                 std::optional<int> class_index) {
    if (!(s.real() > 1.0)) throw config_error("euler_product: Re(s) > 1 required");
    if (cutoff < 1000) throw config_error("euler_product: cutoff >= 10^3 required");
    const bool complete = spec.extension == Extension::Complete;
    EulerProductResult out;
    out.s = s;
    out.prime_cutoff = cutoff;
    auto table = PrimeTable::up_to(cutoff);
    czsum logsum;
    for (std::uint32_t p : table->primes) {
        if (p > cutoff) break;
        if (class_index && classify(spec.partition, spec, p) != *class_index) continue;
        cplx g = spec.value_at_prime(p);
        if (absolute) g = std::abs(g);
        if (g == cplx(0.0)) continue;
        cplx f = euler_factor(g, double(p), s, complete);
        out.value *= f;
        logsum.add(std::log(f));
    }
    out.log_value = logsum.value();
    // |log tail| <= 2B sum_{p>u} p^{-sigma}.  Partial summation against the PNT
    // evaluates the sum as E1((sigma-1) log u) near sigma = 1; away from 1 the crude integer-sum
    // bound u^{1-sigma}/(sigma-1) is far smaller.  Take the better of the two.
    const double B = spec.partition.B_max();
    const double sigma = s.real();
    const double flat = 1.2 * expint_e1((sigma - 1.0) * std::log(double(cutoff)));
    const double intb = std::pow(double(cutoff), 1.0 - sigma) / (sigma - 1.0);
    out.tail_bound = 2.0 * B * std::min(flat, intb);
    return out;
}

G0Result g0_factor(const MultFnSpec& spec, cplx s, std::uint64_t cutoff) {
    auto G = euler_product(spec, s, cutoff, false);
    auto table = PrimeTable::up_to(cutoff);
    czsum ps;
    for (std::uint32_t p : table->primes) {
        if (p > cutoff) break;
        ps.add(spec.value_at_prime(p) * p_pow(double(p), s));
    }
    G0Result out;
    out.g0 = G.value * std::exp(-ps.value());
    const double B = spec.partition.B_max();
    out.bound = 2.0 * std::exp(B * (B + 1.0)) * std::pow(std::log(1.0 + B), 4.0 * B);
    out.bound_checked = B >= 1.0;
    out.ratio = std::abs(out.g0) / out.bound;
    return out;
}

ZetaResult zeta(cplx s) {
    if (!(s.real() > 1.0)) throw config_error("zeta: Re(s) > 1 required (no continuation in scope)");
    ZetaResult out;
    out.precision_warning = s.real() < 1.0 + 1e-3;
    // Euler-Maclaurin with N = 200 and six Bernoulli corrections; good to
    // ~1e-9 relative for sigma = 1 + 1/log(10^8) and moderate |tau|.
    constexpr int N = 200;
    static const double B2k[6] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
    static const double fact2k[6] = {2, 24, 720, 40320, 3628800, 479001600};
    cplx sum = 0.0;
    for (int n = 1; n < N; ++n) sum += p_pow(double(n), s);
    const cplx Ns = p_pow(double(N), s); // N^{-s}
    sum += Ns * double(N) / (s - 1.0);   // N^{1-s}/(s-1)
    sum += Ns * 0.5;
    cplx rising = s; // s(s+1)...(s+2k-2)
    for (int k = 1; k <= 6; ++k) {
        // N^{-s-2k+1} = Ns * N^{-(2k-1)}
        cplx term = rising * (B2k[k - 1] / fact2k[k - 1]) * Ns * std::pow(double(N), -(2 * k - 1));
        sum += term;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
    }
    out.value = sum;
    return out;
}

// ---- pointwise Halasz machinery ----------------------------------------------

namespace {

// Coefficients of log(Euler factor) = sum_k c_k p^{-ks} (three layers).
std::array<cplx, 3> log_factor_coeffs(cplx g, bool complete) {
    if (complete) return {g, g * g / 2.0, g * g * g / 3.0};
    return {g, g - g * g / 2.0, g - g * g + g * g * g / 3.0};
}

struct LayeredSeries {
    // layers k = 1..3 over primes > kSmallPrimeCut
    std::array<std::vector<double>, 3> lp, wr, wi;
    // exact part
    std::vector<std::uint32_t> small_p;
    std::vector<cplx> small_g;
    bool complete = false;
    double sigma = 0.0;
};

// g_of(p) returns the coefficient value (possibly |g| or class-filtered 0).
template <class F>
LayeredSeries build_layers(const MultFnSpec& spec, std::uint64_t cutoff, double sigma, F&& g_of) {
    LayeredSeries L;
    L.complete = spec.extension == Extension::Complete;
    L.sigma = sigma;
    auto table = PrimeTable::up_to(cutoff);
    for (std::uint32_t p : table->primes) {
        if (p > cutoff) break;
        cplx g = g_of(p);
        if (g == cplx(0.0)) continue;
        if (p <= kSmallPrimeCut) {
            L.small_p.push_back(p);
            L.small_g.push_back(g);
            continue;
        }
        auto c = log_factor_coeffs(g, L.complete);
        double logp = std::log(double(p));
        // Layer k carries weight ~ p^{-k sigma}: beyond these cutoffs the
        // dropped mass is below 1e-7 and the lhs is only ratio-tested.
        const int layers = p <= 30000 ? 3 : (p <= 1000000 ? 2 : 1);
        for (int k = 0; k < layers; ++k) {
            double pw = std::exp(-sigma * double(k + 1) * logp);
            L.lp[k].push_back(double(k + 1) * logp);
            L.wr[k].push_back(c[k].real() * pw);
            L.wi[k].push_back(c[k].imag() * pw);
        }
    }
    return L;
}

// Re log Prod over the tau grid; marks points where a small-prime factor vanishes.
void layered_re_log(const LayeredSeries& L, const TauGrid& grid, std::vector<double>& out,
                    std::vector<bool>* skipped, unsigned workers) {
    const std::size_t total = grid.size();
    out.assign(total, 0.0);
    std::size_t off = 0;
    for (const auto& seg : grid.segments) {
        for (int k = 0; k < 3; ++k) phase_sweep(L.lp[k], L.wr[k], L.wi[k], seg, out.data() + off, workers);
        off += seg.count;
    }
    // exact small-prime factors
    auto pts = grid.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        cplx s(L.sigma, pts[i]);
        double add = 0.0;
        bool dead = false;
        for (std::size_t j = 0; j < L.small_p.size(); ++j) {
            cplx w = p_pow(double(L.small_p[j]), s);
            cplx f = L.complete ? 1.0 / (1.0 - L.small_g[j] * w) : 1.0 + L.small_g[j] * w / (1.0 - w);
            double m = std::abs(f);
            if (m < 1e-12) {
                dead = true;
                break;
            }
            add += std::log(m);
        }
        if (dead) {
            if (skipped) (*skipped)[i] = true;
            out[i] = -std::numeric_limits<double>::infinity();
        } else {
            out[i] += add;
        }
    }
}

double two_regime_bound(double tau, double sm1) {
    if (std::abs(tau) <= 2.0) return std::exp(-kHalC * std::log1p(std::abs(tau) / sm1));
    return std::exp(-kHalC * std::log1p(1.0 / sm1));
}

} // namespace

HalaszContext halasz_context(const MultFnSpec& spec, std::uint64_t x, const DistanceReport& rho) {
    HalaszContext ctx;
    ctx.x = x;
    ctx.sigma = 1.0 + 1.0 / std::log(double(x));
    ctx.rho_T = rho.T;
    const cplx s0(ctx.sigma, 0.0);
    ctx.G_abs_sigma = euler_product(spec, s0, x, true).value.real();
    ctx.G_sigma_abs = std::abs(euler_product(spec, s0, x, false).value);
    const std::size_t m = spec.partition.m();
    ctx.Gj_abs_sigma.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        ctx.Gj_abs_sigma[j] = euler_product(spec, s0, x, true, int(j + 1)).value.real();

    // (a) distance-exponential bound: exp(-sum_j B_j (rho_Ej + sum_{p in Ej} (1-|g~|)/p)).
    auto table = PrimeTable::up_to(x);
    std::vector<csum> one_minus(m);
    for (std::uint32_t p : table->primes) {
        if (p > x) break;
        int j = classify(spec.partition, spec, p);
        if (j == kClassS) continue;
        double gt = std::abs(spec.value_at_prime(p)) / spec.partition.classes[std::size_t(j - 1)].B;
        one_minus[std::size_t(j - 1)].add((1.0 - gt) / double(p));
    }
    double expo = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        expo += spec.partition.classes[j].B * (rho.rho[j] + one_minus[j].value());
    ctx.bound_distance = std::exp(-expo);

    // (d) fixed-power bound: |G(sigma)/G_abs(sigma)|^{gamma0/(2(1+gamma0))}.
    double gamma0 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const auto& cp = spec.partition.classes[j];
        double g = gamma0_of(cp.delta, cp.B, cp.beta);
        gamma0 = j == 0 ? g : std::min(gamma0, g);
    }
    ctx.bound_fixed_power = std::pow(ctx.G_sigma_abs / ctx.G_abs_sigma, gamma0 / (2.0 * (1.0 + gamma0)));
    return ctx;
}

HalaszBoundsRecord halasz_pointwise(const MultFnSpec& spec, std::uint64_t x, double tau, const HalaszContext& ctx) {
    HalaszBoundsRecord rec;
    rec.bound_distance = ctx.bound_distance;
    rec.bound_fixed_power = ctx.bound_fixed_power;
    const cplx s(ctx.sigma, tau);
    try {
        rec.lhs = std::abs(euler_product(spec, s, x, false).value) / ctx.G_abs_sigma;
    } catch (const zero_divisor_error&) {
        rec.skipped_zero = true;
        return rec;
    }
    double hb = 0.0;
    for (std::size_t j = 0; j < spec.partition.m(); ++j) {
        const auto& cp = spec.partition.classes[j];
        double Gj_s = std::abs(euler_product(spec, s, x, true, int(j + 1)).value);
        hb += (cp.delta * cp.beta * cp.beta * cp.beta / cp.B) * std::log(Gj_s / ctx.Gj_abs_sigma[j]);
    }
    rec.bound_class_product = std::exp(kHalC * hb);
    rec.bound_two_regime = two_regime_bound(tau, ctx.sigma - 1.0);
    return rec;
}

HalaszBoundsRecord halasz_pointwise(const MultFnSpec& spec, std::uint64_t x, double tau) {
    double T = std::max(2.0 * std::abs(tau), 8.0);
    auto rho = rho_min(spec, x, 2.1, 0.0, 2, T);
    auto ctx = halasz_context(spec, x, rho);
    return halasz_pointwise(spec, x, tau, ctx);
}

HalaszSweep halasz_sweep(const MultFnSpec& spec, std::uint64_t x, double D_exp, double T_cap, unsigned workers) {
    const double sm1 = 1.0 / std::log(double(x));
    double T = std::pow(std::log(double(x)), D_exp);
    if (T_cap > 0) T = std::min(T, T_cap);

    const bool trace = std::getenv("MVLAB_TRACE_SWEEP") != nullptr;
    auto tick = std::chrono::steady_clock::now();
    auto lap = [&](const char* what) {
        if (!trace) return;
        auto now = std::chrono::steady_clock::now();
        std::fprintf(stderr, "halasz_sweep %s: %.2f s\n", what,
                     std::chrono::duration<double>(now - tick).count());
        tick = now;
    };

    HalaszSweep sw;
    auto rho = rho_min(spec, x, D_exp, 0.0, workers, T);
    lap("rho");
    sw.ctx = halasz_context(spec, x, rho);
    lap("context");

    TauGrid grid = TauGrid::profile(sm1, T, sm1 / 4);
    sw.tau = grid.points();
    const std::size_t n = sw.tau.size();
    sw.skipped.assign(n, false);

    // Re log G(s) via the layered kernel.
    auto Lg = build_layers(spec, x, sw.ctx.sigma, [&](std::uint32_t p) { return spec.value_at_prime(p); });
    lap("build G layers");
    std::vector<double> relog;
    layered_re_log(Lg, grid, relog, &sw.skipped, workers);
    lap("sweep G layers");
    const double logGabs = std::log(sw.ctx.G_abs_sigma);
    sw.lhs.resize(n);
    for (std::size_t i = 0; i < n; ++i) sw.lhs[i] = std::exp(relog[i] - logGabs);

    // Per-class absolute products for the class-product decay bound.
    sw.bound_class_product.assign(n, 0.0);
    for (std::size_t j = 0; j < spec.partition.m(); ++j) {
        const auto& cp = spec.partition.classes[j];
        auto Lj = build_layers(spec, x, sw.ctx.sigma, [&](std::uint32_t p) -> cplx {
            if (classify(spec.partition, spec, p) != int(j + 1)) return 0.0;
            return std::abs(spec.value_at_prime(p));
        });
        std::vector<double> relog_j;
        layered_re_log(Lj, grid, relog_j, nullptr, workers);
        const double w = cp.delta * cp.beta * cp.beta * cp.beta / cp.B;
        const double lj_sigma = std::log(sw.ctx.Gj_abs_sigma[j]);
        for (std::size_t i = 0; i < n; ++i) sw.bound_class_product[i] += w * (relog_j[i] - lj_sigma);
    }
    lap("class layers");
    sw.bound_two_regime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sw.bound_class_product[i] = std::exp(kHalC * sw.bound_class_product[i]);
        sw.bound_two_regime[i] = two_regime_bound(sw.tau[i], sm1);
    }

    // Zero skips are legitimate only inside the zero-free criterion's excluded region.
    const double B = spec.partition.B_max();
    const double excluded = B > 1.0 ? sw.ctx.sigma / std::log(B) : 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (sw.skipped[i] && (B <= 1.0 || std::abs(sw.tau[i]) < excluded)) ++sw.zero_skips_outside_excluded;
    return sw;
}

std::string HalaszSweep::to_csv() const {
    std::ostringstream os;
    os << "tau,lhs,G_abs_sigma,bound_distance,bound_class_product,bound_two_regime,bound_fixed_power,"
          "ratio_distance,ratio_class_product,ratio_two_regime,ratio_fixed_power,skipped\n";
    for (std::size_t i = 0; i < tau.size(); ++i) {
        double l = lhs[i];
        os << fmt(tau[i]) << "," << fmt(l) << "," << fmt(ctx.G_abs_sigma) << "," << fmt(ctx.bound_distance) << ","
           << fmt(bound_class_product[i]) << "," << fmt(bound_two_regime[i]) << "," << fmt(ctx.bound_fixed_power) << ","
           << fmt(l / ctx.bound_distance) << "," << fmt(l / bound_class_product[i]) << "," << fmt(l / bound_two_regime[i])
           << "," << fmt(l / ctx.bound_fixed_power) << "," << (skipped[i] ? 1 : 0) << "\n";
    }
    return os.str();
}

// ---- line integrals ------------------------------------------------------------

namespace {

// Sum_{p^k <= cutoff} g(p^k) log p n^{-s} as rotation-kernel data.
struct LambdaPoly {
    std::vector<double> ln, wr, wi;
};

LambdaPoly lambda_poly(const MultFnSpec& spec, std::uint64_t cutoff, double sigma) {
    LambdaPoly poly;
    for (const auto& e : prime_powers_up_to(cutoff)) {
        cplx w = spec.value_at_prime_power(e.p, e.k) * e.log_p * std::pow(double(e.n), -sigma);
        if (w == cplx(0.0)) continue;
        poly.ln.push_back(std::log(double(e.n)));
        poly.wr.push_back(w.real());
        poly.wi.push_back(w.imag());
    }
    return poly;
}

// |Sum w e^{-i tau l}|^2 over the grid: two phase sweeps (Re and Im parts).
std::vector<double> poly_modsq(const LambdaPoly& poly, const TauGrid& grid, unsigned workers) {
    const std::size_t total = grid.size();
    std::vector<double> re(total, 0.0), im(total, 0.0);
    std::vector<double> wi_neg(poly.wr.size());
    for (std::size_t i = 0; i < poly.wr.size(); ++i) wi_neg[i] = -poly.wr[i];
    std::size_t off = 0;
    for (const auto& seg : grid.segments) {
        phase_sweep(poly.ln, poly.wr, poly.wi, seg, re.data() + off, workers);
        // Im Sum w e^{-i tau l} = Re Sum (wi - i wr) e^{-i tau l}
        phase_sweep(poly.ln, poly.wi, wi_neg, seg, im.data() + off, workers);
        off += seg.count;
    }
    std::vector<double> out(total);
    for (std::size_t i = 0; i < total; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
    return out;
}

} // namespace

LineIntegralResult j_integral(const MultFnSpec& spec, IntegrandKind kind, double sigma, double T_max,
                              std::uint64_t cutoff, cplx A, unsigned workers) {
    if (!(sigma > 1.0)) throw config_error("j_integral: sigma > 1 required");
    if (T_max > std::pow(sigma - 1.0, -3.0)) throw config_error("j_integral: T_max beyond (sigma-1)^{-3}");
    const double sm1 = sigma - 1.0;
    const double base_step = sm1 / 4;
    if (base_step > sm1) throw config_error("j_integral: step too coarse near tau = 0");
    const double cap = 0.25 / std::log(double(cutoff));
    TauGrid grid = TauGrid::profile(sm1, T_max, base_step, cap);
    auto pts = grid.points();

    std::vector<double> f(pts.size(), 0.0);
    double sup_deriv = 0.0; // prime-sum sup for the tail estimate

    if (kind == IntegrandKind::Lambda) {
        auto poly = lambda_poly(spec, cutoff, sigma);
        auto modsq = poly_modsq(poly, grid, workers);
        for (std::size_t i = 0; i < pts.size(); ++i) f[i] = modsq[i] / (sigma * sigma + pts[i] * pts[i]);
        double s_abs = 0.0;
        for (std::size_t i = 0; i < poly.wr.size(); ++i) s_abs += std::hypot(poly.wr[i], poly.wi[i]);
        sup_deriv = s_abs;
    } else {
        // Direct evaluation: F' from the G0-factored logarithmic derivative,
        // G0'/G0 by central finite difference in the sigma direction.
        auto table = PrimeTable::up_to(cutoff);
        const double fd_h = 1e-6;
        parallel_blocks(pts.size(), workers, [&](std::size_t i) {
            const cplx s(sigma, pts[i]);
            auto deriv = [&](bool absolute) -> cplx {
                auto ep = euler_product(spec, s, cutoff, absolute);
                czsum ps;
                for (std::uint32_t p : table->primes) {
                    if (p > cutoff) break;
                    cplx g = spec.value_at_prime(p);
                    if (absolute) g = std::abs(g);
                    ps.add(g * std::log(double(p)) * p_pow(double(p), s));
                }
                auto g0_at = [&](cplx z) {
                    auto ep2 = euler_product(spec, z, cutoff, absolute);
                    czsum q;
                    for (std::uint32_t p : table->primes) {
                        if (p > cutoff) break;
                        cplx g = spec.value_at_prime(p);
                        if (absolute) g = std::abs(g);
                        q.add(g * p_pow(double(p), z));
                    }
                    return ep2.value * std::exp(-q.value());
                };
                cplx g0 = g0_at(s);
                cplx g0d = (g0_at(s + fd_h) - g0_at(s - fd_h)) / (2.0 * fd_h);
                return ep.value * (-ps.value() + g0d / g0);
            };
            cplx d;
            switch (kind) {
                case IntegrandKind::JG: d = deriv(false); break;
                case IntegrandKind::JGabs: d = deriv(true); break;
                case IntegrandKind::JH: d = deriv(false) - A * deriv(true); break;
                default: d = 0.0; break;
            }
            f[i] = std::norm(d) / (sigma * sigma + pts[i] * pts[i]);
        });
        // sup estimate: G_abs(sigma) (Lambda-sum at sigma + G0 drift allowance)
        double s_lam = 0.0;
        for (const auto& e : prime_powers_up_to(cutoff))
            s_lam += std::abs(spec.value_at_prime_power(e.p, e.k)) * e.log_p * std::pow(double(e.n), -sigma);
        double gabs = euler_product(spec, cplx(sigma, 0.0), cutoff, true).value.real();
        sup_deriv = gabs * (s_lam + 8.0) * (kind == IntegrandKind::JH ? 1.0 + std::abs(A) : 1.0);
    }

    LineIntegralResult out;
    out.sigma = sigma;
    out.kind = kind;
    out.A = A;
    out.T_max = T_max;
    out.cutoff = cutoff;
    out.base_step = base_step;
    csum quad;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        quad.add(0.5 * (pts[i + 1] - pts[i]) * (f[i] + f[i + 1]));
    out.value = quad.value();
    // int_{|tau|>T} |ds|/|s|^2 = 2 (pi/2 - atan(T/sigma)) / sigma
    out.tail_estimate = sup_deriv * sup_deriv * 2.0 * (kPi / 2 - std::atan(T_max / sigma)) / sigma;
    const double B = spec.partition.B_max();
    out.series_tail = B * std::pow(double(cutoff), 1.0 - sigma) / (sigma - 1.0);
    return out;
}

std::string LineIntegralResult::to_json() const {
    static const char* names[] = {"JG", "JGabs", "JH", "Lambda"};
    std::ostringstream os;
    os << "{\"schema_version\":1,\"integrand\":\"" << names[int(kind)] << "\",\"sigma\":" << fmt(sigma)
       << ",\"A\":[" << fmt(A.real()) << "," << fmt(A.imag()) << "],\"T_max\":" << fmt(T_max)
       << ",\"cutoff\":" << cutoff << ",\"value\":" << fmt(value)
       << ",\"error_budget\":{\"tail_estimate\":" << fmt(tail_estimate)
       << ",\"series_tail\":" << fmt(series_tail) << ",\"base_step\":" << fmt(base_step) << "}}";
    return os.str();
}

ParsevalResult parseval_oracle(const MultFnSpec& spec, double sigma, double v_max) {
    if (!(sigma > 1.0)) throw config_error("parseval_oracle: sigma > 1 required");
    const std::uint64_t N = std::uint64_t(std::floor(std::exp(v_max)));
    auto jumps = mangoldt_jumps(spec, N);
    // P(v) is constant between jumps at v = log n: integrate e^{-2 sigma v}
    // against |P|^2 exactly, interval by interval, closing with the constant
    // tail of the truncated series.
    csum integral;
    cplx P = 0.0;
    for (std::size_t j = 0; j < jumps.size(); ++j) {
        P += jumps[j].weight;
        const double va = std::log(double(jumps[j].n));
        const double ea = std::exp(-2.0 * sigma * va);
        const double eb = j + 1 < jumps.size() ? std::exp(-2.0 * sigma * std::log(double(jumps[j + 1].n))) : 0.0;
        integral.add(std::norm(P) * (ea - eb) / (2.0 * sigma));
    }
    ParsevalResult out;
    out.value = 2.0 * kPi * integral.value();
    const double B = spec.partition.B_max();
    out.truncation_bound = std::exp(-2.0 * v_max * (sigma - 1.0)) * (B * v_max) * (B * v_max);
    return out;
}

MontgomeryResult montgomery_majorant_check(int trials, std::uint64_t seed) {
    if (trials < 1) throw config_error("montgomery_majorant_check: trials >= 1");
    MontgomeryResult out;
    out.trials = trials;
    rng64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        const int len = 5 + int(rng.below(21)); // coefficients for n = 1..len
        std::vector<double> ln(len), bw(len);
        std::vector<cplx> aw(len);
        const bool all_zero = t % 97 == 3; // exercise the vacuous edge now and then
        const bool equal = t % 11 == 0;    // a_n = b_n > 0 edge: ratio near 1
        for (int n = 0; n < len; ++n) {
            ln[n] = std::log(double(n + 1));
            double b = all_zero ? 0.0 : rng.uniform();
            bw[n] = b;
            double r = equal ? 1.0 : rng.uniform();
            double th = equal ? 0.0 : rng.uniform(0.0, 2 * kPi);
            aw[n] = std::polar(r * b, th);
        }
        const double sigma = rng.uniform(1.05, 2.0);
        const double T = rng.uniform(1.0, 100.0);
        // Simpson on a uniform grid; integrand oscillates no faster than log(len).
        const double h_target = 0.01;
        std::size_t half = std::size_t(std::ceil(T / h_target));
        const std::size_t count = 2 * half + 1;
        const double h = 2.0 * T / double(count - 1);
        TauSegment seg{-T, h, count};

        auto mod2 = [&](const std::vector<cplx>& w) {
            std::vector<double> re(count, 0.0), im(count, 0.0);
            std::vector<double> wr(len), wi(len), wi2(len);
            for (int n = 0; n < len; ++n) {
                cplx c = w[n] * std::pow(double(n + 1), -sigma);
                wr[n] = c.real();
                wi[n] = c.imag();
                wi2[n] = -c.real();
            }
            phase_sweep(ln, wr, wi, seg, re.data(), 1);
            phase_sweep(ln, wi, wi2, seg, im.data(), 1);
            double s = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                double w4 = (i == 0 || i + 1 == count) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                s += w4 * (re[i] * re[i] + im[i] * im[i]);
            }
            return s * h / 3.0;
        };
        std::vector<cplx> bwc(bw.begin(), bw.end());
        double IA = mod2(aw), IB = mod2(bwc);
        double ratio = IB > 0 ? IA / IB : (IA > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        out.max_ratio = std::max(out.max_ratio, ratio);
        if (ratio <= 3.0 * (1.0 + 1e-2)) ++out.passes;
    }
    return out;
}

ZeroFreeVerdict zero_free_check(const MultFnSpec& spec, double sigma, double tau_range) {
    if (spec.extension != Extension::Strong) throw config_error("zero_free_check: strong extension only");
    ZeroFreeVerdict v;
    const double B = spec.partition.B_max();
    v.zeros_possible = B > 1.0;
    if (v.zeros_possible) {
        // The zero-location argument needs |arg g(p)| < 1 for the B > 1 branch.
        auto table = PrimeTable::up_to(10000);
        for (std::uint32_t p : table->primes)
            if (std::abs(std::arg(spec.value_at_prime(p))) >= 1.0)
                throw config_error("zero_free_check: |arg g(p)| < 1 violated at p = " + std::to_string(p));
        v.excluded_tau = sigma / std::log(B);
    }
    const std::uint64_t pmax = std::uint64_t(std::pow(B, 1.0 / sigma)) + 1;
    auto table = PrimeTable::up_to(std::max<std::uint64_t>(pmax, 1024));
    const double step = (sigma - 1.0) / 4;
    double min_mod = std::numeric_limits<double>::infinity();
    for (double tau = -tau_range; tau <= tau_range + 1e-12; tau += step) {
        if (v.zeros_possible && std::abs(tau) >= v.excluded_tau) continue;
        const cplx s(sigma, tau);
        for (std::uint32_t p : table->primes) {
            if (p > pmax) break;
            cplx w = p_pow(double(p), s);
            cplx f = 1.0 + spec.value_at_prime(p) * w / (1.0 - w);
            min_mod = std::min(min_mod, std::abs(f));
        }
    }
    v.min_factor_modulus = min_mod;
    v.pass = !(min_mod < 1e-9);
    return v;
}

} // namespace mvlab
