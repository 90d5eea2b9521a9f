#include "mvlab/prime_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace mvlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kSweepBlock = 1024;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

// ---- tau grid ---------------------------------------------------------------

std::size_t TauGrid::size() const {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.count;
    return n;
}

std::vector<double> TauGrid::points() const {
    std::vector<double> out;
    out.reserve(size());
    for (const auto& s : segments)
        for (std::size_t k = 0; k < s.count; ++k) out.push_back(s.at(k));
    return out;
}

TauGrid TauGrid::profile(double sm1, double T, double base_step, double cap_step) {
    if (base_step <= 0) base_step = sm1 / 4;
    TauGrid grid;
    grid.T = T;
    grid.base_step = base_step;

    // Positive side as (start, step, count) runs; region boundaries at
    // 10(sigma-1) and 2.
    struct Run { double start, step, stop; };
    double h2 = cap_step > 0 ? std::min(sm1, cap_step) : sm1;
    double h3 = cap_step > 0 ? std::min(0.05, cap_step) : 0.05;
    std::vector<Run> runs;
    double r1_end = std::min(10 * sm1, T);
    runs.push_back({0.0, base_step, r1_end});
    if (T > r1_end) runs.push_back({r1_end, h2, std::min(2.0, T)});
    if (T > 2.0) runs.push_back({2.0, h3, T});

    std::vector<TauSegment> pos;
    for (const auto& r : runs) {
        if (r.stop <= r.start) continue;
        std::size_t n = std::size_t(std::floor((r.stop - r.start) / r.step + 1e-9)) + 1;
        pos.push_back({r.start, r.step, n});
    }
    // Mirror (excluding tau = 0), negative side first so points ascend overall.
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
        TauSegment m;
        m.step = it->step;
        m.count = it->start == 0.0 ? it->count - 1 : it->count;
        m.start = -(it->at(it->count - 1));
        if (m.count > 0) grid.segments.push_back(m);
    }
    for (const auto& s : pos) grid.segments.push_back(s);
    return grid;
}

// ---- sweep kernel -----------------------------------------------------------

void phase_sweep(const std::vector<double>& log_p, const std::vector<double>& w_re,
                 const std::vector<double>& w_im, const TauSegment& seg, double* out, unsigned workers) {
    const std::size_t n = log_p.size();
    if (n == 0 || seg.count == 0) return;
    const std::size_t nblocks = (seg.count + kSweepBlock - 1) / kSweepBlock;
    parallel_blocks(nblocks, workers, [&](std::size_t b) {
        const std::size_t k0 = b * kSweepBlock;
        const std::size_t k1 = std::min(seg.count, k0 + kSweepBlock);
        const double tau0 = seg.at(k0);
        double* acc = out + k0;
        const std::size_t len = k1 - k0;
        for (std::size_t i = 0; i < n; ++i) {
            const double l = log_p[i];
            // z(k) = w e^{-i (tau0 + k h) l}: four independent chains with
            // stride rot^4 keep the complex-multiply latency off the critical
            // path.
            const double c0 = std::cos(tau0 * l), s0 = std::sin(tau0 * l);
            double zr0 = w_re[i] * c0 + w_im[i] * s0;
            double zi0 = w_im[i] * c0 - w_re[i] * s0;
            const double hr = std::cos(seg.step * l), hi = -std::sin(seg.step * l);
            double zr1 = zr0 * hr - zi0 * hi, zi1 = zr0 * hi + zi0 * hr;
            double zr2 = zr1 * hr - zi1 * hi, zi2 = zr1 * hi + zi1 * hr;
            double zr3 = zr2 * hr - zi2 * hi, zi3 = zr2 * hi + zi2 * hr;
            const double q2r = hr * hr - hi * hi, q2i = 2.0 * hr * hi;
            const double q4r = q2r * q2r - q2i * q2i, q4i = 2.0 * q2r * q2i;
            std::size_t k = 0;
            for (; k + 4 <= len; k += 4) {
                acc[k] += zr0;
                acc[k + 1] += zr1;
                acc[k + 2] += zr2;
                acc[k + 3] += zr3;
                double t0 = zr0 * q4r - zi0 * q4i; zi0 = zr0 * q4i + zi0 * q4r; zr0 = t0;
                double t1 = zr1 * q4r - zi1 * q4i; zi1 = zr1 * q4i + zi1 * q4r; zr1 = t1;
                double t2 = zr2 * q4r - zi2 * q4i; zi2 = zr2 * q4i + zi2 * q4r; zr2 = t2;
                double t3 = zr3 * q4r - zi3 * q4i; zi3 = zr3 * q4i + zi3 * q4r; zr3 = t3;
            }
            for (; k < len; ++k) {
                acc[k] += zr0;
                double t = zr0 * hr - zi0 * hi; zi0 = zr0 * hi + zi0 * hr; zr0 = t;
            }
        }
    });
}

// ---- prime sums -------------------------------------------------------------

double mertens_sum(std::uint64_t x) {
    auto table = PrimeTable::up_to(x);
    csum s;
    for (std::uint32_t p : table->primes) {
        if (p > x) break;
        s.add(1.0 / double(p));
    }
    return s.value();
}

double mertens_sum(const MultFnSpec& spec, std::uint64_t x, int class_index) {
    auto table = PrimeTable::up_to(x);
    csum s;
    for (std::uint32_t p : table->primes) {
        if (p > x) break;
        if (classify(spec.partition, spec, p) == class_index) s.add(1.0 / double(p));
    }
    return s.value();
}

double mertens_sum_residue(std::uint64_t x, std::uint32_t q, std::uint32_t r) {
    auto table = PrimeTable::up_to(x);
    csum s;
    for (std::uint32_t p : table->primes) {
        if (p > x) break;
        if (p % q == r) s.add(1.0 / double(p));
    }
    return s.value();
}

double pretentious_distance(const MultFnSpec& spec, double tau, std::uint64_t x, std::optional<int> class_index) {
    auto table = PrimeTable::up_to(x);
    csum s;
    for (std::uint32_t p : table->primes) {
        if (p > x) break;
        int j = classify(spec.partition, spec, p);
        if (j == kClassS) continue;
        if (class_index && *class_index != j) continue;
        const double Bj = spec.partition.classes[std::size_t(j - 1)].B;
        cplx gt = spec.value_at_prime(p) / Bj;
        double lp = std::log(double(p));
        double re = gt.real() * std::cos(tau * lp) + gt.imag() * std::sin(tau * lp);
        s.add((1.0 - re) / double(p));
    }
    return s.value();
}

double DistanceReport::rho_total(double at_tau) const {
    if (tau.empty()) return 0.0;
    auto it = std::lower_bound(tau.begin(), tau.end(), at_tau);
    std::size_t k = it == tau.end() ? tau.size() - 1 : std::size_t(it - tau.begin());
    double total = 0.0;
    for (const auto& dj : D) total += dj[k];
    return total;
}

DistanceReport rho_min(const MultFnSpec& spec, std::uint64_t x, double D_exp, double grid_step,
                       unsigned workers, double T_override) {
    if (D_exp <= 2.0) throw config_error("rho_min: D_exp must exceed 2");
    const double sm1 = 1.0 / std::log(double(x));
    double h1 = grid_step > 0 ? grid_step : sm1 / 4;
    if (h1 > sm1) throw config_error("rho_min: grid step exceeds sigma-1 (too coarse)");
    const double T = T_override > 0 ? T_override : std::pow(std::log(double(x)), D_exp);
    TauGrid grid = TauGrid::profile(sm1, T, h1);

    const std::size_t m = spec.partition.m();
    // Per-class arrays: log p and gtilde(p)/p.
    std::vector<std::vector<double>> lp(m), wr(m), wi(m);
    std::vector<double> wsum(m, 0.0);
    auto table = PrimeTable::up_to(x);
    for (std::uint32_t p : table->primes) {
        if (p > x) break;
        int j = classify(spec.partition, spec, p);
        if (j == kClassS) continue;
        std::size_t idx = std::size_t(j - 1);
        cplx gt = spec.value_at_prime(p) / spec.partition.classes[idx].B;
        lp[idx].push_back(std::log(double(p)));
        wr[idx].push_back(gt.real() / double(p));
        wi[idx].push_back(gt.imag() / double(p));
        wsum[idx] += 1.0 / double(p);
    }

    DistanceReport rep;
    rep.x = x;
    rep.T = T;
    rep.tau_grid_step = h1;
    rep.tau = grid.points();
    rep.D.assign(m, std::vector<double>(rep.tau.size(), 0.0));
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t off = 0;
        for (const auto& seg : grid.segments) {
            phase_sweep(lp[j], wr[j], wi[j], seg, rep.D[j].data() + off, workers);
            off += seg.count;
        }
        for (std::size_t k = 0; k < rep.tau.size(); ++k) rep.D[j][k] = wsum[j] - rep.D[j][k];
    }
    rep.tau_star.resize(m);
    rep.rho.resize(m);
    rep.boundary_min.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < rep.D[j].size(); ++k)
            if (rep.D[j][k] < rep.D[j][best]) best = k;
        rep.tau_star[j] = rep.tau[best];
        rep.rho[j] = rep.D[j][best];
        rep.boundary_min[j] = best == 0 || best + 1 == rep.D[j].size();
    }
    return rep;
}

// ---- von Mangoldt sums ------------------------------------------------------

MangoldtSumResult lambda_mangoldt_sum(std::uint64_t z) {
    if (z < 2) throw config_error("lambda_mangoldt_sum: z >= 2 required");
    MangoldtSumResult out;
    csum s;
    for (const auto& e : prime_powers_up_to(z)) s.add(e.log_p / double(e.n));
    out.sum = s.value();
    out.predicted = std::log(double(z));
    out.c_fit = out.sum - out.predicted;
    return out;
}

MangoldtCoprimeResult lambda_mangoldt_coprime(std::uint64_t x, double y, const std::vector<std::uint32_t>& P_primes) {
    if (!(y > 0) || y >= double(x)) throw config_error("lambda_mangoldt_coprime: need 0 < y < x");
    MangoldtCoprimeResult out;
    csum s;
    for (const auto& e : prime_powers_up_to(x)) {
        if (double(e.n) <= double(x) - y || e.n > x) continue;
        if (std::find(P_primes.begin(), P_primes.end(), e.p) != P_primes.end()) continue;
        s.add(e.log_p / double(e.n));
    }
    out.sum = s.value();
    double phi_ratio = 1.0;
    for (auto p : P_primes) phi_ratio *= 1.0 - 1.0 / double(p);
    out.predicted = phi_ratio * y / double(x);
    return out;
}

SigmaDiffResult sigma_diff_sum(std::uint64_t x, double tau, std::uint64_t prime_cutoff) {
    SigmaDiffResult out;
    const double sigma = 1.0 + 1.0 / std::log(double(x));
    if (tau == 0.0) {
        out.degenerate = true;
        out.rhs_bound_shape = std::numeric_limits<double>::infinity();
        return out; // s = sigma: every term vanishes identically
    }
    auto table = PrimeTable::up_to(prime_cutoff);
    csum s;
    for (std::uint32_t p : table->primes) {
        if (p > prime_cutoff) break;
        double lp = std::log(double(p));
        double a = std::pow(double(p), -sigma);
        // |p^{-sigma} - p^{-s}| = p^{-sigma} |1 - p^{-i tau}| = p^{-sigma} * 2|sin(tau log p / 2)|
        s.add(a * 2.0 * std::abs(std::sin(tau * lp / 2)));
    }
    // Tail: |p^{-sigma} - p^{-s}| <= p^{-sigma} min(2, |tau| log p).  The flat
    // branch sums to 2 E1((sigma-1) log u) by partial summation; the linear branch to
    // |tau| integral_u^inf v^{-sigma} dv = |tau| u^{1-sigma}/(sigma-1).
    const double lu = std::log(double(prime_cutoff));
    double tail_flat = 2.0 * expint_e1((sigma - 1.0) * lu);
    double tail_lin = std::abs(tau) * std::pow(double(prime_cutoff), 1.0 - sigma) / (sigma - 1.0);
    out.tail_bound = std::min(tail_flat, tail_lin);
    out.lhs = s.value() + out.tail_bound;
    out.rhs_bound_shape = 1.0 + std::abs(std::log(std::abs(tau) / (sigma - 1.0)));
    return out;
}

// ---- exponents --------------------------------------------------------------

double gamma0_of(double delta, double B, double beta) {
    return 27.0 * delta * beta * beta * beta / (1024.0 * kPi * B);
}

ExponentBundle exponent_bundle(const MultFnSpec& spec, std::uint64_t t, double C) {
    if (t < 1000) throw config_error("exponent_bundle: t >= 10^3 required");
    const std::size_t m = spec.partition.m();
    ExponentBundle eb;
    eb.t = t;
    eb.gamma0.resize(m);
    eb.gamma = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const auto& cp = spec.partition.classes[j];
        eb.gamma0[j] = gamma0_of(cp.delta, cp.B, cp.beta);
        double g = cp.delta * cp.beta * cp.beta * cp.beta;
        eb.gamma = j == 0 ? g : std::min(eb.gamma, g);
    }
    eb.gamma0_min = *std::min_element(eb.gamma0.begin(), eb.gamma0.end());

    const double delta = spec.partition.delta_min();
    const double B = spec.partition.B_max();

    // kappa(C) with C' = max(C, e^B); floor against underflow for tiny delta.
    const double Cp = std::max(C, std::exp(B));
    double kappa = std::pow(delta / (2 * Cp * B), 4.0 / delta);
    if (!(kappa >= 1e-6)) {
        kappa = 1e-6;
        eb.degenerate = true;
    }
    eb.kappa = kappa;

    // One pass over primes: class sums, S_kappa, monotonicity, CONDIT1/2 data.
    const double t_kappa = std::pow(double(t), kappa);
    std::vector<csum> abs_over_p(m), inv_tail(m);
    csum abs_all, inv_tail_all, s_kappa;
    std::vector<double> last_mod(m, -1.0);
    bool nondecr = true;
    auto table = PrimeTable::up_to(t);
    for (std::uint32_t p : table->primes) {
        if (p > t) break;
        int cj = classify(spec.partition, spec, p);
        if (cj == kClassS) continue;
        std::size_t j = std::size_t(cj - 1);
        double mod = std::abs(spec.value_at_prime(p));
        if (mod < last_mod[j] - 1e-12) nondecr = false;
        last_mod[j] = std::max(last_mod[j], mod);
        abs_over_p[j].add(mod / double(p));
        abs_all.add(mod / double(p));
        if (double(p) > t_kappa) {
            inv_tail[j].add(1.0 / double(p));
            inv_tail_all.add(1.0 / double(p));
            s_kappa.add(mod / double(p));
        }
    }
    eb.nondecreasing = nondecr;
    eb.S_kappa = s_kappa.value();
    eb.class_abs_over_p.resize(m);
    for (std::size_t j = 0; j < m; ++j) eb.class_abs_over_p[j] = abs_over_p[j].value();

    // Reasonable pair: one class carrying both its share of prime density on
    // (t^kappa, t] and of the |g(p)|/p mass (Definition REAS at this (t, kappa)).
    eb.reasonable = false;
    for (std::size_t j = 0; j < m; ++j) {
        bool c1 = inv_tail[j].value() >= inv_tail_all.value() / double(m) - 1e-12;
        bool c2 = abs_over_p[j].value() >= abs_all.value() / double(m) - 1e-12;
        if (c1 && c2) { eb.reasonable = true; break; }
    }

    double min_ratio = 1.0;
    for (const auto& cp : spec.partition.classes) min_ratio = std::min(min_ratio, cp.delta / cp.B);
    eb.c.resize(m);
    eb.d.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double base = 0.5 * std::min(1.0 / (4.0 * double(m) * double(m)), eb.gamma0[j] / (1.0 + eb.gamma0[j]));
        eb.c[j] = nondecr ? base : min_ratio * base;
        eb.d[j] = nondecr ? 1.0 : spec.partition.classes[j].delta / spec.partition.classes[j].B;
    }

    // lambda(t): the weighted class-sum exponent.
    double lam = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        lam += eb.c[j] * eb.d[j] * (eb.gamma0[j] / (1.0 + eb.gamma0[j])) * eb.class_abs_over_p[j];
    lam /= std::log(std::log(double(t)));
    eb.lambda = lam;

    eb.inequality_lhs = C * (B / delta) * std::pow(kappa, -lam) * std::exp(-eb.S_kappa / 2);
    eb.inequality_slack = 0.5 - eb.inequality_lhs;
    return eb;
}

std::string ExponentBundle::to_json() const {
    std::ostringstream os;
    auto arr = [&](const std::vector<double>& v) {
        os << "[";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << fmt(v[i]);
        os << "]";
    };
    os << "{\"schema_version\":1,\"t\":" << t << ",\"lambda\":" << fmt(lambda) << ",\"kappa\":" << fmt(kappa)
       << ",\"S_kappa\":" << fmt(S_kappa) << ",\"c\":";
    arr(c);
    os << ",\"gamma0\":";
    arr(gamma0);
    os << ",\"d\":";
    arr(d);
    os << ",\"gamma0_min\":" << fmt(gamma0_min) << ",\"gamma\":" << fmt(gamma)
       << ",\"nondecreasing\":" << (nondecreasing ? "true" : "false")
       << ",\"reasonable\":" << (reasonable ? "true" : "false")
       << ",\"degenerate\":" << (degenerate ? "true" : "false")
       << ",\"inequality_lhs\":" << fmt(inequality_lhs) << ",\"inequality_slack\":" << fmt(inequality_slack)
       << ",\"class_abs_over_p\":";
    arr(class_abs_over_p);
    os << "}";
    return os.str();
}

DensityResult good_partition_density(double tau, double alpha, double beta, std::uint64_t x) {
    if (!(alpha >= 0 && alpha < beta && beta <= 1.0)) throw config_error("good_partition_density: need 0 <= alpha < beta <= 1");
    DensityResult out;
    auto table = PrimeTable::up_to(x);
    csum s;
    for (std::uint32_t p : table->primes) {
        if (p > x) break;
        double y = tau * std::log(double(p)) / (2 * kPi);
        y -= std::floor(y);
        if (y == 0.0) y = 1.0;
        if (y > alpha && y <= beta) s.add(1.0 / double(p));
    }
    out.measured = s.value();
    out.predicted = (beta - alpha) * std::log(std::log(double(x)));
    return out;
}

std::string distance_report_csv(const DistanceReport& rep) {
    std::ostringstream os;
    os << "tau";
    for (std::size_t j = 0; j < rep.D.size(); ++j) os << ",D_class_" << (j + 1);
    os << ",D_total\n";
    for (std::size_t k = 0; k < rep.tau.size(); ++k) {
        os << fmt(rep.tau[k]);
        double total = 0.0;
        for (std::size_t j = 0; j < rep.D.size(); ++j) {
            os << "," << fmt(rep.D[j][k]);
            total += rep.D[j][k];
        }
        os << "," << fmt(total) << "\n";
    }
    return os.str();
}

} // namespace mvlab
