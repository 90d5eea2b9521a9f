#include "mvlab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mvlab/primes.hpp"

namespace mvlab {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

cplx pow_int(cplx z, std::uint32_t k) {
    cplx r = 1.0;
    while (k) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

// Accumulator state for one summatory pass; snapshots are taken at checkpoints.
struct Accum {
    czsum M, N, L;
    csum Ma, Na, La;
    void merge(const Accum& o) {
        M.merge(o.M); N.merge(o.N); L.merge(o.L);
        Ma.merge(o.Ma); Na.merge(o.Na); La.merge(o.La);
    }
};

struct SegmentResult {
    Accum total;
    std::vector<std::pair<std::size_t, Accum>> hits; // (checkpoint index, prefix state)
};

// Factorizes [lo, hi] against the supplied primes (all p with p^2 <= x_max)
// and feeds g(n) in ascending order.
void process_segment(const MultFnSpec& spec, std::uint64_t lo, std::uint64_t hi,
                     const std::vector<std::uint32_t>& primes,
                     const std::vector<std::uint64_t>& checkpoints, SegmentResult& out) {
    const std::size_t len = std::size_t(hi - lo + 1);
    std::vector<cplx> val(len, cplx(1.0, 0.0));
    std::vector<std::uint64_t> cof(len);
    for (std::size_t i = 0; i < len; ++i) cof[i] = lo + i;

    const bool complete = spec.extension == Extension::Complete;
    for (std::uint32_t p : primes) {
        std::uint64_t m = ((lo + p - 1) / p) * p;
        if (m > hi) continue;
        const cplx gp = spec.value_at_prime(p);
        for (; m <= hi; m += p) {
            std::size_t i = std::size_t(m - lo);
            std::uint32_t e = 0;
            while (cof[i] % p == 0) {
                cof[i] /= p;
                ++e;
            }
            val[i] *= complete ? pow_int(gp, e) : gp;
        }
    }

    auto next_cp = std::lower_bound(checkpoints.begin(), checkpoints.end(), lo);
    for (std::size_t i = 0; i < len; ++i) {
        const std::uint64_t n = lo + i;
        cplx v = val[i];
        if (n == 1) {
            v = 1.0; // empty product
        } else if (cof[i] > 1) {
            v *= spec.value_at_prime(std::uint32_t(cof[i])); // leftover prime > sqrt(x_max)
        }
        const double a = std::abs(v);
        const double ln = std::log(double(n));
        out.total.M.add(v);
        out.total.Ma.add(a);
        out.total.N.add(v * ln);
        out.total.Na.add(a * ln);
        out.total.L.add(v / double(n));
        out.total.La.add(a / double(n));
        while (next_cp != checkpoints.end() && *next_cp == n) {
            out.hits.emplace_back(std::size_t(next_cp - checkpoints.begin()), out.total);
            ++next_cp;
        }
    }
}

} // namespace

std::size_t SummatoryTable::index_of(std::uint64_t x) const {
    auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), x);
    if (it == checkpoints.end() || *it != x)
        throw config_error("checkpoint " + std::to_string(x) + " not in table");
    return std::size_t(it - checkpoints.begin());
}

std::string SummatoryTable::to_csv() const {
    std::ostringstream os;
    os << "x,re_Mg,im_Mg,M_abs,re_Ng,im_Ng,re_Lg,im_Lg,L_abs\n";
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        os << checkpoints[i] << "," << fmt(M_g[i].real()) << "," << fmt(M_g[i].imag()) << "," << fmt(M_abs[i])
           << "," << fmt(N_g[i].real()) << "," << fmt(N_g[i].imag()) << "," << fmt(L_g[i].real()) << ","
           << fmt(L_g[i].imag()) << "," << fmt(L_abs[i]) << "\n";
    return os.str();
}

SummatoryTable summatory(const MultFnSpec& spec, const SieveConfig& config,
                         std::vector<std::uint64_t> checkpoints) {
    if (config.segment_length < 2) throw config_error("sieve config: segment_length >= 2 required");
    if (config.x_max > std::uint64_t(1000000000))
        throw config_error("sieve config: x_max beyond 10^9 is out of scope");
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (checkpoints.empty()) throw config_error("summatory: empty checkpoint list");
    for (auto c : checkpoints)
        if (c < 1 || c > config.x_max)
            throw config_error("checkpoint " + std::to_string(c) + " outside [1, x_max]");

    const std::uint64_t x_max = checkpoints.back();
    auto sqrt_primes = PrimeTable::up_to(std::uint64_t(std::sqrt(double(x_max))) + 2);

    const std::uint64_t seglen = config.segment_length;
    const std::size_t nseg = std::size_t((x_max + seglen - 1) / seglen);
    std::vector<SegmentResult> results(nseg);
    parallel_blocks(nseg, config.worker_count, [&](std::size_t s) {
        const std::uint64_t lo = std::uint64_t(s) * seglen + 1;
        const std::uint64_t hi = std::min(x_max, lo + seglen - 1);
        process_segment(spec, lo, hi, sqrt_primes->primes, checkpoints, results[s]);
    });

    SummatoryTable table;
    table.x_max = x_max;
    table.spec_hash = spec.hash();
    table.checkpoints = checkpoints;
    const std::size_t K = checkpoints.size();
    table.M_g.resize(K); table.M_abs.resize(K);
    table.N_g.resize(K); table.N_abs.resize(K);
    table.L_g.resize(K); table.L_abs.resize(K);

    Accum running;
    for (const auto& seg : results) {
        for (const auto& [idx, snap] : seg.hits) {
            Accum at = running;
            at.merge(snap);
            table.M_g[idx] = at.M.value();
            table.M_abs[idx] = at.Ma.value();
            table.N_g[idx] = at.N.value();
            table.N_abs[idx] = at.Na.value();
            table.L_g[idx] = at.L.value();
            table.L_abs[idx] = at.La.value();
        }
        running.merge(seg.total);
    }

    table.v_step = config.v_step;
    const double v_max = std::log(double(x_max));
    table.lambda_partials = mangoldt_weighted_partials(spec, v_max, config.v_step);
    return table;
}

double selberg_sum(double rho, std::uint64_t x, const SieveConfig& config) {
    if (!(rho > 0)) throw config_error("selberg_sum: rho must be positive");
    if (x < 2) throw config_error("selberg_sum: x >= 2 required");
    MultFnSpec s;
    s.rule.kind = RuleKind::ConstantPerClass;
    s.rule.class_values = {cplx(rho, 0.0)};
    s.extension = Extension::Strong;
    s.partition.kind = PartitionKind::Trivial;
    s.partition.classes.push_back({rho, rho, 0.0, 1.0, 0.0});
    SieveConfig cfg = config;
    cfg.x_max = std::max<std::uint64_t>(x, cfg.segment_length);
    return summatory(s, cfg, {x}).M_g[0].real();
}

SelbergConstant selberg_constant(double rho, std::uint64_t prime_cutoff) {
    if (prime_cutoff < 1000) throw config_error("selberg_constant: cutoff >= 10^3 required");
    auto table = PrimeTable::up_to(prime_cutoff);
    csum log_prod;
    for (std::uint32_t p : table->primes) {
        if (p > prime_cutoff) break;
        log_prod.add(std::log1p(rho / (double(p) - 1.0)) + rho * std::log1p(-1.0 / double(p)));
    }
    SelbergConstant out;
    out.value = std::exp(log_prod.value()) / std::tgamma(rho);
    // Per-prime log factor is O(rho(1+rho)/p^2); sum_{p>u} p^{-2} < 1/u.
    out.log_tail_bound = rho * (1.0 + rho) / double(prime_cutoff);
    return out;
}

namespace {

// g(n) for every n <= x by a single full-range factor pass (x <= 10^6).
std::vector<cplx> dense_values(const MultFnSpec& spec, std::uint64_t x) {
    if (x > 1000000) throw config_error("dense pass: x <= 10^6 (two-pass cost)");
    auto sqrt_primes = PrimeTable::up_to(std::uint64_t(std::sqrt(double(x))) + 2);
    std::vector<cplx> val(x + 1, cplx(1.0, 0.0));
    std::vector<std::uint64_t> cof(x + 1);
    for (std::uint64_t n = 0; n <= x; ++n) cof[n] = n;
    const bool complete = spec.extension == Extension::Complete;
    for (std::uint32_t p : sqrt_primes->primes) {
        if (std::uint64_t(p) * p > x) break;
        const cplx gp = spec.value_at_prime(p);
        for (std::uint64_t m = p; m <= x; m += p) {
            std::uint32_t e = 0;
            while (cof[m] % p == 0) {
                cof[m] /= p;
                ++e;
            }
            val[m] *= complete ? pow_int(gp, e) : gp;
        }
    }
    for (std::uint64_t n = 2; n <= x; ++n)
        if (cof[n] > 1) val[n] *= spec.value_at_prime(std::uint32_t(cof[n]));
    if (x >= 1) val[1] = 1.0;
    return val;
}

} // namespace

std::vector<cplx> dense_prefix_M(const MultFnSpec& spec, std::uint64_t x) {
    auto val = dense_values(spec, x);
    std::vector<cplx> prefix(x + 1, 0.0);
    czsum run;
    for (std::uint64_t n = 1; n <= x; ++n) {
        run.add(val[n]);
        prefix[n] = run.value();
    }
    return prefix;
}

double lambda_convolution_identity(const MultFnSpec& spec, std::uint64_t x) {
    auto val = dense_values(spec, x);
    std::vector<cplx> prefix(x + 1, 0.0);
    czsum runM, Ng;
    for (std::uint64_t n = 1; n <= x; ++n) {
        runM.add(val[n]);
        prefix[n] = runM.value();
        Ng.add(val[n] * std::log(double(n)));
    }
    // Strong extension: summing g(p^l m) over m <= y strips the p-part of m,
    // so the convolution pairs Lambda(p^l) g(p) with the p-free summatory
    // R_p(z) = sum_{m<=z} g(m / p^{v_p(m)}), which satisfies
    // R_p(z) = M_g(z) + (1 - g(p)) R_p(z/p).  (With M_g itself the identity
    // fails: x = 4, g = (-1)^omega gives -2 log 2 - log 3 vs -log 2 - log 3.)
    // Complete extension: g(p^l m) = g(p^l) g(m), so plain M_g works.
    auto R_p = [&](std::uint32_t p, std::uint64_t z, cplx gp) {
        cplx r = 0.0;
        std::vector<std::uint64_t> zs;
        while (z >= 1) {
            zs.push_back(z);
            z /= p;
        }
        for (auto it = zs.rbegin(); it != zs.rend(); ++it) r = prefix[*it] + (1.0 - gp) * r;
        return r;
    };
    czsum conv;
    for (const auto& e : prime_powers_up_to(x)) {
        if (spec.extension == Extension::Strong) {
            cplx gp = spec.value_at_prime(e.p);
            conv.add(e.log_p * gp * R_p(e.p, x / e.n, gp));
        } else {
            conv.add(e.log_p * spec.value_at_prime_power(e.p, e.k) * prefix[x / e.n]);
        }
    }
    return std::abs(Ng.value() - conv.value());
}

double short_interval_ratio(const MultFnSpec& spec, std::uint64_t a, double c, const SieveConfig& config) {
    if (a < 1000) throw config_error("short_interval_ratio: a >= 10^3 required");
    if (!(c > 1.0 && c <= 2.0)) throw config_error("short_interval_ratio: c in (1, 2] required");
    std::uint64_t ca = std::uint64_t(c * double(a));
    SieveConfig cfg = config;
    cfg.x_max = std::max(cfg.x_max, ca);
    auto table = summatory(spec, cfg, {a, ca});
    double Ma = table.M_abs_at(a);
    if (Ma == 0.0) throw config_error("short_interval_ratio: M_{|g|}(a) = 0 (degenerate input)");
    return (table.M_abs_at(ca) - Ma) / Ma;
}

std::vector<MangoldtJump> mangoldt_jumps(const MultFnSpec& spec, std::uint64_t n_max) {
    std::vector<MangoldtJump> jumps;
    for (const auto& e : prime_powers_up_to(n_max))
        jumps.push_back({e.n, spec.value_at_prime_power(e.p, e.k) * e.log_p});
    return jumps; // prime_powers_up_to sorts by n
}

std::vector<cplx> mangoldt_weighted_partials(const MultFnSpec& spec, double v_max, double v_step) {
    if (!(v_step > 0)) throw config_error("mangoldt_weighted_partials: v_step > 0 required");
    auto jumps = mangoldt_jumps(spec, std::uint64_t(std::ceil(std::exp(v_max))) + 1);
    const std::size_t K = std::size_t(std::floor(v_max / v_step + 1e-9)) + 1;
    std::vector<cplx> samples(K);
    czsum run;
    std::size_t j = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double bound = std::exp(v_step * double(k));
        while (j < jumps.size() && double(jumps[j].n) <= bound) run.add(jumps[j++].weight);
        samples[k] = run.value();
    }
    return samples;
}

// ---- binary cache -----------------------------------------------------------

namespace {
constexpr std::uint32_t kMagic = 0x4d564c42; // "MVLB"
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
bool get(std::ifstream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return bool(is);
}
template <class T>
void put_vec(std::ofstream& os, const std::vector<T>& v) {
    put(os, std::uint64_t(v.size()));
    os.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(T)));
}
template <class T>
bool get_vec(std::ifstream& is, std::vector<T>& v) {
    std::uint64_t n = 0;
    if (!get(is, n) || n > (std::uint64_t(1) << 32)) return false;
    v.resize(std::size_t(n));
    is.read(reinterpret_cast<char*>(v.data()), std::streamsize(n * sizeof(T)));
    return bool(is);
}
} // namespace

bool save_table(const SummatoryTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) return false;
    put(os, kMagic);
    put(os, kVersion);
    put(os, table.spec_hash);
    put(os, table.x_max);
    put(os, table.v_step);
    put_vec(os, table.checkpoints);
    put_vec(os, table.M_g);
    put_vec(os, table.M_abs);
    put_vec(os, table.N_g);
    put_vec(os, table.N_abs);
    put_vec(os, table.L_g);
    put_vec(os, table.L_abs);
    put_vec(os, table.lambda_partials);
    return bool(os);
}

bool load_table(SummatoryTable& table, const std::string& path, std::uint64_t spec_hash, std::uint64_t x_max) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return false;
    std::uint32_t magic = 0, version = 0;
    if (!get(is, magic) || magic != kMagic) return false;
    if (!get(is, version) || version != kVersion) return false;
    if (!get(is, table.spec_hash) || table.spec_hash != spec_hash) return false;
    if (!get(is, table.x_max) || table.x_max != x_max) return false;
    if (!get(is, table.v_step)) return false;
    return get_vec(is, table.checkpoints) && get_vec(is, table.M_g) && get_vec(is, table.M_abs) &&
           get_vec(is, table.N_g) && get_vec(is, table.N_abs) && get_vec(is, table.L_g) &&
           get_vec(is, table.L_abs) && get_vec(is, table.lambda_partials);
}

SummatoryTable summatory_cached(const MultFnSpec& spec, const SieveConfig& config,
                                std::vector<std::uint64_t> checkpoints, const std::string& cache_dir) {
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (cache_dir.empty()) return summatory(spec, config, checkpoints);

    const std::uint64_t x_max = checkpoints.empty() ? 0 : checkpoints.back();
    char name[64];
    std::snprintf(name, sizeof name, "%016llx_%llu.tbl", (unsigned long long)spec.hash(),
                  (unsigned long long)x_max);
    const std::string path = cache_dir + "/" + name;

    SummatoryTable cached;
    if (load_table(cached, path, spec.hash(), x_max)) {
        bool subset = true;
        for (auto c : checkpoints)
            if (!std::binary_search(cached.checkpoints.begin(), cached.checkpoints.end(), c)) {
                subset = false;
                break;
            }
        if (subset) return cached;
        for (auto c : cached.checkpoints) checkpoints.push_back(c);
        std::sort(checkpoints.begin(), checkpoints.end());
        checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    }
    SummatoryTable fresh = summatory(spec, config, checkpoints);
    save_table(fresh, path);
    return fresh;
}

} // namespace mvlab
