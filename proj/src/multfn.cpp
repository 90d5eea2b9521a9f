#include "mvlab/multfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "mvlab/prime_analysis.hpp"

namespace mvlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Circular distance between two angles.
double ang_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2 * kPi);
    return std::min(d, 2 * kPi - d);
}

std::string fmt_double(double x) {
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

} // namespace

bool PrimePartition::in_S(std::uint32_t p) const {
    return std::find(S.begin(), S.end(), p) != S.end();
}

double PrimePartition::delta_min() const {
    double d = classes.empty() ? 1.0 : classes[0].delta;
    for (const auto& c : classes) d = std::min(d, c.delta);
    return d;
}

double PrimePartition::B_max() const {
    double b = classes.empty() ? 1.0 : classes[0].B;
    for (const auto& c : classes) b = std::max(b, c.B);
    return b;
}

cplx MultFnSpec::value_at_prime(std::uint32_t p) const {
    if (rule.kind != RuleKind::DirichletCharacter && partition.in_S(p)) return rule.s_value;
    switch (rule.kind) {
        case RuleKind::ConstantPerClass: {
            int j = classify(partition, *this, p);
            if (j == kClassS) return rule.s_value;
            return rule.class_values.at(std::size_t(j - 1));
        }
        case RuleKind::ArchimedeanTwist: {
            double t = rule.alpha * std::log(double(p));
            return {std::cos(t), std::sin(t)};
        }
        case RuleKind::DirichletCharacter:
            return rule.chi_table.at(p % rule.q);
        case RuleKind::LiouvilleLike:
            return double(rule.sign);
        case RuleKind::SeededRandom: {
            double u1 = seeded_uniform(rule.seed, p, 1);
            double u2 = seeded_uniform(rule.seed, p, 2);
            double r = rule.radius_lo + u1 * (rule.radius_hi - rule.radius_lo);
            double theta = rule.arg_center + (2.0 * u2 - 1.0) * rule.arg_halfwidth;
            return {r * std::cos(theta), r * std::sin(theta)};
        }
    }
    return 0.0;
}

cplx MultFnSpec::value_at_prime_power(std::uint32_t p, std::uint32_t k) const {
    cplx v = value_at_prime(p);
    return extension == Extension::Strong ? v : pow_int(v, k);
}

int classify(const PrimePartition& partition, const MultFnSpec& spec, std::uint32_t p) {
    if (partition.in_S(p)) return kClassS;
    switch (partition.kind) {
        case PartitionKind::Trivial:
            return 1;
        case PartitionKind::ByArgumentSector: {
            double theta = std::arg(spec.value_at_prime(p));
            const auto& b = partition.arg_bounds; // b[0] < ... < b[m], sectors (b[j-1], b[j]]
            for (std::size_t j = 1; j < b.size(); ++j)
                if (theta <= b[j] || j + 1 == b.size()) return int(j);
            return 1;
        }
        case PartitionKind::ByResidueClass: {
            int c = partition.residue_class.at(p % partition.q);
            if (c <= 0)
                throw config_error("partition not total: residue " + std::to_string(p % partition.q) +
                                   " mod " + std::to_string(partition.q) + " unassigned (prime " + std::to_string(p) + ")");
            return c;
        }
        case PartitionKind::ByFractionalPart: {
            double y = partition.tau * std::log(double(p)) / (2 * kPi);
            y -= std::floor(y);
            if (y == 0.0) y = 1.0; // fractional part lives in (0, 1]
            const auto& b = partition.frac_bounds;
            for (std::size_t j = 1; j < b.size(); ++j)
                if (y <= b[j] || j + 1 == b.size()) return int(j);
            return 1;
        }
    }
    return 1;
}

cplx value_at(const MultFnSpec& spec, std::uint64_t n,
              const std::vector<std::pair<std::uint32_t, std::uint32_t>>& factorization) {
    (void)n;
    cplx v = 1.0;
    for (auto [p, k] : factorization) v *= spec.value_at_prime_power(p, k);
    return v;
}

std::string MultFnSpec::canonical() const {
    std::ostringstream os;
    os << "ext=" << (extension == Extension::Strong ? "strong" : "complete") << ";rule=" << int(rule.kind) << ";";
    switch (rule.kind) {
        case RuleKind::ConstantPerClass:
            for (cplx v : rule.class_values) os << fmt_double(v.real()) << "," << fmt_double(v.imag()) << " ";
            os << "|sv=" << fmt_double(rule.s_value.real()) << "," << fmt_double(rule.s_value.imag());
            break;
        case RuleKind::ArchimedeanTwist: os << "alpha=" << fmt_double(rule.alpha); break;
        case RuleKind::DirichletCharacter:
            os << "q=" << rule.q << ";chi=";
            for (cplx v : rule.chi_table) os << fmt_double(v.real()) << "," << fmt_double(v.imag()) << " ";
            break;
        case RuleKind::LiouvilleLike: os << "sign=" << rule.sign; break;
        case RuleKind::SeededRandom:
            os << "seed=" << rule.seed << ";r=" << fmt_double(rule.radius_lo) << "," << fmt_double(rule.radius_hi)
               << ";a=" << fmt_double(rule.arg_halfwidth) << "@" << fmt_double(rule.arg_center);
            break;
    }
    os << ";part=" << int(partition.kind) << ";";
    for (const auto& c : partition.classes)
        os << fmt_double(c.delta) << "," << fmt_double(c.B) << "," << fmt_double(c.phi) << ","
           << fmt_double(c.beta) << "," << fmt_double(c.eta) << "/";
    for (double b : partition.arg_bounds) os << fmt_double(b) << " ";
    os << ";q=" << partition.q << ";rc=";
    for (int c : partition.residue_class) os << c << " ";
    os << ";tau=" << fmt_double(partition.tau) << ";fb=";
    for (double b : partition.frac_bounds) os << fmt_double(b) << " ";
    os << ";S=";
    for (auto p : partition.S) os << p << " ";
    os << ";r=" << fmt_double(partition.subpoly_r);
    return os.str();
}

std::uint64_t MultFnSpec::hash() const { return fnv1a(canonical()); }

const ConditionResult* ValidationReport::first_failure() const {
    for (const auto& c : conditions)
        if (!c.pass) return &c;
    return nullptr;
}

ValidationReport validate_class_membership(const MultFnSpec& spec, std::uint64_t x_max, FnClass cls,
                                           double c6_threshold, double tau_D) {
    if (x_max < 100) throw config_error("validate_class_membership: x_max must be >= 100");
    if (spec.extension == Extension::Complete)
        for (const auto& c : spec.partition.classes)
            if (c.B >= 2.0)
                throw config_error("complete extension requires B_j < 2 (class bound " + fmt_double(c.B) + ")");

    ValidationReport rep;
    rep.requested = cls;
    auto table = PrimeTable::up_to(x_max);
    const double tol = spec.unit_modulus_tol;
    const double delta = spec.partition.delta_min();

    ConditionResult mod{"i.modulus-bounds", true, 0, ""};
    ConditionResult arg_small{"iii.arg-bound", true, 0, ""};
    ConditionResult angle{"v.angle-margin", true, 0, ""};
    for (std::uint32_t p : table->primes) {
        if (p > x_max) break;
        int j = classify(spec.partition, spec, p);
        cplx g = spec.value_at_prime(p);
        double m = std::abs(g);
        if (j == kClassS) {
            if (mod.pass && !(m < delta)) {
                mod.pass = false;
                mod.first_violation = p;
                mod.detail = "|g(" + std::to_string(p) + ")| = " + fmt_double(m) + " not < delta on S";
            }
            continue;
        }
        const auto& cp = spec.partition.classes.at(std::size_t(j - 1));
        if (mod.pass && !(m >= cp.delta - tol && m <= cp.B + tol)) {
            mod.pass = false;
            mod.first_violation = p;
            mod.detail = "|g(" + std::to_string(p) + ")| = " + fmt_double(m) + " outside [delta_j, B_j]";
        }
        double theta = std::arg(g);
        if (cls == FnClass::Ca && arg_small.pass && !(std::abs(theta) <= cp.eta + tol)) {
            arg_small.pass = false;
            arg_small.first_violation = p;
            arg_small.detail = "|arg g(" + std::to_string(p) + ")| = " + fmt_double(std::abs(theta)) +
                               " > eta_j = " + fmt_double(cp.eta);
        }
        if (cls == FnClass::Cb && angle.pass && !(ang_dist(theta, cp.phi) >= cp.beta - tol)) {
            angle.pass = false;
            angle.first_violation = p;
            angle.detail = "|arg g(" + std::to_string(p) + ") - phi_j| = " + fmt_double(ang_dist(theta, cp.phi)) +
                           " < beta_j = " + fmt_double(cp.beta);
        }
    }
    rep.conditions.push_back(mod);

    // ii) sub-polynomial growth of P_x: log P_x / log x <= r on a geometric grid.
    {
        ConditionResult sub{"ii.subpoly-S", true, 0, ""};
        double worst = 0.0;
        for (double x = 100; x <= double(x_max) * 1.0001; x *= 10) {
            double logP = 0.0;
            for (auto p : spec.partition.S)
                if (p <= x) logP += std::log(double(p));
            worst = std::max(worst, logP / std::log(x));
        }
        sub.detail = "max log P_x / log x = " + fmt_double(worst);
        if (worst > spec.partition.subpoly_r) sub.pass = false;
        rep.conditions.push_back(sub);
    }

    if (cls == FnClass::Ca) rep.conditions.push_back(arg_small);
    if (cls == FnClass::Cb) {
        ConditionResult good{"iv.good-partition", true, 0, ""};
        good.detail = spec.partition.kind == PartitionKind::ByArgumentSector
                          ? "assumed (argument sectors)"
                          : "structural (trivial / residue classes / fractional parts)";
        rep.conditions.push_back(good);
        rep.conditions.push_back(angle);

        ConditionResult dist{"vi.distance-floor", true, 0, ""};
        double floor_needed = c6_threshold * std::log(std::log(std::log(double(x_max))));
        DistanceReport dr = rho_min(spec, x_max, tau_D, 0.0);
        for (std::size_t j = 0; j < dr.rho.size(); ++j) {
            if (dr.rho[j] < floor_needed) {
                dist.pass = false;
                dist.detail = "rho_E" + std::to_string(j + 1) + " = " + fmt_double(dr.rho[j]) +
                              " < C log_3 x = " + fmt_double(floor_needed);
                break;
            }
        }
        if (dist.pass) dist.detail = "floor C log_3 x = " + fmt_double(floor_needed);
        rep.conditions.push_back(dist);
    }

    rep.pass = true;
    for (const auto& c : rep.conditions) rep.pass = rep.pass && c.pass;
    return rep;
}

// ---- builtins -------------------------------------------------------------

namespace {

PrimePartition trivial_partition(double delta, double B, double phi, double beta, double eta) {
    PrimePartition part;
    part.kind = PartitionKind::Trivial;
    part.classes.push_back({delta, B, phi, beta, eta});
    return part;
}

MultFnSpec make_constant(cplx v, Extension ext, double phi, double beta, double eta, const std::string& label) {
    MultFnSpec s;
    s.rule.kind = RuleKind::ConstantPerClass;
    s.rule.class_values = {v};
    s.extension = ext;
    s.partition = trivial_partition(std::abs(v), std::abs(v), phi, beta, eta);
    s.label = label;
    return s;
}

MultFnSpec make_random(std::uint64_t seed, double rlo, double rhi, double half, double center,
                       double phi, double beta, double eta, const std::string& label) {
    MultFnSpec s;
    s.rule.kind = RuleKind::SeededRandom;
    s.rule.seed = seed;
    s.rule.radius_lo = rlo;
    s.rule.radius_hi = rhi;
    s.rule.arg_halfwidth = half;
    s.rule.arg_center = center;
    s.partition = trivial_partition(rlo, rhi, phi, beta, eta);
    s.label = label;
    return s;
}

// "family-k" -> k, or -1.
int family_index(const std::string& name, const std::string& prefix) {
    if (name.rfind(prefix, 0) != 0) return -1;
    const std::string tail = name.substr(prefix.size());
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) return -1;
    return std::stoi(tail);
}

} // namespace

MultFnSpec builtin_spec(const std::string& name) {
    if (name == "unit") return make_constant(1.0, Extension::Strong, kPi, kPi / 2, 0.0, "unit");
    if (name == "e005") return make_constant(std::polar(1.0, 0.05), Extension::Strong, kPi, kPi - 0.05, 0.05, "e005");
    if (name == "e003") return make_constant(std::polar(1.0, 0.03), Extension::Strong, kPi, kPi - 0.03, 0.03, "e003");
    if (name == "two") return make_constant(2.0, Extension::Strong, kPi, kPi / 2, 0.0, "two");
    if (name == "half") return make_constant(0.5, Extension::Strong, kPi, kPi / 2, 0.0, "half");
    if (name == "const-i") return make_constant(cplx(0.0, 1.0), Extension::Strong, 0.0, kPi / 4, 0.0, "const-i");
    if (name == "half-s23") {
        MultFnSpec s = make_constant(0.5, Extension::Strong, kPi, kPi / 2, 0.0, "half-s23");
        s.partition.S = {2, 3};
        return s;
    }
    if (name == "liouville-strong" || name == "liouville-complete") {
        MultFnSpec s;
        s.rule.kind = RuleKind::LiouvilleLike;
        s.rule.sign = -1;
        s.extension = name == "liouville-strong" ? Extension::Strong : Extension::Complete;
        s.partition = trivial_partition(1.0, 1.0, 0.0, kPi / 2, 0.0);
        s.label = name;
        return s;
    }
    if (name == "archimedean" || name == "archimedean-strong") {
        MultFnSpec s;
        s.rule.kind = RuleKind::ArchimedeanTwist;
        s.rule.alpha = 1.0;
        s.extension = name == "archimedean" ? Extension::Complete : Extension::Strong;
        s.partition = trivial_partition(1.0, 1.0, 0.0, 0.1, 0.0);
        s.label = name;
        return s;
    }
    if (name == "wirsing-g2-complete" || name == "wirsing-g2-strong") {
        // g(2) = -1, g(p) = 1 otherwise; p = 2 isolated by residue class mod 2.
        MultFnSpec s;
        s.rule.kind = RuleKind::ConstantPerClass;
        s.rule.class_values = {-1.0, 1.0};
        s.extension = name == "wirsing-g2-complete" ? Extension::Complete : Extension::Strong;
        s.partition.kind = PartitionKind::ByResidueClass;
        s.partition.q = 2;
        s.partition.residue_class = {1, 2};
        s.partition.classes.push_back({1.0, 1.0, 0.0, kPi / 2, kPi});
        s.partition.classes.push_back({1.0, 1.0, kPi, kPi / 2, 0.0});
        s.label = name;
        return s;
    }
    if (int k = family_index(name, "random-id-"); k >= 0)
        return make_random(1000 + k, 0.5, 1.5, kPi, 0.0, 0.0, 1.0, kPi, name);
    if (int k = family_index(name, "random-ca-"); k >= 0)
        return make_random(2000 + k, 1.0, 1.0, 0.02, 0.0, kPi, kPi - 0.03, 0.02, name);
    if (int k = family_index(name, "random-cb-"); k >= 0)
        return make_random(3000 + k, 0.8, 1.0, 0.3, kPi, 0.0, kPi - 0.31, 0.0, name);
    if (int k = family_index(name, "random-lam-"); k >= 0)
        return make_random(4000 + k, 0.5, 1.5, 0.0, 0.0, kPi, kPi / 2, 0.0, name);
    if (int k = family_index(name, "random-g0a-"); k >= 0)
        return make_random(5000 + k, 0.5, 1.0, kPi, 0.0, 0.0, 1.0, kPi, name);
    if (int k = family_index(name, "random-g0b-"); k >= 0)
        return make_random(6000 + k, 0.6, 1.8, kPi, 0.0, 0.0, 1.0, kPi, name);
    throw config_error("unknown builtin spec: " + name);
}

std::vector<std::string> builtin_spec_names() {
    return {"unit", "e005", "e003", "two", "half", "half-s23", "const-i",
            "liouville-strong", "liouville-complete", "archimedean", "archimedean-strong",
            "wirsing-g2-complete", "wirsing-g2-strong",
            "random-id-<k>", "random-ca-<k>", "random-cb-<k>", "random-lam-<k>",
            "random-g0a-<k>", "random-g0b-<k>"};
}

} // namespace mvlab
