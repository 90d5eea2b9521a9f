// Declarative model of strongly/completely multiplicative functions: prime
// value rules, prime partitions with class parameters, and validation of
// membership in the function collections C, C_a, C_b.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mvlab/numerics.hpp"
#include "mvlab/primes.hpp"

namespace mvlab {

enum class RuleKind { ConstantPerClass, ArchimedeanTwist, DirichletCharacter, LiouvilleLike, SeededRandom };
enum class Extension { Strong, Complete };
enum class PartitionKind { Trivial, ByArgumentSector, ByResidueClass, ByFractionalPart };
enum class FnClass { C, Ca, Cb };

struct PrimeRule {
    RuleKind kind = RuleKind::LiouvilleLike;
    // constant-per-class
    std::vector<cplx> class_values;
    cplx s_value = 0.0; // value on the exceptional set S
    // archimedean twist p^{i alpha}
    double alpha = 0.0;
    // dirichlet character: value table on residues mod q (0 where undefined)
    std::uint32_t q = 0;
    std::vector<cplx> chi_table;
    // liouville-like
    int sign = -1;
    // seeded random: |g(p)| uniform in [radius_lo, radius_hi],
    // arg uniform in arg_center + [-arg_halfwidth, arg_halfwidth]
    double radius_lo = 1.0, radius_hi = 1.0;
    double arg_halfwidth = 0.0, arg_center = 0.0;
    std::uint64_t seed = 0;
};

// Classifier of primes into E_1..E_m plus the exceptional set S, carrying the
// per-class parameters (delta_j, B_j, phi_j, beta_j, eta_j).
struct ClassParams {
    double delta = 1.0; // lower modulus bound on E_j
    double B = 1.0;     // upper modulus bound on E_j
    double phi = 0.0;   // avoided angle (C_b condition v)
    double beta = 1.0;  // angular margin, in (0, pi)
    double eta = 0.0;   // argument bound (C_a condition iii)
};

struct PrimePartition {
    PartitionKind kind = PartitionKind::Trivial;
    std::vector<ClassParams> classes; // size m
    // by-argument-sector: m sectors (bounds[j-1], bounds[j]] covering [-pi, pi]
    std::vector<double> arg_bounds;
    // by-residue-class: q and residue -> class index (1-based; 0 = unassigned)
    std::uint32_t q = 0;
    std::vector<int> residue_class;
    // by-fractional-part: class j iff frac(tau log p / 2pi) in (frac_bounds[j-1], frac_bounds[j]]
    double tau = 0.0;
    std::vector<double> frac_bounds;
    // exceptional set (finite, explicit)
    std::vector<std::uint32_t> S;
    double subpoly_r = 0.5; // required bound on log P_x / log x

    std::size_t m() const { return classes.size(); }
    bool in_S(std::uint32_t p) const;
    double delta_min() const;
    double B_max() const;
};

struct MultFnSpec {
    PrimeRule rule;
    Extension extension = Extension::Strong;
    PrimePartition partition;
    std::string label;
    double unit_modulus_tol = 1e-12; // rounding absorber for unit-modulus rules

    cplx value_at_prime(std::uint32_t p) const;
    cplx value_at_prime_power(std::uint32_t p, std::uint32_t k) const;
    // Canonical serialization of everything that affects the math (not the label).
    std::string canonical() const;
    std::uint64_t hash() const;
};

constexpr int kClassS = 0; // classify() result for p in S

// Deterministic, total: class index 1..m, or kClassS for the exceptional set.
int classify(const PrimePartition& partition, const MultFnSpec& spec, std::uint32_t p);

// Product over the prime powers of the given factorization.
cplx value_at(const MultFnSpec& spec, std::uint64_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& factorization);

struct ConditionResult {
    std::string name;
    bool pass = true;
    std::uint64_t first_violation = 0; // offending prime, 0 if none
    std::string detail;
};

struct ValidationReport {
    FnClass requested = FnClass::C;
    bool pass = true;
    std::vector<ConditionResult> conditions;
    const ConditionResult* first_failure() const;
};

// Checks the class conditions on all primes <= x_max (and the D_{E_j} lower
// bound of condition vi at x_max for C_b).  c6_threshold is the unspecified
// constant of condition vi; tau_D the grid exponent for its tau range.
ValidationReport validate_class_membership(const MultFnSpec& spec, std::uint64_t x_max, FnClass cls,
                                           double c6_threshold = 1.0, double tau_D = 2.1);

// ---- builtin specs ------------------------------------------------------
// Named specs used throughout the verification battery; "random-*-k" families
// derive their seed from the index.
MultFnSpec builtin_spec(const std::string& name);
std::vector<std::string> builtin_spec_names();

} // namespace mvlab
