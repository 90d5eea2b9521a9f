#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mvlab/multfn.hpp"
#include "mvlab/numerics.hpp"
#include "mvlab/primes.hpp"

using namespace mvlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Trial-division oracle, independent of the sieve path.
std::vector<std::pair<std::uint32_t, std::uint32_t>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> f;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(std::uint32_t(p), e);
    }
    if (n > 1) f.emplace_back(std::uint32_t(n), 1);
    return f;
}

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

MultFnSpec character_mod4() {
    MultFnSpec s;
    s.rule.kind = RuleKind::DirichletCharacter;
    s.rule.q = 4;
    s.rule.chi_table = {0.0, 1.0, 0.0, -1.0};
    s.extension = Extension::Complete;
    s.partition.kind = PartitionKind::ByResidueClass;
    s.partition.q = 4;
    s.partition.residue_class = {0, 1, 0, 2};
    s.partition.classes.push_back({1.0, 1.0, kPi, kPi / 2, 0.0});
    s.partition.classes.push_back({1.0, 1.0, 0.0, kPi / 2, kPi});
    s.partition.S = {2};
    s.label = "chi4";
    return s;
}

} // namespace

TEST_CASE("value_at on stated examples") {
    auto lvs = builtin_spec("liouville-strong");
    CHECK(value_at(lvs, 12, {{2, 2}, {3, 1}}).real() == doctest::Approx(1.0));
    auto lvc = builtin_spec("liouville-complete");
    CHECK(value_at(lvc, 12, {{2, 2}, {3, 1}}).real() == doctest::Approx(-1.0));
    auto arch = builtin_spec("archimedean");
    cplx v = value_at(arch, 8, {{2, 3}});
    CHECK(v.real() == doctest::Approx(std::cos(std::log(8.0))).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(std::sin(std::log(8.0))).epsilon(1e-12));
    CHECK(value_at(lvs, 1, {}) == cplx(1.0, 0.0));
}

TEST_CASE("classify on stated examples") {
    auto unit = builtin_spec("unit");
    CHECK(classify(unit.partition, unit, 97) == 1);

    auto chi = character_mod4();
    CHECK(classify(chi.partition, chi, 5) == 1);  // 5 = 1 mod 4
    CHECK(classify(chi.partition, chi, 7) == 2);  // 7 = 3 mod 4
    CHECK(classify(chi.partition, chi, 2) == kClassS);

    MultFnSpec frac;
    frac.rule.kind = RuleKind::LiouvilleLike;
    frac.partition.kind = PartitionKind::ByFractionalPart;
    frac.partition.tau = 2 * kPi; // frac(log p)
    frac.partition.frac_bounds = {0.0, 0.5, 1.0};
    frac.partition.classes.assign(2, {1.0, 1.0, 0.0, kPi / 2, kPi});
    CHECK(classify(frac.partition, frac, 2) == 2); // frac(log 2) = 0.693 not in (0, 1/2]
    CHECK(classify(frac.partition, frac, 3) == 1); // frac(log 3) = 0.0986
}

TEST_CASE("multiplicativity on random coprime pairs, all built-in rules") {
    std::vector<MultFnSpec> specs = {builtin_spec("liouville-strong"), builtin_spec("archimedean"),
                                     builtin_spec("random-id-1"), builtin_spec("wirsing-g2-complete"),
                                     character_mod4(), builtin_spec("e005")};
    rng64 rng(777);
    for (const auto& spec : specs) {
        int tested = 0;
        while (tested < 10000) {
            std::uint64_t m = 2 + rng.below(99998);
            std::uint64_t n = 2 + rng.below(99998);
            if (gcd64(m, n) != 1) continue;
            ++tested;
            auto fm = factorize(m), fn = factorize(n), fmn = fm;
            fmn.insert(fmn.end(), fn.begin(), fn.end());
            cplx lhs = value_at(spec, m * n, fmn);
            cplx rhs = value_at(spec, m, fm) * value_at(spec, n, fn);
            REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("strong extension idempotence") {
    auto spec = builtin_spec("random-id-2");
    auto table = PrimeTable::up_to(100);
    for (std::uint32_t p : table->primes) {
        if (p > 100) break;
        cplx base = spec.value_at_prime(p);
        for (std::uint32_t k = 1; k <= 10; ++k)
            CHECK(std::abs(spec.value_at_prime_power(p, k) - base) <= 1e-15);
    }
}

TEST_CASE("partition totality up to 1e5") {
    auto chi = character_mod4();
    auto table = PrimeTable::up_to(100000);
    std::size_t count[3] = {0, 0, 0}; // S, class 1, class 2
    for (std::uint32_t p : table->primes) {
        if (p > 100000) break;
        int c = classify(chi.partition, chi, p);
        REQUIRE(c >= 0);
        REQUIRE(c <= 2);
        ++count[std::size_t(c)];
    }
    CHECK(count[0] + count[1] + count[2] == table->count_below(100000));
    CHECK(count[0] == 1); // S = {2}
}

TEST_CASE("seeded-random determinism and frozen sample") {
    MultFnSpec a, b;
    for (MultFnSpec* s : {&a, &b}) {
        s->rule.kind = RuleKind::SeededRandom;
        s->rule.seed = 42;
        s->rule.radius_lo = 0.5;
        s->rule.radius_hi = 1.5;
        s->rule.arg_halfwidth = 3.0;
        s->partition.kind = PartitionKind::Trivial;
        s->partition.classes.push_back({0.5, 1.5, 0.0, 1.0, 3.0});
    }
    auto table = PrimeTable::up_to(10000);
    for (std::uint32_t p : table->primes) {
        if (p > 10000) break;
        CHECK(a.value_at_prime(p) == b.value_at_prime(p)); // bitwise identical tables
    }
    cplx v = a.value_at_prime(1009);
    CHECK(v.real() == doctest::Approx(0.0025454138132934047).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(1.1758632473268782).epsilon(1e-14));
}

TEST_CASE("validate_class_membership examples") {
    SUBCASE("g = 1 in C_a with eta = 0") {
        auto rep = validate_class_membership(builtin_spec("unit"), 10000, FnClass::Ca);
        CHECK(rep.pass);
    }
    SUBCASE("liouville strong in C_b (phi = 0, beta = pi/2)") {
        auto rep = validate_class_membership(builtin_spec("liouville-strong"), 10000, FnClass::Cb);
        CHECK(rep.pass);
    }
    SUBCASE("archimedean fails C_a with eta = 0.01 at prime 2") {
        auto spec = builtin_spec("archimedean");
        spec.partition.classes[0].eta = 0.01;
        auto rep = validate_class_membership(spec, 10000, FnClass::Ca);
        CHECK(!rep.pass);
        REQUIRE(rep.first_failure() != nullptr);
        CHECK(rep.first_failure()->name == "iii.arg-bound");
        CHECK(rep.first_failure()->first_violation == 2); // arg 2^i = log 2 = 0.693 > 0.01
    }
    SUBCASE("complete extension with B_j >= 2 rejected") {
        auto spec = builtin_spec("two");
        spec.extension = Extension::Complete;
        CHECK_THROWS_AS(validate_class_membership(spec, 10000, FnClass::C), config_error);
    }
    SUBCASE("modulus violation on S") {
        auto spec = builtin_spec("unit");
        spec.partition.S = {5};
        spec.rule.s_value = 1.0; // |g(5)| = 1, not < delta
        auto rep = validate_class_membership(spec, 10000, FnClass::C);
        CHECK(!rep.pass);
        CHECK(rep.first_failure()->first_violation == 5);
    }
}

TEST_CASE("spec hash ignores the label, tracks the math") {
    auto a = builtin_spec("random-id-1");
    auto b = builtin_spec("random-id-1");
    b.label = "renamed";
    CHECK(a.hash() == b.hash());
    auto c = builtin_spec("random-id-2");
    CHECK(a.hash() != c.hash());
}
