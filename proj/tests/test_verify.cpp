#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mvlab/verify.hpp"

using namespace mvlab;

namespace {
VerifyOptions opts() {
    VerifyOptions o;
    o.workers = 2;
    return o;
}
const std::vector<std::uint64_t> kSmallGrid = {10000, 100000, 1000000};
} // namespace

TEST_CASE("verify_upper_general") {
    SUBCASE("g = 1: exponent 0, ratio <= 1") {
        auto rep = verify_upper_general(builtin_spec("unit"), {10000, 100000}, opts());
        for (const auto& pt : rep.series) CHECK(pt.ratio <= 1.0 + 1e-9);
        CHECK(rep.pass);
    }
    SUBCASE("liouville strong: bounded, trend nonincreasing") {
        auto rep = verify_upper_general(builtin_spec("liouville-strong"), kSmallGrid, opts());
        CHECK(rep.pass);
        CHECK(rep.trend_slope <= 0.001);
    }
    SUBCASE("archimedean: rho near 0 keeps the rhs large") {
        auto rep = verify_upper_general(builtin_spec("archimedean"), kSmallGrid, opts());
        CHECK(rep.pass);
        // |M_{n^i}(x)| ~ x/sqrt(2) is NOT small, yet the bound absorbs it
        CHECK(rep.series.back().lhs > 0.5 * double(kSmallGrid.back()) / std::sqrt(2.0));
    }
}

TEST_CASE("verify_upper_explicit") {
    SUBCASE("real positive g: exponent 0, ratio <= 1") {
        // g = 1 is n^0-pretentious, so condition vi only admits it at C = 0.
        auto o = opts();
        o.c6_threshold = 0.0;
        auto rep = verify_upper_explicit(builtin_spec("unit"), {10000, 100000}, o);
        for (const auto& pt : rep.series) CHECK(pt.ratio <= 1.0 + 1e-9);
        CHECK(rep.pass);
    }
    SUBCASE("real positive g refused at the default condition-vi threshold") {
        CHECK_THROWS_AS(verify_upper_explicit(builtin_spec("unit"), {10000}, opts()), config_error);
    }
    SUBCASE("liouville strong decays like a power of log") {
        auto rep = verify_upper_explicit(builtin_spec("liouville-strong"), kSmallGrid, opts());
        CHECK(rep.pass);
        // rhs/M_abs = exp(-2 c1 sum 1/p): decreasing in x
        double r0 = rep.series.front().rhs / rep.series.front().x;
        double r2 = rep.series.back().rhs / rep.series.back().x;
        CHECK(r2 < r0);
    }
    SUBCASE("constant i with phi = 0, beta = pi/4 passes") {
        auto rep = verify_upper_explicit(builtin_spec("const-i"), {10000, 100000}, opts());
        CHECK(rep.pass);
    }
    SUBCASE("phi = pi/2 partition rejected for constant i") {
        auto bad = builtin_spec("const-i");
        bad.partition.classes[0].phi = std::numbers::pi / 2; // arg g(p) = pi/2 exactly
        CHECK_THROWS_AS(verify_upper_explicit(bad, {10000}, opts()), config_error);
    }
}

TEST_CASE("verify_asymptotic") {
    SUBCASE("eta = 0: A = 1 and residual exactly zero") {
        auto rep = verify_asymptotic(builtin_spec("unit"), {10000, 100000}, opts());
        CHECK(rep.pass);
        for (double r : rep.residual) CHECK(r <= 1e-12);
        for (cplx a : rep.A) CHECK(std::abs(a - cplx(1.0, 0.0)) <= 1e-12);
    }
    SUBCASE("g(p) = e^{0.05i}: residual within the fitted budget") {
        auto rep = verify_asymptotic(builtin_spec("e005"), kSmallGrid, opts());
        CHECK(rep.pass);
        CHECK(rep.max_excess <= 10.0);
        // measured ratio approximates A
        CHECK(std::abs(rep.measured.back() - rep.A.back()) < 0.05);
    }
    SUBCASE("seeded arguments in [-0.02, 0.02]") {
        auto rep = verify_asymptotic(builtin_spec("random-ca-1"), kSmallGrid, opts());
        CHECK(rep.pass);
    }
    SUBCASE("eta >= 1 refused") {
        CHECK_THROWS_AS(verify_asymptotic(builtin_spec("random-id-1"), {10000}, opts()), config_error);
    }
    SUBCASE("budget terms nonincreasing in x (S empty, |A| nonincreasing)") {
        auto rep = verify_asymptotic(builtin_spec("e005"), kSmallGrid, opts());
        for (std::size_t i = 1; i < rep.x.size(); ++i) {
            CHECK(rep.term_eta[i] <= rep.term_eta[i - 1] + 1e-15);
            CHECK(rep.term_Apow[i] <= rep.term_Apow[i - 1] + 1e-15);
            CHECK(std::abs(rep.A[i]) <= std::abs(rep.A[i - 1]) + 1e-15);
        }
    }
}

TEST_CASE("verify_lower_mean_value") {
    SUBCASE("lambda = 1 approaches pi^2/(6 e^gamma)") {
        auto rep = verify_lower_mean_value(builtin_spec("unit"), kSmallGrid, opts());
        CHECK(rep.pass);
        const double target = std::numbers::pi * std::numbers::pi / (6.0 * std::exp(0.57721566490153286));
        CHECK(std::abs(rep.series.back().ratio / target - 1.0) < 0.12);
    }
    SUBCASE("lambda(p) = 2 strong: bounded below") {
        auto rep = verify_lower_mean_value(builtin_spec("two"), kSmallGrid, opts());
        CHECK(rep.pass);
        CHECK(rep.min_ratio > 0.0);
    }
    SUBCASE("lambda(p) = 0.5 with S = {2,3}: phi(P)/P enters the rhs") {
        auto rep = verify_lower_mean_value(builtin_spec("half-s23"), kSmallGrid, opts());
        CHECK(rep.pass);
        CHECK(rep.min_ratio > 0.0);
    }
    SUBCASE("complex lambda refused") {
        CHECK_THROWS_AS(verify_lower_mean_value(builtin_spec("e005"), {10000}, opts()), config_error);
    }
}

TEST_CASE("verify_wirsing_limit") {
    SUBCASE("g = f: ratio 1, product 1, difference 0") {
        auto rep = verify_wirsing_limit(builtin_spec("unit"), builtin_spec("unit"), {10000, 100000}, opts());
        CHECK(rep.pass);
        for (const auto& e : rep.extra)
            if (e.first == "abs_diff")
                for (double d : e.second) CHECK(d <= 1e-9);
    }
    SUBCASE("complete g(2) = -1: limit 1/3") {
        auto rep = verify_wirsing_limit(builtin_spec("wirsing-g2-complete"), builtin_spec("unit"),
                                        {10000, 100000}, opts());
        CHECK(rep.pass);
        CHECK(rep.series.back().rhs == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
        CHECK(rep.series.back().lhs == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    }
    SUBCASE("strong g(2) = -1: vanishing local factor forces limit 0") {
        auto rep = verify_wirsing_limit(builtin_spec("wirsing-g2-strong"), builtin_spec("unit"),
                                        {10000, 100000}, opts());
        CHECK(rep.series.back().rhs == 0.0);
        CHECK(rep.series.back().lhs <= 0.1);
        CHECK(rep.detail.find("zero-interpretation") != std::string::npos);
    }
    SUBCASE("|g| > f refused") {
        CHECK_THROWS_AS(
            verify_wirsing_limit(builtin_spec("two"), builtin_spec("unit"), {10000}, opts()), config_error);
    }
}

TEST_CASE("verify_wirsing_ext") {
    SUBCASE("variant ii, g = f real: residual 0, main term 1") {
        auto res = verify_wirsing_ext(builtin_spec("unit"), builtin_spec("unit"), {10000, 100000}, 2, opts());
        CHECK(res.asym.pass);
        for (double r : res.asym.residual) CHECK(r <= 1e-12);
        for (double X : res.asym.X) CHECK(X == doctest::Approx(1.0));
    }
    SUBCASE("variant ii, g(p) = e^{0.03i} vs f = 1") {
        auto res = verify_wirsing_ext(builtin_spec("e003"), builtin_spec("unit"), kSmallGrid, 2, opts());
        CHECK(res.asym.pass);
        CHECK(res.asym.max_excess <= 10.0);
        CHECK(res.asym.eta == doctest::Approx(std::abs(std::polar(1.0, 0.03) - 1.0)).epsilon(1e-9));
    }
    SUBCASE("variant i, liouville vs f = 1: lhs small, bounded ratio") {
        auto res =
            verify_wirsing_ext(builtin_spec("liouville-strong"), builtin_spec("unit"), kSmallGrid, 1, opts());
        CHECK(res.report.pass);
        // |M_g|/M_f fluctuates on the way to 0; smallness is the checkable content
        CHECK(res.report.series.back().lhs <= 0.01);
    }
    SUBCASE("variant i refused when the limit does not vanish") {
        CHECK_THROWS_AS(
            verify_wirsing_ext(builtin_spec("e003"), builtin_spec("unit"), kSmallGrid, 1, opts()), config_error);
    }
}

TEST_CASE("verify_integral_average_chain") {
    SUBCASE("g = 1: L/P link inside its explicit constants") {
        auto rep = verify_integral_average_chain(builtin_spec("unit"), kSmallGrid, opts());
        CHECK(rep.pass);
        double lo = 0, hi = 0;
        std::vector<double> link;
        for (const auto& e : rep.extra) {
            if (e.first == "logsum_bounds") {
                lo = e.second[0];
                hi = e.second[1];
            }
            if (e.first == "logsum_L_over_P") link = e.second;
        }
        CHECK(lo == doctest::Approx((1.0 - 2.0 / std::numbers::e) / 16.0).epsilon(1e-12));
        CHECK(hi == doctest::Approx(std::exp(0.7731566)).epsilon(1e-3));
        for (double r : link) {
            CHECK(r >= lo);
            CHECK(r <= hi);
        }
    }
    SUBCASE("g(p) = 2 and g(p) = 0.5: all links positive and bounded") {
        for (const char* name : {"two", "half"}) {
            auto rep = verify_integral_average_chain(builtin_spec(name), {10000, 100000}, opts());
            CHECK(rep.pass);
            CHECK(rep.min_ratio > 0.0);
        }
    }
}

TEST_CASE("cross-report consistency and determinism") {
    SUBCASE("shared M_abs values agree exactly between reports") {
        auto spec = builtin_spec("liouville-strong");
        SieveConfig cfg;
        cfg.worker_count = 2;
        auto t1 = summatory(spec, cfg, kSmallGrid);
        auto t2 = summatory(spec, cfg, kSmallGrid);
        for (std::size_t i = 0; i < kSmallGrid.size(); ++i) {
            CHECK(t1.M_abs[i] == t2.M_abs[i]);
            CHECK(t1.M_g[i] == t2.M_g[i]);
        }
    }
    SUBCASE("reports reproduce bit-identically") {
        auto a = verify_upper_explicit(builtin_spec("liouville-strong"), {10000, 100000}, opts());
        auto b = verify_upper_explicit(builtin_spec("liouville-strong"), {10000, 100000}, opts());
        CHECK(a.to_json() == b.to_json());
    }
}

TEST_CASE("weighted ratio max R_h(lambda)") {
    SieveConfig cfg;
    cfg.worker_count = 2;
    auto table = summatory(builtin_spec("random-id-1"), cfg, {100, 1000, 10000});
    // A = 0, lambda = 0: R_g(0) = max |M_g|/M_abs <= 1 by the triangle inequality
    CHECK(weighted_ratio_max(table, 0.0, 0.0) <= 1.0 + 1e-12);
    // lambda > 0 only inflates by log powers
    CHECK(weighted_ratio_max(table, 0.0, 1.0) <= std::log(10000.0) * (1.0 + 1e-12));
}

TEST_CASE("default grid") {
    auto g = default_x_grid();
    REQUIRE(g.size() == 7);
    CHECK(g.front() == 10000);
    CHECK(g.back() == 10000000);
    auto ge = default_x_grid(true);
    CHECK(ge.back() == 100000000);
}
