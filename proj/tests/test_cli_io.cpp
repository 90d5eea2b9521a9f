#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mvlab/sieve.hpp"
#include "mvlab/specfile.hpp"
#include "mvlab/verify.hpp"

using namespace mvlab;

namespace {

const char* kRandomSpec = R"(# C_b-style seeded spec
label = demo-random
extension = strong
rule = random
rule.seed = 99
rule.radius = 0.8 1.0
rule.arg = 0.25
rule.arg_center = 3.141592653589793
partition = trivial
class1 = 0.8 1.0 0.0 2.8 0.0
S =
)";

const char* kCharacterSpec = R"(label = chi5
extension = complete
rule = character
rule.q = 5
rule.chi = 1:1,0 2:0,1 3:0,-1 4:-1,0
partition = residue
partition.q = 5
partition.classes = 1:1 2:2 3:2 4:1
class1 = 1 1 0 1.5 3.2
class2 = 1 1 3.0 1.5 3.2
S = 5
)";

} // namespace

TEST_CASE("spec file parsing") {
    auto spec = parse_spec_text(kRandomSpec);
    CHECK(spec.label == "demo-random");
    CHECK(spec.rule.kind == RuleKind::SeededRandom);
    CHECK(spec.rule.seed == 99);
    CHECK(spec.partition.m() == 1);
    CHECK(spec.partition.classes[0].beta == doctest::Approx(2.8));

    auto chi = parse_spec_text(kCharacterSpec);
    CHECK(chi.rule.kind == RuleKind::DirichletCharacter);
    CHECK(chi.partition.m() == 2);
    CHECK(chi.value_at_prime(5) == cplx(0.0, 0.0));       // 5 | q
    CHECK(chi.value_at_prime(7) == cplx(0.0, 1.0));       // 7 = 2 mod 5
    CHECK(classify(chi.partition, chi, 7) == 2);
    CHECK(classify(chi.partition, chi, 5) == kClassS);
}

TEST_CASE("spec file errors carry line numbers") {
    auto expect_fail = [](const std::string& text, const char* needle) {
        try {
            parse_spec_text(text);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_fail("extension = strong\nbogus line\n", "line 2");
    expect_fail("extension = sideways\nrule = liouville\n", "line 1");
    expect_fail(std::string(kRandomSpec) + "rule.seed = 3\n", "duplicate");
    expect_fail("extension = strong\nrule = liouville\nrule.sign = -1\npartition = trivial\n"
                "class1 = 1 1 0 1.5\n",
                "five numbers");
    // complete extension with B >= 2
    expect_fail("extension = complete\nrule = liouville\nrule.sign = -1\npartition = trivial\n"
                "class1 = 2.5 2.5 0 1.5 0\n",
                "B_j < 2");
    // constant values with the argument partition would be circular
    expect_fail("extension = strong\nrule = constant\nrule.values = 1,0\npartition = argument\n"
                "partition.bounds = -3.14159265358979 3.14159265358979\nclass1 = 1 1 0 1.5 0\n",
                "circular");
    expect_fail("extension = strong\nrule = liouville\npartition = trivial\nclass1 = 1 1 0 1.5 0\n",
                "rule.sign");
}

TEST_CASE("resolve_spec handles builtins and files") {
    CHECK(resolve_spec("liouville-strong").label == "liouville-strong");
    CHECK(resolve_spec("builtin:unit").label == "unit");
    CHECK(resolve_spec("random-cb-2").rule.seed == 3002);

    namespace fs = std::filesystem;
    auto path = fs::temp_directory_path() / "mvlab_demo.spec";
    {
        std::ofstream os(path);
        os << kRandomSpec;
    }
    auto spec = resolve_spec(path.string());
    CHECK(spec.label == "demo-random");
    fs::remove(path);

    CHECK_THROWS_AS(resolve_spec("/nonexistent/path.spec"), parse_error);
}

TEST_CASE("CSV and JSON shapes") {
    SieveConfig cfg;
    cfg.worker_count = 2;
    auto table = summatory(builtin_spec("unit"), cfg, {10, 100});
    auto csv = table.to_csv();
    CHECK(csv.rfind("x,re_Mg,im_Mg,M_abs,re_Ng,im_Ng,re_Lg,im_Lg,L_abs\n", 0) == 0);
    CHECK(csv.find("\n10,10,") != std::string::npos);  // M_g(10) = 10
    CHECK(csv.find("\n100,100,") != std::string::npos);

    auto rep = verify_lower_mean_value(builtin_spec("unit"), {10000, 100000}, {});
    auto json = rep.to_json();
    for (const char* key : {"\"schema_version\":1", "\"theorem\":\"lower-mean-value\"", "\"series\":",
                            "\"fit_constant\":", "\"verdict\":\"pass\"", "\"spec_hash\":"})
        CHECK(json.find(key) != std::string::npos);
    auto csv2 = rep.to_csv();
    CHECK(csv2.rfind("x,lhs,rhs,ratio\n", 0) == 0);
}

TEST_CASE("parsed spec runs end to end") {
    auto spec = parse_spec_text(kRandomSpec);
    auto v = validate_class_membership(spec, 10000, FnClass::Cb);
    CHECK(v.pass);
    auto rep = verify_upper_explicit(spec, {10000, 100000}, {});
    CHECK(rep.pass);
}
