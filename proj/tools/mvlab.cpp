// mvlab: batch front-end. Parses spec files, orchestrates sieve caching and
// verifier runs, emits CSV/JSON reports.
//
// Exit codes: 0 pass, 1 verdict fail, 2 usage/parse error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "mvlab/acceptance.hpp"
#include "mvlab/dirichlet.hpp"
#include "mvlab/prime_analysis.hpp"
#include "mvlab/sieve.hpp"
#include "mvlab/specfile.hpp"
#include "mvlab/verify.hpp"

namespace fs = std::filesystem;
using namespace mvlab;

namespace {

struct GlobalOpts {
    std::string spec_path;
    std::string spec2_path = "unit";
    std::string grid_arg;
    std::string out_dir;
    double tau_D = 2.1;
    unsigned workers = 2;
    std::uint64_t seed = 20200617;
    double tolerance = 10.0;
    bool extended_x = false;
    bool gnuplot = false;
};

std::vector<std::uint64_t> parse_grid(const std::string& arg, bool extended) {
    if (arg.empty()) return default_x_grid(extended);
    std::vector<std::uint64_t> grid;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        grid.push_back(std::uint64_t(std::llround(std::stod(tok))));
    }
    if (grid.empty()) throw config_error("empty --grid");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::string cache_dir_from_env() {
    const char* dir = std::getenv("MVLAB_CACHE_DIR");
    if (!dir || !*dir) return "";
    fs::create_directories(dir);
    return dir;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
    if (dir.empty()) {
        std::cout << body;
        return;
    }
    fs::create_directories(dir);
    std::ofstream os(dir + "/" + name, std::ios::trunc);
    os << body;
}

// Timestamps live here, never in the report files themselves, so reruns with
// unchanged inputs reproduce byte-identical artifacts.
void write_meta(const std::string& dir, const std::string& what, double seconds) {
    if (dir.empty()) return;
    std::ofstream os(dir + "/run_meta.json", std::ios::app);
    auto now = std::chrono::system_clock::now().time_since_epoch();
    os << "{\"command\":\"" << what << "\",\"wall_seconds\":" << seconds
       << ",\"unix_time\":" << std::chrono::duration_cast<std::chrono::seconds>(now).count() << "}\n";
}

void write_gnuplot(const GlobalOpts& g, const std::string& csv_name, const std::string& title) {
    if (!g.gnuplot || g.out_dir.empty()) return;
    std::ostringstream os;
    os << "set datafile separator ','\nset logscale x\nset key left\nset title '" << title << "'\n"
       << "plot '" << csv_name << "' using 1:4 with linespoints title 'ratio'\n";
    write_file(g.out_dir, csv_name + ".gp", os.str());
}

VerifyOptions make_verify_options(const GlobalOpts& g) {
    VerifyOptions opt;
    opt.D_exp = g.tau_D;
    opt.workers = g.workers;
    opt.cache_dir = cache_dir_from_env();
    opt.tolerance_factor = g.tolerance;
    opt.sieve.worker_count = g.workers;
    return opt;
}

int cmd_validate(const GlobalOpts& g, const std::string& cls_name, std::uint64_t x_max) {
    auto spec = resolve_spec(g.spec_path);
    FnClass cls = cls_name == "Ca" ? FnClass::Ca : cls_name == "Cb" ? FnClass::Cb : FnClass::C;
    auto report = validate_class_membership(spec, x_max, cls, 1.0, g.tau_D);
    for (const auto& c : report.conditions) {
        std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        if (c.first_violation) std::cout << "  first violating prime " << c.first_violation;
        std::cout << "\n";
    }
    std::cout << (report.pass ? "OK" : "NOT a member") << ": " << spec.label << " in "
              << (cls == FnClass::C ? "C" : cls == FnClass::Ca ? "C_a" : "C_b") << "\n";
    return report.pass ? 0 : 1;
}

int cmd_sum(const GlobalOpts& g) {
    auto t0 = std::chrono::steady_clock::now();
    auto spec = resolve_spec(g.spec_path);
    auto grid = parse_grid(g.grid_arg, g.extended_x);
    SieveConfig cfg;
    cfg.worker_count = g.workers;
    cfg.x_max = std::max(cfg.x_max, grid.back());
    auto table = summatory_cached(spec, cfg, grid, cache_dir_from_env());
    write_file(g.out_dir, "sum_" + spec.label + ".csv", table.to_csv());
    write_meta(g.out_dir, "sum", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

int cmd_distance(const GlobalOpts& g, std::uint64_t x) {
    auto t0 = std::chrono::steady_clock::now();
    auto spec = resolve_spec(g.spec_path);
    auto rep = rho_min(spec, x, g.tau_D, 0.0, g.workers);
    write_file(g.out_dir, "distance_" + spec.label + ".csv", distance_report_csv(rep));
    write_file(g.out_dir, "exponents_" + spec.label + ".json", exponent_bundle(spec, x, 1.0).to_json() + "\n");
    std::ostringstream os;
    for (std::size_t j = 0; j < rep.rho.size(); ++j)
        os << "class " << (j + 1) << ": rho = " << rep.rho[j] << " at tau* = " << rep.tau_star[j]
           << (rep.boundary_min[j] ? " (boundary)" : "") << "\n";
    std::cerr << os.str();
    write_meta(g.out_dir, "distance", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& theorem) {
    auto t0 = std::chrono::steady_clock::now();
    auto spec = resolve_spec(g.spec_path);
    auto grid = parse_grid(g.grid_arg, g.extended_x);
    auto opt = make_verify_options(g);
    bool pass = false;
    std::string json, csv, name = theorem + "_" + spec.label;
    if (theorem == "uppergen") {
        auto rep = verify_upper_general(spec, grid, opt);
        pass = rep.pass; json = rep.to_json(); csv = rep.to_csv();
    } else if (theorem == "upper") {
        auto rep = verify_upper_explicit(spec, grid, opt);
        pass = rep.pass; json = rep.to_json(); csv = rep.to_csv();
    } else if (theorem == "asymp") {
        auto rep = verify_asymptotic(spec, grid, opt);
        pass = rep.pass; json = rep.to_json();
    } else if (theorem == "lowermv") {
        auto rep = verify_lower_mean_value(spec, grid, opt);
        pass = rep.pass; json = rep.to_json(); csv = rep.to_csv();
    } else if (theorem == "wirsing") {
        auto rep = verify_wirsing_limit(spec, resolve_spec(g.spec2_path), grid, opt);
        pass = rep.pass; json = rep.to_json(); csv = rep.to_csv();
    } else if (theorem == "wirsingext1") {
        auto res = verify_wirsing_ext(spec, resolve_spec(g.spec2_path), grid, 1, opt);
        pass = res.report.pass; json = res.report.to_json(); csv = res.report.to_csv();
    } else if (theorem == "wirsingext2") {
        auto res = verify_wirsing_ext(spec, resolve_spec(g.spec2_path), grid, 2, opt);
        pass = res.asym.pass; json = res.asym.to_json();
    } else if (theorem == "chain") {
        auto rep = verify_integral_average_chain(spec, grid, opt);
        pass = rep.pass; json = rep.to_json(); csv = rep.to_csv();
    } else {
        throw config_error("unknown theorem id '" + theorem + "'");
    }
    write_file(g.out_dir, name + ".json", json + "\n");
    if (!csv.empty() && !g.out_dir.empty()) {
        write_file(g.out_dir, name + ".csv", csv);
        write_gnuplot(g, name + ".csv", name);
    }
    std::cerr << (pass ? "pass" : "FAIL") << " " << theorem << " for " << spec.label << "\n";
    write_meta(g.out_dir, "verify " + theorem, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return pass ? 0 : 1;
}

int cmd_suite(const GlobalOpts& g) {
    auto t0 = std::chrono::steady_clock::now();
    AcceptanceConfig cfg;
    cfg.workers = g.workers;
    cfg.seed = g.seed;
    cfg.tau_D = g.tau_D;
    cfg.cache_dir = cache_dir_from_env();
    cfg.out_dir = g.out_dir;
    if (!g.out_dir.empty()) fs::create_directories(g.out_dir);
    auto results = run_all(cfg);
    bool all = true;
    std::ostringstream index;
    index << "{\"schema_version\":1,\"criteria\":[";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::cout << r.one_line() << "\n";
        all = all && r.pass;
        index << (i ? "," : "") << "{\"id\":" << r.id << ",\"pass\":" << (r.pass ? "true" : "false")
              << ",\"name\":\"" << r.name << "\",\"detail\":\"" << r.detail << "\"}";
    }
    index << "],\"all_pass\":" << (all ? "true" : "false") << "}\n";
    write_file(g.out_dir, "suite_index.json", index.str());
    write_meta(g.out_dir, "suite", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mvlab: mean values of multiplicative functions, verified at desk scale"};
    app.require_subcommand(1);
    GlobalOpts g;

    app.add_option("--workers", g.workers, "worker thread count")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized suites")->capture_default_str();
    app.add_option("--out", g.out_dir, "output directory (default: stdout)");
    app.add_option("--tolerance", g.tolerance, "bounded-ratio tolerance factor")->capture_default_str();
    app.add_option("--tau-D", g.tau_D, "tau range exponent: T = log^D x")->capture_default_str();
    app.add_flag("--extended-x", g.extended_x, "extend the default grid to 10^8");
    app.add_flag("--gnuplot", g.gnuplot, "emit companion gnuplot scripts next to CSVs");

    auto* validate = app.add_subcommand("validate", "check class membership of a spec");
    std::string cls = "C";
    std::uint64_t vx = 100000;
    validate->add_option("--spec", g.spec_path, "spec file or builtin name")->required();
    validate->add_option("--class", cls, "C | Ca | Cb")->capture_default_str();
    validate->add_option("--xmax", vx, "validation prime bound")->capture_default_str();

    auto* sum = app.add_subcommand("sum", "sieve summatory tables to CSV");
    sum->add_option("--spec", g.spec_path)->required();
    sum->add_option("--grid", g.grid_arg, "comma-separated checkpoints (default geometric 10^4..10^7)");

    auto* distance = app.add_subcommand("distance", "pretentious distance sweep and rho minimizer");
    std::uint64_t dx = 1000000;
    distance->add_option("--spec", g.spec_path)->required();
    distance->add_option("--x", dx, "prime bound x")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "run one theorem verifier");
    std::string theorem;
    verify->add_option("--theorem", theorem,
                       "uppergen | upper | asymp | lowermv | wirsing | wirsingext1 | wirsingext2 | chain")
        ->required();
    verify->add_option("--spec", g.spec_path)->required();
    verify->add_option("--spec2", g.spec2_path, "comparison spec f (default: unit)")->capture_default_str();
    verify->add_option("--grid", g.grid_arg);

    auto* suite = app.add_subcommand("suite", "run the full verification battery");
    (void)suite;
    for (auto* sc : app.get_subcommands({})) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("validate")) return cmd_validate(g, cls, vx);
        if (app.got_subcommand("sum")) return cmd_sum(g);
        if (app.got_subcommand("distance")) return cmd_distance(g, dx);
        if (app.got_subcommand("verify")) return cmd_verify(g, theorem);
        if (app.got_subcommand("suite")) return cmd_suite(g);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
