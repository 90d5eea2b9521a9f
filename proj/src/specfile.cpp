#include "mvlab/specfile.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mvlab {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw parse_error("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_num(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) fail(line, "trailing characters in number '" + tok + "'");
        return v;
    } catch (const parse_error&) {
        throw;
    } catch (...) {
        fail(line, "expected a number, got '" + tok + "'");
    }
}

cplx parse_cplx(const std::string& tok, int line) {
    auto comma = tok.find(',');
    if (comma == std::string::npos) return {parse_num(tok, line), 0.0};
    return {parse_num(tok.substr(0, comma), line), parse_num(tok.substr(comma + 1), line)};
}

} // namespace

MultFnSpec parse_spec_text(const std::string& text, const std::string& origin) {
    std::map<std::string, Entry> kv;
    {
        std::istringstream is(text);
        std::string raw;
        int line = 0;
        while (std::getline(is, raw)) {
            ++line;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw = raw.substr(0, hash);
            raw = trim(raw);
            if (raw.empty()) continue;
            auto eq = raw.find('=');
            if (eq == std::string::npos) fail(line, "expected 'key = value'");
            std::string key = trim(raw.substr(0, eq));
            if (key.empty()) fail(line, "empty key");
            if (kv.count(key)) fail(line, "duplicate key '" + key + "'");
            kv[key] = {trim(raw.substr(eq + 1)), line};
        }
    }
    auto has = [&](const std::string& k) { return kv.count(k) != 0; };
    auto want = [&](const std::string& k) -> Entry& {
        auto it = kv.find(k);
        if (it == kv.end()) throw parse_error(origin + ": missing required key '" + k + "'");
        return it->second;
    };

    MultFnSpec spec;
    spec.label = has("label") ? kv["label"].value : origin;

    {
        Entry& e = want("extension");
        if (e.value == "strong")
            spec.extension = Extension::Strong;
        else if (e.value == "complete")
            spec.extension = Extension::Complete;
        else
            fail(e.line, "extension must be 'strong' or 'complete'");
    }

    // ---- partition --------------------------------------------------------
    {
        Entry& e = want("partition");
        std::size_t m = 1;
        if (e.value == "trivial") {
            spec.partition.kind = PartitionKind::Trivial;
        } else if (e.value == "argument") {
            spec.partition.kind = PartitionKind::ByArgumentSector;
            Entry& b = want("partition.bounds");
            for (auto& tok : split_ws(b.value)) spec.partition.arg_bounds.push_back(parse_num(tok, b.line));
            if (spec.partition.arg_bounds.size() < 2) fail(b.line, "need at least two sector bounds");
            for (std::size_t i = 1; i < spec.partition.arg_bounds.size(); ++i)
                if (!(spec.partition.arg_bounds[i - 1] < spec.partition.arg_bounds[i]))
                    fail(b.line, "sector bounds must increase");
            m = spec.partition.arg_bounds.size() - 1;
        } else if (e.value == "residue") {
            spec.partition.kind = PartitionKind::ByResidueClass;
            Entry& q = want("partition.q");
            spec.partition.q = std::uint32_t(parse_num(q.value, q.line));
            if (spec.partition.q < 2) fail(q.line, "partition.q must be >= 2");
            spec.partition.residue_class.assign(spec.partition.q, 0);
            Entry& c = want("partition.classes");
            int maxc = 0;
            for (auto& tok : split_ws(c.value)) {
                auto colon = tok.find(':');
                if (colon == std::string::npos) fail(c.line, "expected residue:class pairs");
                int r = int(parse_num(tok.substr(0, colon), c.line));
                int cls = int(parse_num(tok.substr(colon + 1), c.line));
                if (r < 0 || std::uint32_t(r) >= spec.partition.q) fail(c.line, "residue out of range");
                if (cls < 1) fail(c.line, "class index must be >= 1");
                spec.partition.residue_class[std::size_t(r)] = cls;
                maxc = std::max(maxc, cls);
            }
            m = std::size_t(maxc);
        } else if (e.value == "fracpart") {
            spec.partition.kind = PartitionKind::ByFractionalPart;
            Entry& t = want("partition.tau");
            spec.partition.tau = parse_num(t.value, t.line);
            Entry& b = want("partition.fracs");
            for (auto& tok : split_ws(b.value)) spec.partition.frac_bounds.push_back(parse_num(tok, b.line));
            if (spec.partition.frac_bounds.size() < 2 || spec.partition.frac_bounds.front() != 0.0 ||
                spec.partition.frac_bounds.back() != 1.0)
                fail(b.line, "fracpart bounds must run from 0 to 1");
            m = spec.partition.frac_bounds.size() - 1;
        } else {
            fail(e.line, "unknown partition variant '" + e.value + "'");
        }

        for (std::size_t j = 1; j <= m; ++j) {
            Entry& c = want("class" + std::to_string(j));
            auto toks = split_ws(c.value);
            if (toks.size() != 5) fail(c.line, "class lines take five numbers: delta B phi beta eta");
            ClassParams cp;
            cp.delta = parse_num(toks[0], c.line);
            cp.B = parse_num(toks[1], c.line);
            cp.phi = parse_num(toks[2], c.line);
            cp.beta = parse_num(toks[3], c.line);
            cp.eta = parse_num(toks[4], c.line);
            if (!(cp.delta > 0 && cp.delta <= cp.B)) fail(c.line, "need 0 < delta <= B");
            if (!(cp.beta > 0 && cp.beta < 3.14159265358979324)) fail(c.line, "need beta in (0, pi)");
            if (cp.eta < 0) fail(c.line, "eta must be nonnegative");
            spec.partition.classes.push_back(cp);
        }
    }

    if (has("S")) {
        Entry& e = kv["S"];
        for (auto& tok : split_ws(e.value)) {
            double v = parse_num(tok, e.line);
            if (v < 2 || v != std::floor(v)) fail(e.line, "S entries must be primes");
            spec.partition.S.push_back(std::uint32_t(v));
        }
    }
    if (has("partition.r")) spec.partition.subpoly_r = parse_num(kv["partition.r"].value, kv["partition.r"].line);
    if (has("tolerance")) spec.unit_modulus_tol = parse_num(kv["tolerance"].value, kv["tolerance"].line);

    // ---- rule --------------------------------------------------------------
    {
        Entry& e = want("rule");
        if (e.value == "constant") {
            spec.rule.kind = RuleKind::ConstantPerClass;
            if (spec.partition.kind == PartitionKind::ByArgumentSector)
                fail(e.line, "constant-per-class cannot use the argument-sector partition (circular)");
            Entry& v = want("rule.values");
            for (auto& tok : split_ws(v.value)) spec.rule.class_values.push_back(parse_cplx(tok, v.line));
            if (spec.rule.class_values.size() != spec.partition.m())
                fail(v.line, "rule.values count must match the class count");
            if (has("rule.s_value"))
                spec.rule.s_value = parse_cplx(kv["rule.s_value"].value, kv["rule.s_value"].line);
        } else if (e.value == "archimedean") {
            spec.rule.kind = RuleKind::ArchimedeanTwist;
            Entry& a = want("rule.alpha");
            spec.rule.alpha = parse_num(a.value, a.line);
        } else if (e.value == "character") {
            spec.rule.kind = RuleKind::DirichletCharacter;
            Entry& q = want("rule.q");
            spec.rule.q = std::uint32_t(parse_num(q.value, q.line));
            if (spec.rule.q < 2) fail(q.line, "rule.q must be >= 2");
            spec.rule.chi_table.assign(spec.rule.q, 0.0);
            Entry& c = want("rule.chi");
            for (auto& tok : split_ws(c.value)) {
                auto colon = tok.find(':');
                if (colon == std::string::npos) fail(c.line, "expected residue:re,im entries");
                int r = int(parse_num(tok.substr(0, colon), c.line));
                if (r < 0 || std::uint32_t(r) >= spec.rule.q) fail(c.line, "residue out of range");
                spec.rule.chi_table[std::size_t(r)] = parse_cplx(tok.substr(colon + 1), c.line);
            }
        } else if (e.value == "liouville") {
            spec.rule.kind = RuleKind::LiouvilleLike;
            Entry& s = want("rule.sign");
            double v = parse_num(s.value, s.line);
            if (v != 1.0 && v != -1.0) fail(s.line, "rule.sign must be +1 or -1");
            spec.rule.sign = int(v);
        } else if (e.value == "random") {
            spec.rule.kind = RuleKind::SeededRandom;
            Entry& s = want("rule.seed");
            spec.rule.seed = std::uint64_t(parse_num(s.value, s.line));
            Entry& r = want("rule.radius");
            auto toks = split_ws(r.value);
            if (toks.size() != 2) fail(r.line, "rule.radius takes two numbers: lo hi");
            spec.rule.radius_lo = parse_num(toks[0], r.line);
            spec.rule.radius_hi = parse_num(toks[1], r.line);
            if (!(spec.rule.radius_lo > 0 && spec.rule.radius_lo <= spec.rule.radius_hi))
                fail(r.line, "need 0 < radius lo <= hi");
            if (has("rule.arg")) spec.rule.arg_halfwidth = parse_num(kv["rule.arg"].value, kv["rule.arg"].line);
            if (spec.rule.arg_halfwidth < 0) fail(kv["rule.arg"].line, "rule.arg must be nonnegative");
            if (has("rule.arg_center"))
                spec.rule.arg_center = parse_num(kv["rule.arg_center"].value, kv["rule.arg_center"].line);
        } else {
            fail(e.line, "unknown rule '" + e.value + "'");
        }
    }

    if (spec.extension == Extension::Complete)
        for (const auto& c : spec.partition.classes)
            if (c.B >= 2.0) throw parse_error(origin + ": complete extension requires every B_j < 2");
    return spec;
}

MultFnSpec parse_spec_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error("cannot open spec file '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return parse_spec_text(os.str(), path);
}

MultFnSpec resolve_spec(const std::string& name_or_path) {
    if (name_or_path.rfind("builtin:", 0) == 0) return builtin_spec(name_or_path.substr(8));
    if (name_or_path.find('/') == std::string::npos && name_or_path.find(".spec") == std::string::npos) {
        try {
            return builtin_spec(name_or_path);
        } catch (const config_error&) {
            // fall through to file lookup
        }
    }
    return parse_spec_file(name_or_path);
}

} // namespace mvlab
