// Command-line frontend: exact higher-order tensor traces and the spectral
// hypergraph reports built on them. JSON in, JSON out by default; all values
// are exact rationals in "p/q" text form.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypertrace/errors.hpp"
#include "hypertrace/oracle.hpp"
#include "hypertrace/spectral.hpp"
#include "hypertrace/tensor_io.hpp"
#include "hypertrace/trace.hpp"
#include "hypertrace/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace hypertrace;

struct GlobalOptions {
    std::string output = "json";
    int threads = 1;
    long max_census = 10000000;
    std::string max_oracle_terms = "10000000";
    int max_phm_n = 20;
    long max_charpoly_upto = 64;

    TraceOptions trace_options() const {
        TraceOptions opt;
        opt.threads = threads;
        opt.max_census = Integer(max_census);
        return opt;
    }
};

ordered_json make_output() {
    ordered_json j;
    j["format_version"] = format_version;
    return j;
}

void emit(const GlobalOptions& g, const ordered_json& j) {
    if (g.output == "json") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    // flat table: one "key: value" line per top-level field
    for (const auto& [key, value] : j.items()) {
        if (value.is_array() || value.is_object()) {
            std::cout << key << ":\n";
            for (const auto& item : value) std::cout << "  " << item.dump() << "\n";
        } else if (value.is_string()) {
            std::cout << key << ": " << value.get<std::string>() << "\n";
        } else {
            std::cout << key << ": " << value.dump() << "\n";
        }
    }
}

std::string arcs_text(const ArcMultiset& e) {
    std::string out;
    for (const auto& [arc, mult] : e.arcs()) {
        if (!out.empty()) out += " ";
        out += std::to_string(arc.first) + "," + std::to_string(arc.second);
        if (mult > 1) out += ":" + std::to_string(mult);
    }
    return out;
}

struct ArcToken {
    int i, j;
    long mult;
};

// "i,j" or "i,j:mult"
ArcToken parse_arc_token(const std::string& token) {
    size_t comma = token.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("arc token needs 'i,j[:mult]': " + token);
    size_t colon = token.find(':', comma);
    auto parse_positive = [&](const std::string& s, const char* what) {
        try {
            size_t used = 0;
            long v = std::stol(s, &used);
            if (used != s.size() || v < 1) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw std::invalid_argument(std::string("arc token: bad ") + what + " in '" + token + "'");
        }
    };
    long i = parse_positive(token.substr(0, comma), "source");
    long j = parse_positive(
        token.substr(comma + 1, colon == std::string::npos ? std::string::npos : colon - comma - 1),
        "target");
    long mult = colon == std::string::npos ? 1 : parse_positive(token.substr(colon + 1), "multiplicity");
    return ArcToken{static_cast<int>(i), static_cast<int>(j), mult};
}

int run_trace(const GlobalOptions& g, const std::string& file, long d, const std::string& method,
              bool dump_terms) {
    Tensor t = load_tensor(file);
    ordered_json out = make_output();
    out["d"] = d;
    out["method"] = method;

    Rational value;
    if (method == "general") {
        value = trace_d(t, d, g.trace_options());
    } else if (method == "closed") {
        if (d == 2)
            value = trace_2_closed(t);
        else if (d == 3)
            value = trace_3_closed(t);
        else
            throw std::invalid_argument("method 'closed' supports only d = 2 or d = 3");
    } else if (method == "oracle") {
        value = trace_d_oracle(t, d, Integer(g.max_oracle_terms));
    } else {
        throw std::invalid_argument("unknown method '" + method + "'");
    }
    out["trace"] = value.str();

    if (dump_terms) {
        auto terms = trace_terms(t, d, g.trace_options());
        auto arr = ordered_json::array();
        for (const auto& term : terms) {
            ordered_json tj;
            tj["arcs"] = arcs_text(term.arcs);
            tj["b"] = term.b.get_str();
            tj["c"] = term.c.get_str();
            tj["walks"] = term.walks.get_str();
            tj["pi"] = term.pi.str();
            arr.push_back(std::move(tj));
        }
        out["terms"] = std::move(arr);
    }
    emit(g, out);
    return 0;
}

int run_charpoly(const GlobalOptions& g, const std::string& file, long upto) {
    Tensor t = load_tensor(file);
    auto coeffs = charpoly_coeffs(t, upto, g.trace_options(), g.max_charpoly_upto);
    Integer full = charpoly_degree(t);
    ordered_json out = make_output();
    out["upto"] = upto;
    out["full_degree"] = full.get_str();
    out["complete"] = Integer(upto) >= full;
    auto arr = ordered_json::array();
    for (const auto& c : coeffs) arr.push_back(c.str());
    out["coeffs"] = std::move(arr);
    emit(g, out);
    return 0;
}

int run_symmetry(const GlobalOptions& g, const std::string& file, long bound) {
    Hypergraph h = load_hypergraph(file);
    SymmetryReport rep = symmetry_report(h, bound, g.trace_options());
    ordered_json out = make_output();
    out["k"] = rep.k;
    out["bound"] = rep.bound;
    out["verdict"] = rep.verdict();
    out["complete"] = rep.complete;
    auto arr = ordered_json::array();
    for (const auto& [d, tr] : rep.witnesses) arr.push_back({{"d", d}, {"trace", tr.str()}});
    out["witnesses"] = std::move(arr);
    emit(g, out);
    return 0;
}

int run_phm(const GlobalOptions& g, const std::string& file, int p) {
    Hypergraph h = load_hypergraph(file);
    auto part = is_p_hm_bipartite(h, p, g.max_phm_n);
    ordered_json out = make_output();
    out["p"] = p;
    out["found"] = part.has_value();
    if (part) {
        out["v1"] = part->first;
        out["v2"] = part->second;
    }
    emit(g, out);
    return 0;
}

int run_lapcompare(const GlobalOptions& g, const std::string& file) {
    Hypergraph h = load_hypergraph(file);
    LaplacianComparison cmp = laplacian_separation(h, g.trace_options());
    ordered_json out = make_output();
    out["k"] = h.k();
    out["trace_laplacian"] = cmp.trace_laplacian.str();
    out["trace_signless"] = cmp.trace_signless.str();
    out["strictly_unequal"] = cmp.strictly_unequal;
    emit(g, out);
    return 0;
}

int run_walks(const GlobalOptions& g, const std::vector<std::string>& tokens) {
    std::vector<ArcToken> arcs;
    int max_vertex = 1;
    for (const std::string& token : tokens) {
        arcs.push_back(parse_arc_token(token));
        max_vertex = std::max({max_vertex, arcs.back().i, arcs.back().j});
    }
    ArcMultiset e(max_vertex);
    for (const ArcToken& arc : arcs) e.add(arc.i, arc.j, arc.mult);
    ordered_json out = make_output();
    out["walks"] = count_closed_walks(e).get_str();
    out["b"] = weight_b(e).get_str();
    out["c"] = weight_c(e).get_str();
    emit(g, out);
    return 0;
}

// deterministic generator for the selfcheck instances (splitmix64)
struct SelfcheckRng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

Tensor selfcheck_tensor(int m, int n, SelfcheckRng& rng) {
    static const Rational pool[] = {Rational(1), Rational(-1), Rational(2),
                                    Rational(1, 2), Rational(-1, 2), Rational(-2, 3)};
    Tensor::EntryMap entries;
    int target = 2 * n;
    for (int t = 0; t < target; ++t) {
        MultiIndex idx(static_cast<size_t>(m));
        for (int c = 0; c < m; ++c) idx[c] = static_cast<int>(rng.range(1, n));
        entries[idx] = pool[rng.next() % std::size(pool)];
    }
    return Tensor(m, n, std::move(entries));
}

int run_selfcheck(const GlobalOptions& g, int trials) {
    struct Cell {
        int m, n;
        long dmax;
    };
    const Cell cells[] = {{2, 2, 4}, {2, 3, 3}, {3, 2, 3}, {3, 3, 2}, {4, 2, 2}};

    ordered_json out = make_output();
    auto arr = ordered_json::array();
    bool all_pass = true;
    for (const Cell& cell : cells) {
        for (long d = 1; d <= cell.dmax; ++d) {
            SelfcheckRng rng{0xC0FFEEULL + static_cast<std::uint64_t>(cell.m * 10000 + cell.n * 100 + d)};
            bool pass = true;
            for (int trial = 0; trial < trials; ++trial) {
                Tensor t = selfcheck_tensor(cell.m, cell.n, rng);
                Rational census = trace_d(t, d, g.trace_options());
                Rational oracle = trace_d_oracle(t, d, Integer(g.max_oracle_terms));
                if (census != oracle) pass = false;
                if (cell.m == 2 && census != matrix_power_trace(t, d)) pass = false;
            }
            if (!pass) all_pass = false;
            if (g.output == "table") {
                std::cout << (pass ? "PASS" : "FAIL") << " m=" << cell.m << " n=" << cell.n
                          << " d=" << d << " (" << trials << " trials)\n";
            } else {
                arr.push_back({{"m", cell.m}, {"n", cell.n}, {"d", d}, {"trials", trials}, {"pass", pass}});
            }
        }
    }
    if (g.output == "table") {
        std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    } else {
        out["cells"] = std::move(arr);
        out["all_pass"] = all_pass;
        emit(g, out);
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact higher-order tensor traces and hypergraph spectra"};
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--output", g.output, "output mode: json or table")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    app.add_option("--threads", g.threads, "parallelism degree for census evaluation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-census", g.max_census, "refuse when the predicted census size exceeds this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-oracle-terms", g.max_oracle_terms,
                   "refuse when the predicted oracle term count exceeds this")
        ->capture_default_str();
    app.add_option("--max-phm-n", g.max_phm_n, "vertex cap for the exhaustive bipartition search")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-charpoly-upto", g.max_charpoly_upto, "cap on requested charpoly coefficients")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.set_version_flag("--version", std::string("hypertrace ") + tool_version + " (format " +
                                          std::to_string(format_version) + ")");
    app.require_subcommand(1);

    // trace
    auto* trace_cmd = app.add_subcommand("trace", "Tr_d of a tensor");
    long trace_d_arg = 0;
    std::string trace_method = "general";
    bool dump_terms = false;
    std::string trace_file;
    trace_cmd->add_option("--d", trace_d_arg, "trace order d >= 1")->required();
    trace_cmd->add_option("--method", trace_method, "general | closed | oracle")
        ->check(CLI::IsMember({"general", "closed", "oracle"}))
        ->capture_default_str();
    trace_cmd->add_flag("--dump-terms", dump_terms, "emit one entry per census arc multiset");
    trace_cmd->add_option("file", trace_file, "tensor JSON file")->required();

    // charpoly
    auto* charpoly_cmd = app.add_subcommand("charpoly", "characteristic polynomial coefficients");
    long upto = 0;
    std::string charpoly_file;
    charpoly_cmd->add_option("--upto", upto, "compute a_0..a_upto")->required();
    charpoly_cmd->add_option("file", charpoly_file, "tensor JSON file")->required();

    // symmetry
    auto* symmetry_cmd = app.add_subcommand("symmetry", "bounded k-symmetry verdict for a hypergraph");
    long bound = 0;
    std::string symmetry_file;
    symmetry_cmd->add_option("--bound", bound, "check Tr_d for d = 1..bound")->required();
    symmetry_cmd->add_option("file", symmetry_file, "hypergraph JSON file")->required();

    // phm
    auto* phm_cmd = app.add_subcommand("phm", "search for a p-hm bipartition");
    int p = 0;
    std::string phm_file;
    phm_cmd->add_option("--p", p, "edges must meet V1 in exactly p vertices")->required();
    phm_cmd->add_option("file", phm_file, "hypergraph JSON file")->required();

    // lapcompare
    auto* lap_cmd = app.add_subcommand("lapcompare", "Tr_k of Laplacian vs signless Laplacian");
    std::string lap_file;
    lap_cmd->add_option("file", lap_file, "hypergraph JSON file")->required();

    // walks
    auto* walks_cmd = app.add_subcommand("walks", "closed-walk count and weights of an arc multiset");
    std::vector<std::string> arc_tokens;
    walks_cmd->add_option("arcs", arc_tokens, "arcs as i,j[:mult]")->required();

    // selfcheck
    auto* selfcheck_cmd = app.add_subcommand("selfcheck", "oracle-equivalence grid");
    int trials = 3;
    selfcheck_cmd->add_option("--trials", trials, "random tensors per cell")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1; // CLI misuse is a domain error
    }

    try {
        if (*trace_cmd) return run_trace(g, trace_file, trace_d_arg, trace_method, dump_terms);
        if (*charpoly_cmd) return run_charpoly(g, charpoly_file, upto);
        if (*symmetry_cmd) return run_symmetry(g, symmetry_file, bound);
        if (*phm_cmd) return run_phm(g, phm_file, p);
        if (*lap_cmd) return run_lapcompare(g, lap_file);
        if (*walks_cmd) return run_walks(g, arc_tokens);
        if (*selfcheck_cmd) return run_selfcheck(g, trials);
    } catch (const resource_limit_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
