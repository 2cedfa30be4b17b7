#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permlab/analysis.hpp"
#include "permlab/decompose.hpp"
#include "permlab/enumerate.hpp"
#include "permlab/inject.hpp"
#include "permlab/occurrence.hpp"
#include "permlab/permutation.hpp"

namespace {

using nlohmann::ordered_json;
using namespace permlab;

struct GlobalOptions {
    std::string cache;
    int threads = 0;
    uint64_t budget = 10'000'000'000ULL;
    bool timing = false;
};

CountingContext make_context(const GlobalOptions& g) {
    EnumOptions opts;
    opts.threads = g.threads;
    opts.node_budget = g.budget;
    return CountingContext(opts, g.cache);
}

std::string rat_string(const BigRat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

double rat_approx(const BigRat& r) { return r.convert_to<double>(); }

ordered_json hypothesis_json(const HypothesisReport& rep) {
    ordered_json parts = ordered_json::array();
    for (const Permutation& part : rep.skew_parts.parts) parts.push_back(to_string(part));
    return ordered_json{{"schema", 1},
                        {"pattern", to_string(rep.pattern)},
                        {"is_indecomposable", rep.is_indecomposable},
                        {"is_skew_decomposable", rep.is_skew_decomposable},
                        {"skew_parts", parts},
                        {"middle_parts_not_one", rep.middle_parts_not_one},
                        {"is_separable", rep.is_separable},
                        {"lower_bound_applies", rep.lower_bound_applies},
                        {"upper_bound_applies", rep.upper_bound_applies},
                        {"thm41_applies", rep.thm41_applies}};
}

int run_count(const GlobalOptions& g, const std::string& pattern, int n, int r) {
    CountingContext ctx = make_context(g);
    std::cout << ctx.count(parse_permutation(pattern), n, r).str() << "\n";
    return 0;
}

int run_table(const GlobalOptions& g, const std::string& pattern, int n_max, int r_max,
              const std::string& format) {
    CountingContext ctx = make_context(g);
    const CountTable table = ctx.table(parse_permutation(pattern), n_max, r_max);
    if (format == "csv") {
        std::cout << to_csv(table);
    } else if (format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& [n, row] : table.rows) {
            ordered_json counts = ordered_json::array();
            for (const BigInt& c : row.counts) counts.push_back(c.str());
            rows.push_back({{"n", n},
                            {"counts", counts},
                            {"overflow", row.overflow.value_or(0).str()}});
        }
        std::cout << ordered_json{{"schema", 1},
                                  {"pattern", to_string(table.pattern)},
                                  {"r_max", r_max},
                                  {"rows", rows}}
                         .dump(2)
                  << "\n";
    } else {
        for (const auto& [n, row] : table.rows) {
            std::cout << "n=" << n << ":";
            for (size_t r = 0; r < row.counts.size(); ++r)
                std::cout << " r" << r << "=" << row.counts[r].str();
            if (row.capped() && *row.overflow != 0)
                std::cout << " overflow=" << row.overflow->str();
            std::cout << "\n";
        }
    }
    return 0;
}

int run_check(const std::string& pattern) {
    const HypothesisReport rep = check_hypotheses(parse_permutation(pattern));
    std::cout << hypothesis_json(rep).dump(2) << "\n";
    return 0;
}

int run_inject(const std::string& pattern, const std::string& base,
               const std::vector<int>& positions, bool json) {
    const Permutation q = parse_permutation(pattern);
    const Permutation p = parse_permutation(base);
    const Permutation w = inject_lower(q, positions, p);
    if (json) {
        std::cout << ordered_json{{"schema", 1}, {"result", to_string(w)}}.dump(2) << "\n";
    } else {
        std::cout << to_string(w) << "\n";
    }
    return 0;
}

int run_extract(const std::string& pattern, const std::string& word, int r, bool json) {
    const Extraction ext = extract_lower(parse_permutation(pattern), parse_permutation(word), r);
    if (json) {
        std::cout << ordered_json{{"schema", 1},
                                  {"positions", ext.positions},
                                  {"base", to_string(ext.base)}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "positions:";
        for (int s : ext.positions) std::cout << " " << s;
        std::cout << "\nbase: " << to_string(ext.base) << "\n";
    }
    return 0;
}

int run_swap(const std::string& pattern, const std::string& perm, bool json) {
    const SwapResult res = swap_upper(parse_permutation(pattern), parse_permutation(perm));
    if (json) {
        std::cout << ordered_json{{"schema", 1},
                                  {"position", res.position},
                                  {"result", to_string(res.result)}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "position: " << res.position << "\nresult: " << to_string(res.result) << "\n";
    }
    return 0;
}

int run_verify(const GlobalOptions& g, const std::string& mode, const std::string& pattern,
               int n, int r, bool json, bool no_counts) {
    CountingContext ctx = make_context(g);
    VerifyOptions vopts;
    vopts.with_counts = !no_counts;
    const Permutation q = parse_permutation(pattern);
    const VerificationReport report =
        mode == "lower" ? verify_lower(q, n, r, ctx, vopts) : verify_upper(q, n, r, ctx, vopts);
    if (!report.passed() || json) {
        std::cout << to_json(report).dump(2) << "\n";
    } else {
        std::cout << "verify " << mode << " q=" << to_string(q) << " n=" << n << " r=" << r
                  << ": pass (domain " << report.domain_size.str() << ")";
        if (report.inequality)
            std::cout << "  [" << report.inequality->lhs.str()
                      << (report.inequality->lhs_at_least_rhs ? " >= " : " <= ")
                      << report.inequality->rhs.str() << "]";
        std::cout << "\n";
    }
    return report.passed() ? 0 : 1;
}

int run_wilf(const GlobalOptions& g, int length, int n_max, int r_max, bool json) {
    CountingContext ctx = make_context(g);
    const WilfPartition part = wilf_partition(length, n_max, r_max, ctx);
    if (json) {
        ordered_json blocks = ordered_json::array();
        for (const auto& block : part.blocks) {
            ordered_json members = ordered_json::array();
            for (const Permutation& p : block) members.push_back(to_string(p));
            blocks.push_back(members);
        }
        std::cout << ordered_json{{"schema", 1},
                                  {"length", length},
                                  {"n_max", n_max},
                                  {"r_max", r_max},
                                  {"block_count", part.blocks.size()},
                                  {"blocks", blocks}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << part.blocks.size() << " effective Wilf classes (length " << length
                  << ", grid n<=" << n_max << ", r<=" << r_max << "+overflow)\n";
        for (size_t i = 0; i < part.blocks.size(); ++i) {
            std::cout << "block " << i + 1 << ":";
            for (const Permutation& p : part.blocks[i]) std::cout << " " << to_string(p);
            std::cout << "\n";
        }
    }
    return 0;
}

int run_series(const std::string& id, int terms, const std::string& linear_coef,
               const std::string& format) {
    if (id != "1342")
        throw std::invalid_argument("unknown series id '" + id + "' (only 1342 is available)");

    const bool custom = !linear_coef.empty();
    const BigRat coef = custom ? BigRat(linear_coef) : resolved_1342_linear_coefficient();
    const SeriesExpansion series = series_1342(terms, coef);

    // The form as printed uses 12z; its constant term violates |S_0| = 1.
    const BigRat printed = printed_1342_linear_coefficient();
    const SeriesExpansion printed_head = series_1342(0, printed);
    const bool printed_ok = printed_head.coefficients[0] == 1;

    if (format == "csv") {
        std::cout << "n,coefficient\n";
        for (size_t i = 0; i < series.coefficients.size(); ++i)
            std::cout << i << ',' << rat_string(series.coefficients[i]) << "\n";
    } else if (format == "json") {
        ordered_json coeffs = ordered_json::array();
        for (const BigRat& c : series.coefficients) coeffs.push_back(rat_string(c));
        std::cout << ordered_json{{"schema", 1},
                                  {"id", id},
                                  {"linear_coefficient", rat_string(coef)},
                                  {"resolved_linear_coefficient",
                                   rat_string(resolved_1342_linear_coefficient())},
                                  {"printed_linear_coefficient", rat_string(printed)},
                                  {"printed_constant_term", rat_string(printed_head.coefficients[0])},
                                  {"printed_form_consistent", printed_ok},
                                  {"coefficients", coeffs}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "series 1342, linear coefficient " << rat_string(coef)
                  << (custom ? " (given)" : " (resolved)") << "\n";
        for (size_t i = 0; i < series.coefficients.size(); ++i)
            std::cout << "z^" << i << ": " << rat_string(series.coefficients[i]) << "\n";
        std::cout << "discrepancy: printed linear coefficient " << rat_string(printed)
                  << " gives constant term " << rat_string(printed_head.coefficients[0])
                  << (printed_ok ? " (consistent with |S_0| = 1)"
                                 : " != 1, inconsistent with |S_0| = 1; resolved value is " +
                                       rat_string(resolved_1342_linear_coefficient()))
                  << "\n";
    }
    return 0;
}

int run_ratio(const GlobalOptions& g, const std::string& pattern, int r, int n_max,
              const std::string& format) {
    CountingContext ctx = make_context(g);
    const RatioTable table = ratio_table(parse_permutation(pattern), r, n_max, ctx);
    if (format == "csv") {
        std::cout << "n,rho\n";
        for (const auto& [n, rho] : table.rows) std::cout << n << ',' << rat_string(rho) << "\n";
    } else if (format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& [n, rho] : table.rows)
            rows.push_back({{"n", n}, {"rho", rat_string(rho)}});
        std::cout << ordered_json{{"schema", 1},
                                  {"pattern", to_string(table.pattern)},
                                  {"r", table.r},
                                  {"rows", rows},
                                  {"min", rat_string(table.min)},
                                  {"max", rat_string(table.max)}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "rho_{n," << r << "} = |S_{n," << r << "}| / (n^" << r << " |S_n|) for "
                  << pattern << "\n";
        for (const auto& [n, rho] : table.rows)
            std::cout << "n=" << n << ": " << rat_string(rho) << "  (approx " << rat_approx(rho)
                      << ")\n";
        std::cout << "min " << rat_string(table.min) << ", max " << rat_string(table.max) << "\n";
    }
    return 0;
}

int run_audit(const GlobalOptions& g, const std::string& pattern, int n_max, int r_max,
              bool json) {
    CountingContext ctx = make_context(g);
    const InequalityAudit audit = inequality_audit(parse_permutation(pattern), n_max, r_max, ctx);

    auto line_json = [](const AuditLine& line) {
        return ordered_json{{"family", line.family},
                            {"n", line.n},
                            {"r", line.r},
                            {"lhs", line.lhs.str()},
                            {"relation", line.lhs_at_least_rhs ? ">=" : "<="},
                            {"rhs", line.rhs.str()},
                            {"holds", line.holds}};
    };

    if (!audit.all_hold || json) {
        ordered_json lines = ordered_json::array();
        for (const AuditLine& line : audit.lines)
            if (!audit.all_hold ? !line.holds : true) lines.push_back(line_json(line));
        std::cout << ordered_json{{"schema", 1},
                                  {"pattern", to_string(audit.pattern)},
                                  {"n_max", audit.n_max},
                                  {"r_max", audit.r_max},
                                  {"lower_family_checked", audit.lower_family_checked},
                                  {"upper_family_checked", audit.upper_family_checked},
                                  {"all_hold", audit.all_hold},
                                  {"lines", lines}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "audit " << pattern << " grid n<=" << n_max << " r<=" << r_max << ": all "
                  << audit.lines.size() << " inequalities hold";
        if (!audit.lower_family_checked) std::cout << " (lower family not applicable)";
        if (!audit.upper_family_checked) std::cout << " (upper family not applicable)";
        std::cout << "\n";
    }
    return audit.all_hold ? 0 : 1;
}

int run_decompose(const std::string& pattern) {
    return run_check(pattern);  // the hypothesis report is the decomposition surface
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"permlab - permutation pattern laboratory"};
    app.require_subcommand(1);

    GlobalOptions g;
    if (const char* env = std::getenv("PERMLAB_CACHE"))
        g.cache = env;
    else
        g.cache = "./permlab-cache";
    app.add_option("--cache", g.cache, "count cache directory (\"\" disables)")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "enumeration threads (0 = all cores)");
    app.add_option("--budget", g.budget, "enumeration node budget");
    app.add_flag("--timing", g.timing, "print elapsed wall time to stderr");

    std::string pattern, base, word, perm, mode, id, format = "human", linear_coef;
    std::vector<int> positions;
    int n = 0, r = 0, n_max = 0, r_max = 0, length = 4, terms = 10;
    bool json = false, no_counts = false;

    auto* count_cmd = app.add_subcommand("count", "|S_{n,r}(q)| from cache or enumeration");
    count_cmd->add_option("--pattern", pattern)->required();
    count_cmd->add_option("--n", n)->required();
    count_cmd->add_option("--r", r)->required();

    auto* table_cmd = app.add_subcommand("table", "build and persist a count table");
    table_cmd->add_option("--pattern", pattern)->required();
    table_cmd->add_option("--n-max", n_max)->required();
    table_cmd->add_option("--r-max", r_max)->required();
    table_cmd->add_option("--format", format)->check(CLI::IsMember({"human", "csv", "json"}));

    auto* decompose_cmd = app.add_subcommand("decompose", "structural hypothesis report");
    decompose_cmd->add_option("pattern", pattern)->required();

    auto* check_cmd = app.add_subcommand("check", "structural hypothesis report");
    check_cmd->add_option("pattern", pattern)->required();

    auto* inject_cmd = app.add_subcommand("inject", "lower-bound insertion map");
    inject_cmd->add_option("--pattern", pattern)->required();
    inject_cmd->add_option("--base", base, "avoider to insert into (may be empty)");
    inject_cmd->add_option("--positions", positions, "insertion positions")
        ->required()
        ->delimiter(',');
    inject_cmd->add_flag("--json", json);

    auto* extract_cmd = app.add_subcommand("extract", "invert the insertion map");
    extract_cmd->add_option("--pattern", pattern)->required();
    extract_cmd->add_option("--word", word)->required();
    extract_cmd->add_option("--r", r)->required();
    extract_cmd->add_flag("--json", json);

    auto* swap_cmd = app.add_subcommand("swap", "upper-bound swap map");
    swap_cmd->add_option("--pattern", pattern)->required();
    swap_cmd->add_option("--perm", perm)->required();
    swap_cmd->add_flag("--json", json);

    auto* verify_cmd = app.add_subcommand("verify", "exhaustively verify an injection");
    verify_cmd->add_option("mode", mode)->required()->check(CLI::IsMember({"lower", "upper"}));
    verify_cmd->add_option("--pattern", pattern)->required();
    verify_cmd->add_option("--n", n)->required();
    verify_cmd->add_option("--r", r)->required();
    verify_cmd->add_flag("--json", json);
    verify_cmd->add_flag("--no-counts", no_counts, "skip the exact inequality side");

    auto* wilf_cmd = app.add_subcommand("wilf", "effective Wilf classes over a grid");
    wilf_cmd->add_option("--length", length)->required();
    wilf_cmd->add_option("--n-max", n_max)->required();
    wilf_cmd->add_option("--r-max", r_max)->required();
    wilf_cmd->add_flag("--json", json);

    auto* series_cmd = app.add_subcommand("series", "exact generating-function expansion");
    series_cmd->add_option("--id", id)->required();
    series_cmd->add_option("--terms", terms)->required();
    series_cmd->add_option("--linear-coef", linear_coef, "override the denominator's linear term");
    series_cmd->add_option("--format", format)->check(CLI::IsMember({"human", "csv", "json"}));

    auto* ratio_cmd = app.add_subcommand("ratio", "rho_{n,r} table");
    ratio_cmd->add_option("--pattern", pattern)->required();
    ratio_cmd->add_option("--r", r)->required();
    ratio_cmd->add_option("--n-max", n_max)->required();
    ratio_cmd->add_option("--format", format)->check(CLI::IsMember({"human", "csv", "json"}));

    auto* audit_cmd = app.add_subcommand("audit", "exact inequality audit");
    audit_cmd->add_option("--pattern", pattern)->required();
    audit_cmd->add_option("--n-max", n_max)->required();
    audit_cmd->add_option("--r-max", r_max)->required();
    audit_cmd->add_flag("--json", json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "permlab: " << e.what() << "\n";
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    int code = 2;
    try {
        if (count_cmd->parsed())
            code = run_count(g, pattern, n, r);
        else if (table_cmd->parsed())
            code = run_table(g, pattern, n_max, r_max, format);
        else if (decompose_cmd->parsed())
            code = run_decompose(pattern);
        else if (check_cmd->parsed())
            code = run_check(pattern);
        else if (inject_cmd->parsed())
            code = run_inject(pattern, base, positions, json);
        else if (extract_cmd->parsed())
            code = run_extract(pattern, word, r, json);
        else if (swap_cmd->parsed())
            code = run_swap(pattern, perm, json);
        else if (verify_cmd->parsed())
            code = run_verify(g, mode, pattern, n, r, json, no_counts);
        else if (wilf_cmd->parsed())
            code = run_wilf(g, length, n_max, r_max, json);
        else if (series_cmd->parsed())
            code = run_series(id, terms, linear_coef, format);
        else if (ratio_cmd->parsed())
            code = run_ratio(g, pattern, r, n_max, format);
        else if (audit_cmd->parsed())
            code = run_audit(g, pattern, n_max, r_max, json);
    } catch (const ProofGapError& e) {
        std::cout << ordered_json{{"schema", 1},
                                  {"proof_gap", e.check()},
                                  {"witness", e.witness()}}
                         .dump(2)
                  << "\n";
        code = 1;
    } catch (const std::exception& e) {
        std::cerr << "permlab: " << e.what() << "\n";
        code = 2;
    }

    if (g.timing) {
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
        std::cerr << "elapsed: " << elapsed.count() << " ms\n";
    }
    return code;
}
