#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "permlab/enumerate.hpp"

using namespace permlab;

namespace {

EnumOptions quiet_opts() {
    EnumOptions o;
    o.threads = 2;
    return o;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("permlab-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("distribution examples") {
    const Distribution d = occurrence_distribution(parse_permutation("231"), 3);
    CHECK(d.at(0) == 5);
    CHECK(d.at(1) == 1);
    CHECK(d.total() == 6);

    CHECK(occurrence_distribution(parse_permutation("321"), 5).at(1) == 27);
    CHECK(occurrence_distribution(parse_permutation("1342"), 6).at(0) == 512);
}

TEST_CASE("distribution matches the n!-scan oracle") {
    for (const char* qs : {"21", "231", "321", "3412", "1342", "2413"}) {
        const Permutation q = parse_permutation(qs);
        for (int n = 0; n <= 6; ++n) {
            const Distribution d = occurrence_distribution(q, n, std::nullopt, quiet_opts());
            const auto want = oracles::distribution(q, n);
            CHECK(d.total() == factorial(n));
            for (const auto& [r, c] : want) {
                if (d.at(r) != c)
                    FAIL("bucket mismatch q=", qs, " n=", n, " r=", r);
            }
        }
    }
}

TEST_CASE("capped distribution pools overflow exactly") {
    const Permutation q = parse_permutation("21");
    const Distribution full = occurrence_distribution(q, 6);
    const Distribution capped = occurrence_distribution(q, 6, 2);
    CHECK(capped.at(0) == full.at(0));
    CHECK(capped.at(1) == full.at(1));
    CHECK(capped.at(2) == full.at(2));
    BigInt tail = 0;
    for (int r = 3; r < static_cast<int>(full.buckets.size()); ++r) tail += full.at(r);
    CHECK(capped.overflow == tail);
    CHECK_THROWS_AS((void)capped.at(3), std::out_of_range);
}

TEST_CASE("avoider counts") {
    CHECK(count_avoiders(parse_permutation("231"), 4) == 14);
    CHECK(count_avoiders(parse_permutation("3412"), 4) == 23);
    // Pruned avoider search vs the r = 0 bucket of the full distribution.
    for (const char* qs : {"231", "3412"}) {
        const Permutation q = parse_permutation(qs);
        for (int n = 0; n <= 8; ++n)
            CHECK(count_avoiders(q, n) == occurrence_distribution(q, n).at(0));
    }
}

TEST_CASE("symmetry-conjugate patterns have identical tables (n <= 7)") {
    const Distribution base = occurrence_distribution(parse_permutation("231"), 7);
    for (const char* qs : {"132", "312", "213"}) {
        const Distribution other = occurrence_distribution(parse_permutation(qs), 7);
        CHECK(base.buckets == other.buckets);
    }
}

TEST_CASE("parallel and sequential enumeration agree") {
    EnumOptions seq;
    seq.threads = 1;
    EnumOptions par;
    par.threads = 4;
    for (const char* qs : {"321", "1342"}) {
        const Permutation q = parse_permutation(qs);
        const Distribution a = occurrence_distribution(q, 8, 3, seq);
        const Distribution b = occurrence_distribution(q, 8, 3, par);
        CHECK(a.buckets == b.buckets);
        CHECK(a.overflow == b.overflow);
    }
}

TEST_CASE("refined counts") {
    const RefinedCounts a = refined_counts(parse_permutation("21"), 3, 1);
    CHECK(a.star == 2);
    CHECK(a.intersecting == 0);
    const RefinedCounts b = refined_counts(parse_permutation("21"), 3, 2);
    CHECK(b.star == 0);
    CHECK(b.intersecting == 2);
    const RefinedCounts c = refined_counts(parse_permutation("231"), 6, 1, quiet_opts());
    CHECK(c.star == 84);
    CHECK(c.intersecting == 0);

    // star + intersecting = |S_{n,r}|, and r = 1 is always star (n <= 6).
    for (const char* qs : {"21", "231", "3412"}) {
        const Permutation q = parse_permutation(qs);
        for (int n = 1; n <= 6; ++n) {
            const auto rows = refined_rows(q, n, 2);
            const Distribution d = occurrence_distribution(q, n, 2);
            for (int r = 0; r <= 2; ++r)
                CHECK(rows[static_cast<size_t>(r)].star + rows[static_cast<size_t>(r)].intersecting ==
                      d.at(r));
            CHECK(rows[1].intersecting == 0);
        }
    }
}

TEST_CASE("members streams S_{n,r}(q) in lexicographic order") {
    CHECK(members(parse_permutation("231"), 3, 1) ==
          std::vector<Permutation>{parse_permutation("231")});
    CHECK(members(parse_permutation("21"), 3, 0) ==
          std::vector<Permutation>{parse_permutation("123")});
    CHECK(members(parse_permutation("231"), 5, 1).size() == 21);
    const auto mem = members(parse_permutation("321"), 5, 2);
    CHECK(std::is_sorted(mem.begin(), mem.end()));
    for (const auto& p : mem) CHECK(oracles::occurrence_count(parse_permutation("321"), p) == 2);
}

TEST_CASE("node budget aborts cleanly") {
    EnumOptions opts;
    opts.node_budget = 10;
    opts.threads = 1;
    CHECK_THROWS_AS(occurrence_distribution(parse_permutation("231"), 8, std::nullopt, opts),
                    BudgetExceededError);
}

TEST_CASE("desk-scale guard") {
    CHECK_THROWS_AS(occurrence_distribution(parse_permutation("21"), 21), std::invalid_argument);
}

TEST_CASE("cache stores and reloads rows") {
    TempDir tmp;
    const Permutation q = parse_permutation("231");
    const CountTable table = table_build(q, 6, 3, tmp.path);
    CHECK(table.entry(6, 0) == 132);
    CHECK(table.entry(6, 1) == 84);
    CHECK(table.row(6).sum() == factorial(6));

    // Warm rebuild must do zero enumeration work: a one-node budget only
    // succeeds if every row comes from the cache.
    EnumOptions strangled;
    strangled.node_budget = 1;
    const CountTable again = table_build(q, 6, 3, tmp.path, strangled);
    CHECK(again.entry(6, 1) == 84);

    // A larger r_max than the cached cap forces recomputation.
    const CountTable wider = table_build(q, 6, 5, tmp.path);
    CHECK(wider.entry(6, 1) == 84);
}

TEST_CASE("corrupt cache is reported and recomputed") {
    TempDir tmp;
    const Permutation q = parse_permutation("21");
    table_build(q, 4, 2, tmp.path);
    {
        std::ofstream f(CountCache(tmp.path).file_for(q), std::ios::trunc);
        f << "{this is not json\n";
    }
    const CountTable table = table_build(q, 4, 2, tmp.path);
    CHECK(table.entry(4, 0) == 1);
    CHECK(table.row(4).sum() == 24);
}

TEST_CASE("counting context memoizes and serves refined counts") {
    TempDir tmp;
    CountingContext ctx(quiet_opts(), tmp.path);
    CHECK(ctx.count(parse_permutation("231"), 6, 1) == 84);
    CHECK(ctx.avoiders(parse_permutation("231"), 6) == 132);
    CHECK(ctx.refined(parse_permutation("231"), 6, 1).star == 84);
    // Served from cache through a fresh context with no budget.
    EnumOptions strangled;
    strangled.node_budget = 1;
    CountingContext cold(strangled, tmp.path);
    CHECK(cold.count(parse_permutation("231"), 6, 1) == 84);
}

TEST_CASE("csv export") {
    TempDir tmp;
    const CountTable table = table_build(parse_permutation("21"), 3, 1, tmp.path);
    const std::string csv = to_csv(table);
    CHECK(csv.find("n,r,count\n") == 0);
    CHECK(csv.find("3,0,1\n") != std::string::npos);
    CHECK(csv.find("3,1,2\n") != std::string::npos);
    CHECK(csv.find("3,overflow,3\n") != std::string::npos);
}
