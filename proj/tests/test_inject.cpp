#include <doctest.h>

#include "oracles.hpp"
#include "permlab/inject.hpp"
#include "permlab/occurrence.hpp"

using namespace permlab;

namespace {

CountingContext ephemeral_ctx() {
    EnumOptions opts;
    opts.threads = 2;
    return CountingContext(opts, {});
}

}  // namespace

TEST_CASE("block plans") {
    const BlockPlan single = block_plan(parse_permutation("231"));
    CHECK(single.chunk_sizes == std::vector<int>{3});
    CHECK(single.value_ranges == std::vector<std::pair<int, int>>{{3, 1}});

    const BlockPlan split = block_plan(parse_permutation("4231"));
    CHECK(split.chunk_sizes == std::vector<int>{2, 2});
    CHECK(split.value_ranges == std::vector<std::pair<int, int>>{{4, 3}, {2, 1}});
    CHECK(split.chunk_of_rank(4) == 1);
    CHECK(split.chunk_of_rank(2) == 2);

    CHECK(block_plan(parse_permutation("2341")).chunk_sizes == std::vector<int>{4});
    CHECK_THROWS_AS(block_plan(parse_permutation("4321")), HypothesisError);
    CHECK_THROWS_AS(block_plan(parse_permutation("4312")), HypothesisError);
}

TEST_CASE("anchors maximize occurrence minima") {
    CHECK(anchors(parse_permutation("123"), 3, parse_permutation("231")).values ==
          std::vector<int>{1});
    CHECK(anchors(parse_permutation("12"), 1, parse_permutation("231")).values ==
          std::vector<int>{0});

    // Oracle: brute-force all 12-occurrences of 153426 and take the max of
    // their minima; the occurrence (5,6) at positions (2,6) gives 5.
    const Permutation w = parse_permutation("153426");
    int best = 0;
    for (const auto& t : oracles::occurrence_tuples(parse_permutation("12"), w))
        best = std::max(best, std::min(w.at(t[0]), w.at(t[1])));
    CHECK(best == 5);
    CHECK(anchors(w, 7, parse_permutation("231")).values == std::vector<int>{best});
}

TEST_CASE("inject_lower worked examples") {
    const Permutation q = parse_permutation("231");
    CHECK(inject_lower(q, {1}, parse_permutation("1")) == parse_permutation("153426"));

    const Permutation other = inject_lower(q, {2}, parse_permutation("1"));
    CHECK(count_occurrences(q, other) == 1);
    CHECK(other != parse_permutation("153426"));

    CHECK(inject_lower(q, {1}, Permutation()) == parse_permutation("15342"));

    CHECK_THROWS_AS(inject_lower(q, {1}, parse_permutation("231")), std::invalid_argument);
    CHECK_THROWS_AS(inject_lower(q, {9}, parse_permutation("1")), std::invalid_argument);
    CHECK_THROWS_AS(inject_lower(parse_permutation("4321"), {1}, Permutation()), HypothesisError);
}

TEST_CASE("extract_lower inverts and rejects") {
    const Permutation q = parse_permutation("231");
    const Extraction ext = extract_lower(q, parse_permutation("153426"), 1);
    CHECK(ext.positions == std::vector<int>{1});
    CHECK(ext.base == parse_permutation("1"));

    CHECK_THROWS_AS(extract_lower(q, parse_permutation("123456"), 1), ExtractionError);
    CHECK_THROWS_AS(extract_lower(q, parse_permutation("1234"), 0), std::invalid_argument);
}

TEST_CASE("round trip over small domains") {
    for (const char* qs : {"231", "4123"}) {
        const Permutation q = parse_permutation(qs);
        const int m = q.size();
        const int ell = skew_components(q).parts[0].size();
        for (int base_len = 0; base_len <= 3; ++base_len) {
            std::vector<Permutation> bases;
            oracles::for_all_permutations(base_len, [&](const Permutation& p) {
                if (oracles::occurrence_count(q, p) == 0) bases.push_back(p);
            });
            for (int r = 1; r <= 2; ++r) {
                if (base_len + 1 < r) continue;
                std::vector<int> comb(static_cast<size_t>(r));
                std::iota(comb.begin(), comb.end(), 1);
                do {
                    for (const Permutation& p : bases) {
                        const Permutation w = inject_lower(q, comb, p);
                        const int n = base_len + r * m + ell;
                        if (w.size() != n) FAIL("length mismatch");
                        const Extraction ext = extract_lower(q, w, r);
                        if (ext.positions != comb || !(ext.base == p))
                            FAIL("round trip failed q=", qs, " p=", to_string(p));
                    }
                } while (oracles::next_combination(comb, base_len + 1));
            }
        }
    }
}

TEST_CASE("swap_upper worked examples") {
    const SwapResult a = swap_upper(parse_permutation("21"), parse_permutation("21"));
    CHECK(a.position == 1);
    CHECK(a.result == parse_permutation("12"));

    const SwapResult b = swap_upper(parse_permutation("21"), parse_permutation("2143"));
    CHECK(b.position == 1);
    CHECK(b.result == parse_permutation("1243"));
    CHECK(count_occurrences(parse_permutation("21"), b.result) == 1);

    const SwapResult c = swap_upper(parse_permutation("231"), parse_permutation("231"));
    CHECK(c.position == 2);
    CHECK(c.result == parse_permutation("321"));
    CHECK(count_occurrences(parse_permutation("231"), c.result) == 0);
}

TEST_CASE("swap_upper preconditions") {
    // 321 has three pairwise-intersecting inversions.
    CHECK_THROWS_AS(swap_upper(parse_permutation("21"), parse_permutation("321")),
                    std::invalid_argument);
    CHECK_THROWS_AS(swap_upper(parse_permutation("21"), parse_permutation("123")),
                    std::invalid_argument);
    CHECK_THROWS_AS(swap_upper(parse_permutation("3142"), parse_permutation("3142")),
                    HypothesisError);
    CHECK_THROWS_AS(swap_upper(parse_permutation("12"), parse_permutation("12")), HypothesisError);
}

TEST_CASE("swap_upper exhaustive small grids") {
    // Every S* member swaps cleanly: count drops by one, occurrence tuples
    // only disappear, and for q = 21 the chosen pair is adjacent in both
    // position and value (asserted inside, surfacing as ProofGapError).
    for (const char* qs : {"21", "231", "312", "3412"}) {
        const Permutation q = parse_permutation(qs);
        for (int n = q.size(); n <= 6; ++n) {
            oracles::for_all_permutations(n, [&](const Permutation& p) {
                const auto tuples = oracles::occurrence_tuples(q, p);
                if (tuples.empty() || !oracles::tuples_pairwise_disjoint(tuples)) return;
                const SwapResult res = swap_upper(q, p);
                if (oracles::occurrence_count(q, res.result) !=
                    static_cast<int>(tuples.size()) - 1)
                    FAIL("count did not drop for q=", qs, " p=", to_string(p));
            });
        }
    }
}

TEST_CASE("reduce_intersecting") {
    const Reduction red = reduce_intersecting(parse_permutation("21"), parse_permutation("321"));
    CHECK(red.position == 1);
    CHECK(red.value == 3);
    CHECK(red.result == parse_permutation("21"));

    CHECK_THROWS_AS(reduce_intersecting(parse_permutation("21"), parse_permutation("2143")),
                    std::invalid_argument);

    // Exhaustively at n = 5: deleting the first shared entry kills at
    // least two occurrences.
    const Permutation q = parse_permutation("231");
    oracles::for_all_permutations(5, [&](const Permutation& p) {
        const auto tuples = oracles::occurrence_tuples(q, p);
        if (oracles::tuples_pairwise_disjoint(tuples)) return;
        const Reduction r = reduce_intersecting(q, p);
        if (oracles::occurrence_count(q, r.result) > static_cast<int>(tuples.size()) - 2)
            FAIL("reduction bound violated for ", to_string(p));
    });
}

TEST_CASE("verify_lower small runs") {
    CountingContext ctx = ephemeral_ctx();
    const VerificationReport a = verify_lower(parse_permutation("231"), 6, 1, ctx);
    CHECK(a.passed());
    CHECK(a.domain_size == 2);
    REQUIRE(a.inequality.has_value());
    CHECK(a.inequality->lhs == 84);
    CHECK(a.inequality->rhs == 2);

    const VerificationReport b = verify_lower(parse_permutation("231"), 8, 1, ctx);
    CHECK(b.passed());
    CHECK(b.domain_size == 20);

    const VerificationReport c = verify_lower(parse_permutation("3412"), 9, 1, ctx);
    CHECK(c.passed());

    CHECK_THROWS_AS(verify_lower(parse_permutation("4321"), 8, 1, ctx), HypothesisError);
    CHECK_THROWS_AS(verify_lower(parse_permutation("231"), 4, 1, ctx), std::invalid_argument);
}

TEST_CASE("verify_upper small runs") {
    CountingContext ctx = ephemeral_ctx();
    const VerificationReport a = verify_upper(parse_permutation("21"), 4, 1, ctx);
    CHECK(a.passed());
    CHECK(a.domain_size == 3);
    REQUIRE(a.inequality.has_value());
    CHECK(a.inequality->lhs == 3);

    const VerificationReport b = verify_upper(parse_permutation("231"), 6, 1, ctx);
    CHECK(b.passed());

    const VerificationReport c = verify_upper(parse_permutation("3412"), 6, 2, ctx);
    CHECK(c.passed());

    CHECK_THROWS_AS(verify_upper(parse_permutation("3142"), 6, 1, ctx), HypothesisError);
}

TEST_CASE("proof gap errors carry their witness") {
    const ProofGapError e("example-check", {{"p", "231"}, {"detail", 7}});
    CHECK(e.check() == "example-check");
    CHECK(e.witness().at("detail").get<int>() == 7);
    CHECK(std::string(e.what()).find("example-check") != std::string::npos);
}

TEST_CASE("verification report serializes") {
    CountingContext ctx = ephemeral_ctx();
    const VerificationReport rep = verify_lower(parse_permutation("231"), 6, 1, ctx);
    const auto doc = to_json(rep);
    CHECK(doc.at("schema").get<int>() == 1);
    CHECK(doc.at("passed").get<bool>());
    CHECK(doc.at("domain_size").get<std::string>() == "2");
}
