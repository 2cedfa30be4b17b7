#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "permlab/decompose.hpp"
#include "permlab/enumerate.hpp"
#include "permlab/numeric.hpp"
#include "permlab/permutation.hpp"

namespace permlab {

// The pattern fails the structural hypotheses an operation requires.
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A runtime assertion inside an implemented proof construction failed.
// Carries a serializable witness; the verifiers collect these instead of
// aborting, since surfacing a potential gap in the argument is the point.
class ProofGapError : public std::runtime_error {
public:
    ProofGapError(std::string check, nlohmann::ordered_json witness);

    const std::string& check() const { return check_; }
    const nlohmann::ordered_json& witness() const { return witness_; }

private:
    std::string check_;
    nlohmann::ordered_json witness_;
};

// The permutation is not of the form the recovery map expects.
class ExtractionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Descending contiguous value chunks of q used by the lower-bound
// insertion: chunk 1 holds the top b_1 ranks, chunk j the next b_j below.
struct BlockPlan {
    Permutation pattern;
    std::vector<int> chunk_sizes;                      // b_1 .. b_{k-1}
    std::vector<std::pair<int, int>> value_ranges;     // {high, low} ranks per chunk

    int chunk_count() const { return static_cast<int>(chunk_sizes.size()); }
    int chunk_of_rank(int rank) const;                 // 1-based chunk index
};

BlockPlan block_plan(const Permutation& q);

// a_i = the largest entry of w that is the smallest entry of an occurrence
// of q_1 - ... - q_i lying entirely left of `position`; 0 when none exists.
struct AnchorVector {
    std::vector<int> values;
};

AnchorVector anchors(const Permutation& w, int position, const Permutation& q);

// The lower-bound insertion: plants one copy of q at each chosen position
// of q_1 + p, chunk values placed just above their anchors. The result has
// exactly r occurrences of q (runtime-asserted).
Permutation inject_lower(const Permutation& q, const std::vector<int>& positions,
                         const Permutation& p);

struct Extraction {
    std::vector<int> positions;
    Permutation base;
};

// Inverse of inject_lower on its image.
Extraction extract_lower(const Permutation& q, const Permutation& w, int r);

struct SwapResult {
    int position = 0;            // position of the entry whose value decreases
    int position_increased = 0;  // the other end of the swap
    Permutation result;
};

// The upper-bound map: swaps two entries of p in S*_{n,r}(q), removing one
// occurrence and creating none (runtime-asserted).
SwapResult swap_upper(const Permutation& q, const Permutation& p);

struct Reduction {
    int position = 0;
    int value = 0;
    Permutation result;
};

// Deletes the first entry shared by two occurrences; the result has at
// most r-2 occurrences (runtime-asserted).
Reduction reduce_intersecting(const Permutation& q, const Permutation& p);

struct Counterexample {
    std::string kind;
    nlohmann::ordered_json witness;
};

struct ExactInequality {
    std::string description;
    BigInt lhs = 0;
    BigInt rhs = 0;
    bool lhs_at_least_rhs = false;  // direction of the claim
    bool holds = false;
};

struct VerificationReport {
    Permutation pattern;
    int n = 0;
    int r = 0;
    BigInt domain_size = 0;
    bool injective = true;
    bool image_in_codomain = true;
    bool no_new_occurrences = true;  // swap map only
    bool round_trip_ok = true;       // insertion map only
    std::vector<Counterexample> counterexamples;
    std::optional<ExactInequality> inequality;

    bool passed() const;
};

struct VerifyOptions {
    bool with_counts = true;           // also evaluate the exact inequality
    size_t max_counterexamples = 25;   // collection cap; flags always reflect all failures
};

// Exhaustively drives inject_lower over I_{n-rm-l+1,r} x S_{n-rm-l}(q):
// pairwise distinctness, codomain membership, extract_lower round trip,
// and the exact inequality |S_{n,r}(q)| >= C(n-rm-l+1, r) |S_{n-rm-l}(q)|.
VerificationReport verify_lower(const Permutation& q, int n, int r, CountingContext& ctx,
                                const VerifyOptions& opts = {});

// Exhaustively drives swap_upper over S*_{n,r}(q): distinct outputs,
// codomain membership, occurrence-set monotonicity, and the exact
// inequality |S*_{n,r}(q)| <= n |S*_{n,r-1}(q)|.
VerificationReport verify_upper(const Permutation& q, int n, int r, CountingContext& ctx,
                                const VerifyOptions& opts = {});

bool occurrences_pairwise_disjoint(const OccurrenceSet& occ);

nlohmann::ordered_json to_json(const VerificationReport& report);

}  // namespace permlab
