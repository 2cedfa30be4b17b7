#include "permlab/inject.hpp"

#include <algorithm>
#include <map>

#include "permlab/occurrence.hpp"

namespace permlab {

ProofGapError::ProofGapError(std::string check, nlohmann::ordered_json witness)
    : std::runtime_error("proof-gap assertion failed: " + check),
      check_(std::move(check)),
      witness_(std::move(witness)) {}

bool occurrences_pairwise_disjoint(const OccurrenceSet& occ) {
    uint32_t seen = 0;
    for (const auto& tuple : occ.tuples) {
        uint32_t mask = 0;
        for (int pos : tuple) mask |= 1u << (pos - 1);
        if (mask & seen) return false;
        seen |= mask;
    }
    return true;
}

int BlockPlan::chunk_of_rank(int rank) const {
    for (int c = 0; c < chunk_count(); ++c) {
        const auto& [high, low] = value_ranges[static_cast<size_t>(c)];
        if (rank >= low && rank <= high) return c + 1;
    }
    throw std::out_of_range("rank " + std::to_string(rank) + " outside pattern");
}

BlockPlan block_plan(const Permutation& q) {
    const HypothesisReport hyp = check_hypotheses(q);
    if (!hyp.lower_bound_applies)
        throw HypothesisError("pattern " + to_string(q) +
                              " does not satisfy the lower-bound hypotheses");
    const auto& parts = hyp.skew_parts.parts;
    const int k = static_cast<int>(parts.size());
    const int m = q.size();

    BlockPlan plan;
    plan.pattern = q;
    if (k == 2) {
        // The two boundary clauses collide at k = 2; the only partition
        // with the right total is the whole pattern as one chunk.
        plan.chunk_sizes = {m};
    } else {
        plan.chunk_sizes.push_back(parts[0].size() + parts[1].size() - 1);
        for (int i = 2; i <= k - 2; ++i)
            plan.chunk_sizes.push_back(parts[static_cast<size_t>(i)].size());
        plan.chunk_sizes.push_back(parts[static_cast<size_t>(k - 1)].size() + 1);
    }

    int high = m;
    for (int b : plan.chunk_sizes) {
        plan.value_ranges.emplace_back(high, high - b + 1);
        high -= b;
    }
    if (high != 0) throw std::logic_error("block plan does not partition the pattern");
    return plan;
}

namespace {

// Partial skew sums q_1 - ... - q_i for i = 1 .. k-1.
std::vector<Permutation> skew_prefixes(const ComponentList& parts) {
    std::vector<Permutation> out;
    Permutation acc;
    for (size_t i = 0; i + 1 < parts.parts.size(); ++i) {
        acc = i == 0 ? parts.parts[0] : skew_sum(acc, parts.parts[i]);
        out.push_back(acc);
    }
    return out;
}

}  // namespace

AnchorVector anchors(const Permutation& w, int position, const Permutation& q) {
    const ComponentList parts = skew_components(q);
    if (parts.count() < 2)
        throw HypothesisError("pattern " + to_string(q) + " is skew-indecomposable");
    if (position < 1 || position > w.size() + 1)
        throw std::invalid_argument("anchor position out of range");

    std::vector<int> prefix_positions;
    for (int i = 1; i < position; ++i) prefix_positions.push_back(i);
    std::vector<int> prefix_values;
    for (int i = 1; i < position; ++i) prefix_values.push_back(w.at(i));
    const Permutation prefix =
        prefix_values.empty() ? Permutation() : standardize(prefix_values);

    AnchorVector out;
    for (const Permutation& partial : skew_prefixes(parts)) {
        int best = 0;
        if (partial.size() <= prefix.size()) {
            for_each_occurrence(partial, prefix, [&](const std::vector<int>& tuple) {
                int min_val = w.size() + 1;
                for (int pos : tuple) min_val = std::min(min_val, w.at(pos));
                best = std::max(best, min_val);
                return true;
            });
        }
        out.values.push_back(best);
    }
    for (size_t i = 1; i < out.values.size(); ++i) {
        if (out.values[i - 1] < out.values[i])
            throw ProofGapError("anchor-monotonicity",
                                {{"w", to_string(w)},
                                 {"position", position},
                                 {"q", to_string(q)},
                                 {"anchors", out.values}});
    }
    return out;
}

Permutation inject_lower(const Permutation& q, const std::vector<int>& positions,
                         const Permutation& p) {
    const BlockPlan plan = block_plan(q);  // validates hypotheses
    const ComponentList parts = skew_components(q);
    const int m = q.size();
    const int ell = parts.parts[0].size();
    const int r = static_cast<int>(positions.size());

    if (r < 1) throw std::invalid_argument("inject_lower: need at least one position");
    std::vector<int> sorted = positions;
    std::sort(sorted.begin(), sorted.end());
    for (int j = 0; j < r; ++j) {
        if (sorted[static_cast<size_t>(j)] < 1 || sorted[static_cast<size_t>(j)] > p.size() + 1)
            throw std::invalid_argument("inject_lower: position out of range");
        if (j > 0 && sorted[static_cast<size_t>(j)] == sorted[static_cast<size_t>(j - 1)])
            throw std::invalid_argument("inject_lower: positions must be distinct");
    }
    if (contains(q, p))
        throw std::invalid_argument("inject_lower: base permutation must avoid the pattern");

    Permutation w = direct_sum(parts.parts[0], p);
    for (int j = 0; j < r; ++j) {
        const int insertion_point = sorted[static_cast<size_t>(j)] + ell + j * m;
        const AnchorVector av = anchors(w, insertion_point, q);
        std::vector<BigRat> keys;
        keys.reserve(static_cast<size_t>(m));
        for (int t = 1; t <= m; ++t) {
            const int rank = q.at(t);
            const int chunk = plan.chunk_of_rank(rank);
            keys.push_back(BigRat(av.values[static_cast<size_t>(chunk - 1)]) +
                           BigRat(rank, m + 1));
        }
        w = insert_block(w, insertion_point, keys);
    }

    const int found = count_occurrences(q, w, r);
    if (found != r)
        throw ProofGapError("insertion-occurrence-count",
                            {{"q", to_string(q)},
                             {"p", to_string(p)},
                             {"positions", sorted},
                             {"result", to_string(w)},
                             {"expected", r},
                             {"found", count_occurrences(q, w)}});
    return w;
}

Extraction extract_lower(const Permutation& q, const Permutation& w, int r) {
    const HypothesisReport hyp = check_hypotheses(q);
    if (!hyp.lower_bound_applies)
        throw HypothesisError("pattern " + to_string(q) +
                              " does not satisfy the lower-bound hypotheses");
    if (r < 1) throw std::invalid_argument("extract_lower: r must be positive");
    const int m = q.size();
    const int ell = hyp.skew_parts.parts[0].size();
    const int base_len = w.size() - r * m - ell;
    if (base_len < 0) throw ExtractionError("permutation too short for r copies");

    const OccurrenceSet occ = occurrences(q, w);
    if (occ.count() != r)
        throw ExtractionError("expected exactly " + std::to_string(r) + " occurrences, found " +
                              std::to_string(occ.count()));

    std::vector<int> starts;
    for (const auto& tuple : occ.tuples) {
        for (size_t t = 1; t < tuple.size(); ++t)
            if (tuple[t] != tuple[t - 1] + 1)
                throw ExtractionError("occurrence is not a consecutive block");
        starts.push_back(tuple.front());
    }
    std::sort(starts.begin(), starts.end());
    for (size_t j = 1; j < starts.size(); ++j)
        if (starts[j] < starts[j - 1] + m) throw ExtractionError("occurrence blocks overlap");

    std::vector<int> recovered;
    for (int j = 0; j < r; ++j) {
        const int s = starts[static_cast<size_t>(j)] - j * m - ell;
        if (s < 1 || s > base_len + 1) throw ExtractionError("recovered position out of range");
        if (j > 0 && s <= recovered.back()) throw ExtractionError("recovered positions not increasing");
        recovered.push_back(s);
    }

    std::vector<char> removed(static_cast<size_t>(w.size()) + 1, 0);
    for (const auto& tuple : occ.tuples)
        for (int pos : tuple) removed[static_cast<size_t>(pos)] = 1;
    std::vector<int> remaining;
    for (int i = 1; i <= w.size(); ++i)
        if (!removed[static_cast<size_t>(i)]) remaining.push_back(w.at(i));
    const Permutation stripped = standardize(remaining);

    // The residue must be q_1 + p: leading q_1 on the lowest values.
    const Permutation& q1 = hyp.skew_parts.parts[0];
    std::vector<int> head(stripped.entries().begin(), stripped.entries().begin() + ell);
    for (int v : head)
        if (v > ell) throw ExtractionError("leading block does not hold the lowest values");
    if (standardize(head) != q1) throw ExtractionError("leading block is not q_1");

    std::vector<int> tail;
    for (size_t i = static_cast<size_t>(ell); i < stripped.entries().size(); ++i)
        tail.push_back(stripped.entries()[i] - ell);
    Permutation base(std::move(tail));
    if (contains(q, base)) throw ExtractionError("recovered base does not avoid the pattern");

    return Extraction{std::move(recovered), std::move(base)};
}

namespace {

// p with the values at two positions exchanged.
Permutation swap_entries(const Permutation& p, int a, int b) {
    std::vector<int> vals = p.entries();
    std::swap(vals[static_cast<size_t>(a - 1)], vals[static_cast<size_t>(b - 1)]);
    return Permutation(std::move(vals));
}

// A swap of two value-consecutive entries changes only their mutual order,
// so it can only add or remove occurrences using both. If both lie in a
// copy, that copy (and only it, by disjointness) is removed; whether the
// flipped pair completes any new copy is checked directly.
bool swap_is_clean(const Permutation& q, const OccurrenceSet& before, const Permutation& result,
                   int r) {
    const OccurrenceSet after = occurrences(q, result);
    if (after.count() != r - 1 || !occurrences_pairwise_disjoint(after)) return false;
    return std::includes(before.tuples.begin(), before.tuples.end(), after.tuples.begin(),
                         after.tuples.end());
}

}  // namespace

SwapResult swap_upper(const Permutation& q, const Permutation& p) {
    const HypothesisReport hyp = check_hypotheses(q);
    if (!hyp.upper_bound_applies)
        throw HypothesisError("pattern " + to_string(q) +
                              " does not satisfy the upper-bound hypotheses");
    const OccurrenceSet occ = occurrences(q, p);
    const int r = occ.count();
    if (r < 1) throw std::invalid_argument("swap_upper: permutation avoids the pattern");
    if (!occurrences_pairwise_disjoint(occ))
        throw std::invalid_argument("swap_upper: occurrences intersect (not in S*)");

    std::vector<int> position_of(static_cast<size_t>(p.size()) + 2, 0);
    for (int i = 1; i <= p.size(); ++i) position_of[static_cast<size_t>(p.at(i))] = i;

    if (q.size() == 2) {
        // Lemma base case: the inversion whose larger entry is leftmost.
        // Disjointness forces it onto consecutive positions and values.
        const auto& tuple = occ.tuples.front();
        const int i = tuple[0], j = tuple[1];
        if (j != i + 1 || p.at(i) != p.at(j) + 1)
            throw ProofGapError("base-case-adjacency",
                                {{"p", to_string(p)}, {"i", i}, {"j", j}});
        Permutation result = swap_entries(p, i, j);
        if (!swap_is_clean(q, occ, result, r))
            throw ProofGapError("base-case-image",
                                {{"p", to_string(p)}, {"result", to_string(result)}});
        return SwapResult{i, j, std::move(result)};
    }

    // A removing swap must flip a relation inside the copy it removes, so
    // both swapped entries lie in one copy; by disjointness no other copy
    // flips. Value-consecutive pairs are preferred: such a swap changes
    // only the pair's mutual order, and (i, w) inverts by re-swapping w(i)
    // with the entry of value w(i) + 1. Wider pairs are a fallback, tried
    // narrowest first; every candidate is accepted only if the occurrence
    // set shrinks by exactly the removed copy. Copies are tried leftmost
    // first, pairs by (value distance, higher value).
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& tuple : occ.tuples) {
            std::vector<int> values;
            for (int pos : tuple) values.push_back(p.at(pos));
            std::sort(values.begin(), values.end(), std::greater<int>());
            std::vector<std::pair<int, int>> pairs;  // (distance, hi)
            for (size_t a = 0; a < values.size(); ++a)
                for (size_t b = a + 1; b < values.size(); ++b)
                    pairs.emplace_back(values[a] - values[b], values[a]);
            std::sort(pairs.begin(), pairs.end(),
                      [](const auto& x, const auto& y) {
                          return x.first != y.first ? x.first < y.first : x.second > y.second;
                      });
            for (const auto& [dist, hi] : pairs) {
                if (pass == 0 && dist != 1) continue;
                if (pass == 1 && dist == 1) continue;
                const int pos_hi = position_of[static_cast<size_t>(hi)];
                const int pos_lo = position_of[static_cast<size_t>(hi - dist)];
                Permutation result = swap_entries(p, pos_hi, pos_lo);
                if (!swap_is_clean(q, occ, result, r)) continue;
                return SwapResult{pos_hi, pos_lo, std::move(result)};
            }
        }
    }

    throw ProofGapError("no-removing-swap",
                        {{"q", to_string(q)},
                         {"p", to_string(p)},
                         {"r", r}});
}

Reduction reduce_intersecting(const Permutation& q, const Permutation& p) {
    const OccurrenceSet occ = occurrences(q, p);
    const int r = occ.count();
    std::vector<int> membership(static_cast<size_t>(p.size()) + 1, 0);
    for (const auto& tuple : occ.tuples)
        for (int pos : tuple) ++membership[static_cast<size_t>(pos)];
    int shared = 0;
    for (int i = 1; i <= p.size(); ++i)
        if (membership[static_cast<size_t>(i)] >= 2) {
            shared = i;
            break;
        }
    if (shared == 0)
        throw std::invalid_argument("reduce_intersecting: no entry lies in two occurrences");

    Reduction red;
    red.position = shared;
    red.value = p.at(shared);
    red.result = delete_entry(p, shared);

    const int after = count_occurrences(q, red.result, r - 2);
    if (after > r - 2)
        throw ProofGapError("reduction-occurrence-count",
                            {{"q", to_string(q)},
                             {"p", to_string(p)},
                             {"position", shared},
                             {"result", to_string(red.result)},
                             {"bound", r - 2},
                             {"found", count_occurrences(q, red.result)}});
    return red;
}

bool VerificationReport::passed() const {
    if (!counterexamples.empty()) return false;
    if (!(injective && image_in_codomain && no_new_occurrences && round_trip_ok)) return false;
    if (inequality && !inequality->holds) return false;
    return true;
}

namespace {

void add_counterexample(VerificationReport& report, const VerifyOptions& opts, std::string kind,
                        nlohmann::ordered_json witness) {
    if (report.counterexamples.size() < opts.max_counterexamples)
        report.counterexamples.push_back({std::move(kind), std::move(witness)});
}

// All r-subsets of {1..limit} in lexicographic order.
bool next_combination(std::vector<int>& comb, int limit) {
    const int r = static_cast<int>(comb.size());
    for (int i = r - 1; i >= 0; --i) {
        if (comb[static_cast<size_t>(i)] < limit - (r - 1 - i)) {
            ++comb[static_cast<size_t>(i)];
            for (int j = i + 1; j < r; ++j)
                comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

VerificationReport verify_lower(const Permutation& q, int n, int r, CountingContext& ctx,
                                const VerifyOptions& opts) {
    const HypothesisReport hyp = check_hypotheses(q);
    if (!hyp.lower_bound_applies)
        throw HypothesisError("pattern " + to_string(q) +
                              " does not satisfy the lower-bound hypotheses");
    if (r < 1) throw std::invalid_argument("verify_lower: r must be positive");
    const int m = q.size();
    const int ell = hyp.skew_parts.parts[0].size();
    const int base_len = n - r * m - ell;
    if (base_len < 0)
        throw std::invalid_argument("verify_lower: n must be at least rm + l = " +
                                    std::to_string(r * m + ell));

    VerificationReport report;
    report.pattern = q;
    report.n = n;
    report.r = r;

    const std::vector<Permutation> bases = members(q, base_len, 0, ctx.options());
    report.domain_size = binomial(base_len + 1, r) * static_cast<int>(bases.size());

    std::map<Permutation, std::pair<std::vector<int>, Permutation>> seen;
    if (base_len + 1 >= r) {
        std::vector<int> comb(static_cast<size_t>(r));
        for (int i = 0; i < r; ++i) comb[static_cast<size_t>(i)] = i + 1;
        do {
            for (const Permutation& base : bases) {
                Permutation image;
                try {
                    image = inject_lower(q, comb, base);
                } catch (const ProofGapError& e) {
                    report.image_in_codomain = false;
                    add_counterexample(report, opts, e.check(), e.witness());
                    continue;
                }
                try {
                    const Extraction ext = extract_lower(q, image, r);
                    if (ext.positions != comb || !(ext.base == base)) {
                        report.round_trip_ok = false;
                        add_counterexample(report, opts, "round-trip-mismatch",
                                           {{"positions", comb},
                                            {"base", to_string(base)},
                                            {"image", to_string(image)},
                                            {"recovered_positions", ext.positions},
                                            {"recovered_base", to_string(ext.base)}});
                    }
                } catch (const ExtractionError& e) {
                    report.round_trip_ok = false;
                    add_counterexample(report, opts, "round-trip-error",
                                       {{"positions", comb},
                                        {"base", to_string(base)},
                                        {"image", to_string(image)},
                                        {"error", e.what()}});
                }
                auto [it, inserted] = seen.try_emplace(image, comb, base);
                if (!inserted) {
                    report.injective = false;
                    add_counterexample(report, opts, "collision",
                                       {{"image", to_string(image)},
                                        {"first_positions", it->second.first},
                                        {"first_base", to_string(it->second.second)},
                                        {"second_positions", comb},
                                        {"second_base", to_string(base)}});
                }
            }
        } while (next_combination(comb, base_len + 1));
    }

    if (opts.with_counts) {
        ExactInequality ineq;
        ineq.description = "|S_{n,r}(q)| >= C(n-rm-l+1, r) |S_{n-rm-l}(q)|";
        ineq.lhs = ctx.count(q, n, r);
        ineq.rhs = binomial(base_len + 1, r) * ctx.avoiders(q, base_len);
        ineq.lhs_at_least_rhs = true;
        ineq.holds = ineq.lhs >= ineq.rhs;
        report.inequality = ineq;
    }
    return report;
}

VerificationReport verify_upper(const Permutation& q, int n, int r, CountingContext& ctx,
                                const VerifyOptions& opts) {
    const HypothesisReport hyp = check_hypotheses(q);
    if (!hyp.upper_bound_applies)
        throw HypothesisError("pattern " + to_string(q) +
                              " does not satisfy the upper-bound hypotheses");
    if (r < 1) throw std::invalid_argument("verify_upper: r must be positive");

    VerificationReport report;
    report.pattern = q;
    report.n = n;
    report.r = r;

    std::vector<Permutation> domain;
    for (const Permutation& p : members(q, n, r, ctx.options()))
        if (occurrences_pairwise_disjoint(occurrences(q, p))) domain.push_back(p);
    report.domain_size = static_cast<int>(domain.size());

    std::map<std::pair<int, Permutation>, Permutation> seen;
    for (const Permutation& p : domain) {
        SwapResult swapped;
        try {
            swapped = swap_upper(q, p);
        } catch (const ProofGapError& e) {
            if (e.check() == "occurrence-subset")
                report.no_new_occurrences = false;
            else
                report.image_in_codomain = false;
            add_counterexample(report, opts, e.check(), e.witness());
            continue;
        }

        const OccurrenceSet occ_before = occurrences(q, p);
        const OccurrenceSet occ_after = occurrences(q, swapped.result);
        if (occ_after.count() != r - 1 || !occurrences_pairwise_disjoint(occ_after)) {
            report.image_in_codomain = false;
            add_counterexample(report, opts, "image-not-in-codomain",
                               {{"p", to_string(p)}, {"result", to_string(swapped.result)}});
        }
        if (!std::includes(occ_before.tuples.begin(), occ_before.tuples.end(),
                           occ_after.tuples.begin(), occ_after.tuples.end())) {
            report.no_new_occurrences = false;
            add_counterexample(report, opts, "new-occurrence",
                               {{"p", to_string(p)}, {"result", to_string(swapped.result)}});
        }

        auto [it, inserted] =
            seen.try_emplace({swapped.position, swapped.result}, p);
        if (!inserted) {
            report.injective = false;
            add_counterexample(report, opts, "collision",
                               {{"position", swapped.position},
                                {"image", to_string(swapped.result)},
                                {"first", to_string(it->second)},
                                {"second", to_string(p)}});
        }
    }

    if (opts.with_counts) {
        ExactInequality ineq;
        ineq.description = "|S*_{n,r}(q)| <= n |S*_{n,r-1}(q)|";
        ineq.lhs = report.domain_size;
        ineq.rhs = BigInt(n) * ctx.refined(q, n, r - 1).star;
        ineq.lhs_at_least_rhs = false;
        ineq.holds = ineq.lhs <= ineq.rhs;
        report.inequality = ineq;
    }
    return report;
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["pattern"] = to_string(report.pattern);
    doc["n"] = report.n;
    doc["r"] = report.r;
    doc["domain_size"] = report.domain_size.str();
    doc["injective"] = report.injective;
    doc["image_in_codomain"] = report.image_in_codomain;
    doc["no_new_occurrences"] = report.no_new_occurrences;
    doc["round_trip_ok"] = report.round_trip_ok;
    if (report.inequality) {
        doc["inequality"] = {{"description", report.inequality->description},
                             {"lhs", report.inequality->lhs.str()},
                             {"rhs", report.inequality->rhs.str()},
                             {"holds", report.inequality->holds}};
    }
    doc["passed"] = report.passed();
    doc["counterexamples"] = nlohmann::ordered_json::array();
    for (const auto& ce : report.counterexamples)
        doc["counterexamples"].push_back({{"kind", ce.kind}, {"witness", ce.witness}});
    return doc;
}

}  // namespace permlab
