#pragma once

// Test-only oracles, deliberately naive and independent of the library's
// search paths: occurrence sets by scanning every index combination,
// distributions by iterating all n! permutations, separability by
// explicit separating-tree construction.

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "permlab/permutation.hpp"

namespace oracles {

inline bool next_combination(std::vector<int>& comb, int n) {
    const int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[static_cast<size_t>(i)] < n - (k - 1 - i)) {
            ++comb[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

inline std::vector<std::vector<int>> occurrence_tuples(const permlab::Permutation& q,
                                                       const permlab::Permutation& p) {
    std::vector<std::vector<int>> out;
    const int m = q.size(), n = p.size();
    if (m == 0 || m > n) return out;
    std::vector<int> comb(static_cast<size_t>(m));
    std::iota(comb.begin(), comb.end(), 1);
    do {
        if (permlab::flatten(p, comb) == q) out.push_back(comb);
    } while (next_combination(comb, n));
    return out;
}

inline int occurrence_count(const permlab::Permutation& q, const permlab::Permutation& p) {
    return static_cast<int>(occurrence_tuples(q, p).size());
}

inline bool tuples_pairwise_disjoint(const std::vector<std::vector<int>>& tuples) {
    for (size_t a = 0; a < tuples.size(); ++a)
        for (size_t b = a + 1; b < tuples.size(); ++b)
            for (int x : tuples[a])
                for (int y : tuples[b])
                    if (x == y) return false;
    return true;
}

// Visits all n! permutations of 1..n in lexicographic order.
template <class Fn>
void for_all_permutations(int n, Fn&& fn) {
    std::vector<int> vals(static_cast<size_t>(n));
    std::iota(vals.begin(), vals.end(), 1);
    do {
        fn(permlab::Permutation(vals));
    } while (std::next_permutation(vals.begin(), vals.end()));
}

inline std::map<int, long long> distribution(const permlab::Permutation& q, int n) {
    std::map<int, long long> hist;
    if (n == 0) {
        hist[0] = 1;
        return hist;
    }
    for_all_permutations(n, [&](const permlab::Permutation& p) { ++hist[occurrence_count(q, p)]; });
    return hist;
}

inline long long avoider_count(const permlab::Permutation& q, int n) {
    auto hist = distribution(q, n);
    return hist.count(0) ? hist[0] : 0;
}

// Separating-tree construction, self-contained: separable iff the
// permutation can be recursively cut into a direct or skew sum.
inline bool separable_by_tree(const std::vector<int>& vals) {
    const int n = static_cast<int>(vals.size());
    if (n <= 1) return true;
    auto standardized_slice = [&](int from, int to) {  // [from, to) 0-based
        std::vector<int> part(vals.begin() + from, vals.begin() + to);
        std::vector<int> sorted = part;
        std::sort(sorted.begin(), sorted.end());
        for (int& v : part)
            v = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) + 1;
        return part;
    };
    int lo = n + 1, hi = 0;
    for (int cut = 1; cut < n; ++cut) {
        lo = std::min(lo, vals[static_cast<size_t>(cut - 1)]);
        hi = std::max(hi, vals[static_cast<size_t>(cut - 1)]);
        const bool direct_cut = (hi == cut);
        const bool skew_cut = (lo == n - cut + 1);
        if ((direct_cut || skew_cut) && separable_by_tree(standardized_slice(0, cut)) &&
            separable_by_tree(standardized_slice(cut, n)))
            return true;
    }
    return false;
}

inline bool separable_by_tree(const permlab::Permutation& p) {
    return separable_by_tree(p.entries());
}

}  // namespace oracles
