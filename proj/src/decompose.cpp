#include "permlab/decompose.hpp"

#include <algorithm>
#include <stdexcept>

#include "permlab/occurrence.hpp"

namespace permlab {

namespace {

// Splits after every prefix that forms a complete value block; `top` picks
// between {1..j} prefixes (direct) and top-value prefixes (skew).
ComponentList split_components(const Permutation& p, SumMode mode) {
    if (p.empty()) throw std::invalid_argument("components of the empty permutation");
    const int n = p.size();
    ComponentList out;
    out.mode = mode;
    int start = 1;
    int lo = n + 1, hi = 0;
    for (int i = 1; i <= n; ++i) {
        lo = std::min(lo, p.at(i));
        hi = std::max(hi, p.at(i));
        const int span = i - start + 1;
        const bool complete = (mode == SumMode::direct_sum) ? (hi == i && hi - lo + 1 == span)
                                                            : (lo == n - i + 1 && hi - lo + 1 == span);
        if (complete) {
            std::vector<int> positions(static_cast<size_t>(span));
            for (int j = 0; j < span; ++j) positions[static_cast<size_t>(j)] = start + j;
            out.parts.push_back(flatten(p, positions));
            start = i + 1;
            lo = n + 1;
            hi = 0;
        }
    }
    return out;
}

}  // namespace

ComponentList sum_components(const Permutation& p) {
    return split_components(p, SumMode::direct_sum);
}

ComponentList skew_components(const Permutation& p) {
    return split_components(p, SumMode::skew_sum);
}

Permutation compose_components(const ComponentList& components) {
    if (components.parts.empty())
        throw std::invalid_argument("compose_components: no parts");
    Permutation acc = components.parts.front();
    for (size_t i = 1; i < components.parts.size(); ++i)
        acc = compose(acc, components.parts[i], components.mode);
    return acc;
}

bool is_separable(const Permutation& p) {
    static const Permutation bad1 = make_permutation({2, 4, 1, 3});
    static const Permutation bad2 = make_permutation({3, 1, 4, 2});
    return !contains(bad1, p) && !contains(bad2, p);
}

HypothesisReport check_hypotheses(const Permutation& q) {
    if (q.size() < 2)
        throw std::invalid_argument("check_hypotheses: pattern length must be at least 2");
    HypothesisReport r;
    r.pattern = q;
    r.is_indecomposable = sum_components(q).count() == 1;
    r.skew_parts = skew_components(q);
    const int k = r.skew_parts.count();
    r.is_skew_decomposable = k >= 2;
    r.middle_parts_not_one = true;
    for (int i = 1; i + 1 < k; ++i)
        if (r.skew_parts.parts[static_cast<size_t>(i)].size() == 1) r.middle_parts_not_one = false;
    r.is_separable = is_separable(q);
    // Skew-indecomposability of the parts is automatic from maximality.
    r.lower_bound_applies = r.is_indecomposable && r.is_skew_decomposable && r.middle_parts_not_one;
    r.upper_bound_applies = r.is_separable && r.is_skew_decomposable;
    r.thm41_applies = r.lower_bound_applies && r.upper_bound_applies;
    return r;
}

}  // namespace permlab
