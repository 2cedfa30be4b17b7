#pragma once

#include <vector>

#include "permlab/permutation.hpp"

namespace permlab {

// Maximal decomposition under one sum mode; parts are indecomposable under
// that mode and composing them reproduces the original.
struct ComponentList {
    SumMode mode = SumMode::direct_sum;
    std::vector<Permutation> parts;

    int count() const { return static_cast<int>(parts.size()); }
};

// Structural facts about a pattern gating the two injections.
struct HypothesisReport {
    Permutation pattern;
    bool is_indecomposable = false;
    bool is_skew_decomposable = false;
    ComponentList skew_parts;
    bool middle_parts_not_one = false;
    bool is_separable = false;
    bool lower_bound_applies = false;
    bool upper_bound_applies = false;
    bool thm41_applies = false;
};

// p = c_1 + ... + c_k with maximal (greedy shortest-prefix) splitting.
ComponentList sum_components(const Permutation& p);

// p = c_1 - ... - c_k, the skew analogue.
ComponentList skew_components(const Permutation& p);

// Reassemble a component list.
Permutation compose_components(const ComponentList& components);

// True iff p avoids both 2413 and 3142.
bool is_separable(const Permutation& p);

HypothesisReport check_hypotheses(const Permutation& q);

}  // namespace permlab
