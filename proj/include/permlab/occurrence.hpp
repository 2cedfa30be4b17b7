#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>

#include "permlab/kernels.hpp"
#include "permlab/permutation.hpp"

namespace permlab {

inline constexpr int kNoCap = std::numeric_limits<int>::max() - 1;

// All index tuples t with flatten(p, t) = q, in lexicographic order.
OccurrenceSet occurrences(const Permutation& q, const Permutation& p);

// Number of occurrences of q in p, early-exiting with cap + 1 as soon as
// the count exceeds cap.
int count_occurrences(const Permutation& q, const Permutation& p, int cap = kNoCap);

bool contains(const Permutation& q, const Permutation& p);

// Visits occurrence tuples in lexicographic order until fn returns false.
void for_each_occurrence(const Permutation& q, const Permutation& p,
                         const std::function<bool(const std::vector<int>&)>& fn);

// Occurrences of q whose last position is the new final position obtained
// by appending new_last_value to the prefix (existing values >= it shift
// up). Adding this to the prefix's total gives the extended total.
int occurrence_count_incremental(const Permutation& q, const Permutation& prefix,
                                 int new_last_value);

namespace detail {

// Prefix of a permutation under construction: values 1..len, stored as
// bytes padded with the kernel sentinel so interval counts can scan whole
// lanes. Desk-scale lengths only.
struct PrefixState {
    static constexpr int kMaxLen = 24;
    alignas(32) uint8_t vals[kMaxLen + kernels::kPad];
    int len = 0;

    PrefixState() { clear(); }

    void clear();

    // Appends relative value v (1 <= v <= len+1); existing values >= v
    // shift up by one.
    void push(int v);

    // Undoes the push of v.
    void pop(int v);
};

struct CompiledPattern {
    int m = 0;
    std::array<int8_t, 8> entry{};  // entry[i] = q_{i+1}

    bool less(int a, int b) const { return entry[static_cast<size_t>(a)] < entry[static_cast<size_t>(b)]; }
};

CompiledPattern compile_pattern(const Permutation& q);

// Occurrences of q ending exactly at the would-be last position if
// new_value were appended to st (st itself is left untouched). Early-exits
// with cap + 1 once the count exceeds cap.
int count_ending_at_last(const CompiledPattern& q, const PrefixState& st,
                         int new_value, int cap);

}  // namespace detail

}  // namespace permlab
