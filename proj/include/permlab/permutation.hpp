#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "permlab/numeric.hpp"

namespace permlab {

// A permutation in one-line notation: entries are a rearrangement of
// {1, ..., n}. The empty permutation (n = 0) is a valid value. All
// positions in this library are 1-based.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> entries);

    static Permutation identity(int n);

    int size() const { return static_cast<int>(entries_.size()); }
    bool empty() const { return entries_.empty(); }

    // Value at 1-based position.
    int at(int position) const;

    const std::vector<int>& entries() const { return entries_; }

    bool operator==(const Permutation& other) const = default;
    auto operator<=>(const Permutation& other) const = default;

private:
    std::vector<int> entries_;
};

// Validated construction; rejects sequences that are not a rearrangement
// of 1..n.
Permutation make_permutation(const std::vector<int>& values);

// "4231" for n <= 9, "10,3,1,..." otherwise.
std::string to_string(const Permutation& p);

// Accepts both the comma-free digit form and the comma-separated form.
Permutation parse_permutation(const std::string& text);

std::ostream& operator<<(std::ostream& os, const Permutation& p);

// The set of index tuples (1-based, strictly increasing) at which a
// pattern of length pattern_length occurs in some host permutation.
struct OccurrenceSet {
    int pattern_length = 0;
    std::vector<std::vector<int>> tuples;  // lexicographically sorted

    int count() const { return static_cast<int>(tuples.size()); }
};

enum class Symmetry { reverse, complement, inverse, reverse_complement };

enum class SumMode { direct_sum, skew_sum };

// Pattern (standardization) of the subsequence of p selected by the
// strictly increasing 1-based positions.
Permutation flatten(const Permutation& p, const std::vector<int>& positions);

// Standardize arbitrary distinct values to a permutation of their ranks.
Permutation standardize(const std::vector<int>& values);

Permutation apply_symmetry(const Permutation& p, Symmetry s);

Permutation direct_sum(const Permutation& a, const Permutation& b);
Permutation skew_sum(const Permutation& a, const Permutation& b);
Permutation compose(const Permutation& a, const Permutation& b, SumMode mode);

// Inserts new entries at consecutive positions starting at `position`
// (1 <= position <= n+1). Keys are exact rationals, pairwise distinct and
// not equal to any existing integer value; old and new entries are
// re-ranked jointly by value.
Permutation insert_block(const Permutation& p, int position,
                         const std::vector<BigRat>& keys);

// Removes the entry at `position` and re-ranks the rest.
Permutation delete_entry(const Permutation& p, int position);

}  // namespace permlab
