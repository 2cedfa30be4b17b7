#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "permlab/numeric.hpp"
#include "permlab/permutation.hpp"

namespace permlab {

struct EnumOptions {
    int threads = 0;  // 0 = hardware concurrency
    uint64_t node_budget = 10'000'000'000ULL;
};

class BudgetExceededError : public std::runtime_error {
public:
    explicit BudgetExceededError(uint64_t budget)
        : std::runtime_error("enumeration node budget exceeded (" + std::to_string(budget) +
                             " extension steps); raise --budget to continue") {}
};

// Exact histogram of occurrence counts over all n! permutations. When
// r_cap is set, counts above it are pooled into `overflow` and the search
// prunes as soon as a prefix exceeds the cap.
struct Distribution {
    Permutation pattern;
    int n = 0;
    std::optional<int> r_cap;
    std::vector<BigInt> buckets;
    BigInt overflow = 0;

    BigInt at(int r) const;
    BigInt total() const;
};

Distribution occurrence_distribution(const Permutation& q, int n,
                                     std::optional<int> r_cap = std::nullopt,
                                     const EnumOptions& opts = {});

// |S_n(q)|: the r = 0 bucket with aggressive pruning.
BigInt count_avoiders(const Permutation& q, int n, const EnumOptions& opts = {});

// Partition of S_{n,r}(q) by whether the r occurrences are pairwise
// entry-disjoint.
struct RefinedCounts {
    BigInt star = 0;
    BigInt intersecting = 0;
};

RefinedCounts refined_counts(const Permutation& q, int n, int r, const EnumOptions& opts = {});

// One sweep computing refined counts for every r <= r_max.
std::vector<RefinedCounts> refined_rows(const Permutation& q, int n, int r_max,
                                        const EnumOptions& opts = {});

// The elements of S_{n,r}(q) in lexicographic order.
std::vector<Permutation> members(const Permutation& q, int n, int r,
                                 const EnumOptions& opts = {});

// One fully-enumerated length: counts for r = 0..cap plus a pooled
// overflow bucket. overflow is engaged (has_value) exactly when the row
// was computed under a cap; uncapped rows store the whole distribution
// with trailing zeros trimmed.
struct CountRow {
    int n = 0;
    std::vector<BigInt> counts;
    std::optional<BigInt> overflow;

    bool capped() const { return overflow.has_value(); }
    int cap() const { return static_cast<int>(counts.size()) - 1; }
    BigInt sum() const;
};

struct CountTable {
    Permutation pattern;
    std::map<int, CountRow> rows;

    const CountRow& row(int n) const;
    BigInt entry(int n, int r) const;
};

std::string to_csv(const CountTable& table);

// One JSONL document per pattern under the cache directory; lines look
// like {"q":"231","n":6,"r":1,"count":"84"} with r either an integer or
// "overflow". Counts are decimal strings. Writes go through a temp file
// and rename.
class CountCache {
public:
    explicit CountCache(std::filesystem::path dir);

    bool enabled() const { return !dir_.empty(); }
    std::filesystem::path file_for(const Permutation& q) const;

    // Corrupt or unreadable files are reported to stderr and treated as
    // empty so the caller recomputes.
    std::map<int, CountRow> load(const Permutation& q) const;
    void store(const Permutation& q, const std::map<int, CountRow>& rows) const;

private:
    std::filesystem::path dir_;
};

// Builds (and persists) rows for all n <= n_max at cap r_max. Cached rows
// that already answer the request are reused without enumeration work.
CountTable table_build(const Permutation& q, int n_max, int r_max,
                       const std::filesystem::path& cache_dir, const EnumOptions& opts = {});

// Memoizing facade over enumeration + cache; the analysis module and the
// injection verifiers pull every count through this.
class CountingContext {
public:
    explicit CountingContext(EnumOptions opts = {}, std::filesystem::path cache_dir = {});

    const EnumOptions& options() const { return opts_; }

    // |S_{n,r}(q)|; enumerates (capped at least at r) on a miss.
    BigInt count(const Permutation& q, int n, int r);
    BigInt avoiders(const Permutation& q, int n);
    RefinedCounts refined(const Permutation& q, int n, int r);

    // Ensure rows exist so later entry lookups do no enumeration work.
    void prefetch(const Permutation& q, int n, int r_cap);
    void prefetch_refined(const Permutation& q, int n, int r_cap);

    CountTable table(const Permutation& q, int n_max, int r_max);

private:
    CountRow& ensure_row_locked(const Permutation& q, int n, int min_cap);

    EnumOptions opts_;
    CountCache cache_;
    std::mutex mutex_;
    std::map<std::string, std::map<int, CountRow>> rows_;
    std::map<std::string, bool> cache_loaded_;
    std::map<std::string, std::pair<int, std::vector<RefinedCounts>>> refined_;  // key "q|n"
};

}  // namespace permlab
