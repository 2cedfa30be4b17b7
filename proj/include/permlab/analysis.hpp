#pragma once

#include <string>
#include <vector>

#include "permlab/enumerate.hpp"
#include "permlab/numeric.hpp"
#include "permlab/permutation.hpp"

namespace permlab {

enum class ClosedFormKind { catalan, noonan321, bona231 };

// catalan: C(2n,n)/(n+1); noonan321: (3/n) C(2n, n+3); bona231: C(2n-3, n-3).
// Exact divisions are checked and throw on a remainder.
BigInt closed_form(ClosedFormKind kind, int n);

// Exact rational coefficients, index 0..N.
struct SeriesExpansion {
    std::vector<BigRat> coefficients;
};

// Expands 32z / (-8z^2 + c z + 1 - (1-8z)^{3/2}) to order `terms` with
// exact rational arithmetic. The printed linear coefficient is a
// parameter: see resolved_1342_linear_coefficient.
SeriesExpansion series_1342(int terms, const BigRat& linear_coefficient);

inline BigRat printed_1342_linear_coefficient() { return BigRat(12); }

// The unique linear coefficient making the constant term equal 1 (the
// empty permutation avoids everything); derived, not hardcoded.
BigRat resolved_1342_linear_coefficient();

// Finite-n diagnostic for |S_n(k...1)| ~ C_k (k-1)^{2n} / n^{(k^2-2k)/2}.
// For odd k the exponent is half-integral, so the squared form
// |S_n|^2 n^{k^2-2k} / (k-1)^{4n} is reported to stay rational.
struct RegevTable {
    int k = 0;
    bool squared = false;
    std::vector<std::pair<int, BigRat>> rows;  // (n, ratio)
};

RegevTable regev_ratio(int k, int n_max, CountingContext& ctx);

// rho_{n,r} = |S_{n,r}(q)| / (n^r |S_n(q)|) as exact rationals, with the
// min and max over the range as finite-n stand-ins for the sandwich
// constants. Diagnostic only; nothing asymptotic is asserted.
struct RatioTable {
    Permutation pattern;
    int r = 0;
    std::vector<std::pair<int, BigRat>> rows;
    BigRat min = 0;
    BigRat max = 0;
};

RatioTable ratio_table(const Permutation& q, int r, int n_max, CountingContext& ctx);

// Patterns grouped by identical count signatures over the grid
// {n <= n_max} x {r <= r_max plus overflow}.
struct WilfPartition {
    int length = 0;
    int n_max = 0;
    int r_max = 0;
    std::vector<std::vector<Permutation>> blocks;
};

WilfPartition wilf_partition(int length, int n_max, int r_max, CountingContext& ctx);

struct AuditLine {
    std::string family;  // "lower", "upper", "intersecting"
    int n = 0;
    int r = 0;
    BigInt lhs = 0;
    BigInt rhs = 0;
    bool lhs_at_least_rhs = false;
    bool holds = false;
};

// Exact checks of the three inequality families at every computable grid
// point; any failure is a counterexample to the paper.
struct InequalityAudit {
    Permutation pattern;
    int n_max = 0;
    int r_max = 0;
    bool lower_family_checked = false;
    bool upper_family_checked = false;
    std::vector<AuditLine> lines;
    bool all_hold = true;
};

InequalityAudit inequality_audit(const Permutation& q, int n_max, int r_max,
                                 CountingContext& ctx);

}  // namespace permlab
