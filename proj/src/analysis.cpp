#include "permlab/analysis.hpp"

#include <algorithm>
#include <map>

#include "permlab/decompose.hpp"

namespace permlab {

BigInt closed_form(ClosedFormKind kind, int n) {
    switch (kind) {
        case ClosedFormKind::catalan:
            if (n < 0) throw std::invalid_argument("catalan: n must be nonnegative");
            return exact_div(binomial(2LL * n, n), n + 1);
        case ClosedFormKind::noonan321:
            if (n < 1) throw std::invalid_argument("noonan321: n must be positive");
            return exact_div(3 * binomial(2LL * n, n + 3LL), n);
        case ClosedFormKind::bona231:
            if (n < 1) throw std::invalid_argument("bona231: n must be positive");
            return binomial(2LL * n - 3, n - 3LL);  // vanishes for n < 3
    }
    throw std::invalid_argument("unknown closed form");
}

namespace {

using Series = std::vector<BigRat>;  // coefficients 0..N

Series series_mul(const Series& a, const Series& b) {
    Series out(a.size(), BigRat(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; i + j < out.size() && j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

Series series_reciprocal(const Series& a) {
    if (a.empty() || a[0] == 0)
        throw std::domain_error("series reciprocal of a series with zero constant term");
    Series out(a.size(), BigRat(0));
    out[0] = BigRat(1) / a[0];
    for (size_t k = 1; k < a.size(); ++k) {
        BigRat acc(0);
        for (size_t j = 1; j <= k && j < a.size(); ++j) acc += a[j] * out[k - j];
        out[k] = -acc / a[0];
    }
    return out;
}

// (1 + c z)^alpha via the binomial series.
Series binomial_series(const BigRat& alpha, const BigRat& c, size_t terms) {
    Series out(terms, BigRat(0));
    BigRat coeff(1);
    BigRat cpow(1);
    for (size_t j = 0; j < terms; ++j) {
        out[j] = coeff * cpow;
        coeff *= (alpha - BigRat(static_cast<long>(j))) / BigRat(static_cast<long>(j) + 1);
        cpow *= c;
    }
    return out;
}

BigRat power_series_linear_term() {
    // z-coefficient of (1-8z)^{3/2}.
    return binomial_series(BigRat(3, 2), BigRat(-8), 2)[1];
}

}  // namespace

SeriesExpansion series_1342(int terms, const BigRat& linear_coefficient) {
    if (terms < 0) throw std::invalid_argument("series_1342: negative term count");
    // One extra order so the z-cancellation still yields `terms`+1 coefficients.
    const size_t len = static_cast<size_t>(terms) + 2;
    const Series power = binomial_series(BigRat(3, 2), BigRat(-8), len);

    Series denom(len, BigRat(0));
    denom[0] = BigRat(1) - power[0];  // always 0
    if (len > 1) denom[1] = linear_coefficient - power[1];
    if (len > 2) denom[2] = BigRat(-8) - power[2];
    for (size_t j = 3; j < len; ++j) denom[j] = -power[j];

    if (denom[0] != 0)
        throw std::domain_error("series_1342: denominator has nonzero constant term");
    Series shifted(denom.begin() + 1, denom.end());  // divide by z
    if (shifted[0] == 0)
        throw std::domain_error(
            "series_1342: denominator has zero leading coefficient after z-cancellation");

    Series inv = series_reciprocal(shifted);
    SeriesExpansion out;
    out.coefficients.resize(static_cast<size_t>(terms) + 1);
    for (int i = 0; i <= terms; ++i)
        out.coefficients[static_cast<size_t>(i)] = BigRat(32) * inv[static_cast<size_t>(i)];
    return out;
}

BigRat resolved_1342_linear_coefficient() {
    // Constant term of 32z/D is 32/(c - g_1); setting it to 1 gives
    // c = 32 + g_1.
    return BigRat(32) + power_series_linear_term();
}

RegevTable regev_ratio(int k, int n_max, CountingContext& ctx) {
    if (k < 2) throw std::invalid_argument("regev_ratio: k must be at least 2");
    if (n_max < 1) throw std::invalid_argument("regev_ratio: n_max must be positive");
    std::vector<int> decreasing(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) decreasing[static_cast<size_t>(i)] = k - i;
    const Permutation pattern(std::move(decreasing));

    RegevTable table;
    table.k = k;
    const long long e2 = static_cast<long long>(k) * k - 2LL * k;  // twice the exponent
    table.squared = (e2 % 2) != 0;
    const BigInt base = k - 1;
    for (int n = 1; n <= n_max; ++n) {
        const BigInt avoid = ctx.avoiders(pattern, n);
        BigRat ratio;
        if (table.squared) {
            const BigInt num = avoid * avoid * boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(e2));
            const BigInt den = boost::multiprecision::pow(base, static_cast<unsigned>(4 * n));
            ratio = BigRat(num, den);
        } else {
            const BigInt num = avoid * boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(e2 / 2));
            const BigInt den = boost::multiprecision::pow(base, static_cast<unsigned>(2 * n));
            ratio = BigRat(num, den);
        }
        table.rows.emplace_back(n, ratio);
    }
    return table;
}

RatioTable ratio_table(const Permutation& q, int r, int n_max, CountingContext& ctx) {
    if (r < 0) throw std::invalid_argument("ratio_table: negative r");
    RatioTable table;
    table.pattern = q;
    table.r = r;
    bool first = true;
    for (int n = 1; n <= n_max; ++n) {
        const BigInt avoid = ctx.avoiders(q, n);
        if (avoid == 0)
            throw std::domain_error("ratio_table: zero avoider count at n = " + std::to_string(n));
        const BigInt count = ctx.count(q, n, r);
        const BigRat rho(count, boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(r)) * avoid);
        table.rows.emplace_back(n, rho);
        if (first || rho < table.min) table.min = rho;
        if (first || rho > table.max) table.max = rho;
        first = false;
    }
    return table;
}

WilfPartition wilf_partition(int length, int n_max, int r_max, CountingContext& ctx) {
    if (length < 1) throw std::invalid_argument("wilf_partition: length must be positive");
    WilfPartition part;
    part.length = length;
    part.n_max = n_max;
    part.r_max = r_max;

    std::vector<int> vals(static_cast<size_t>(length));
    for (int i = 0; i < length; ++i) vals[static_cast<size_t>(i)] = i + 1;

    // Signature = the full (n, r)-grid of counts including the overflow
    // bucket, so unequal tails beyond r_max still separate patterns.
    std::map<std::vector<BigInt>, std::vector<Permutation>> by_signature;
    do {
        const Permutation q(vals);
        const CountTable table = ctx.table(q, n_max, r_max);
        std::vector<BigInt> signature;
        for (const auto& [n, row] : table.rows) {
            for (const BigInt& c : row.counts) signature.push_back(c);
            signature.push_back(row.overflow.value_or(0));
        }
        by_signature[signature].push_back(q);
    } while (std::next_permutation(vals.begin(), vals.end()));

    for (auto& [sig, block] : by_signature) part.blocks.push_back(std::move(block));
    std::sort(part.blocks.begin(), part.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return part;
}

InequalityAudit inequality_audit(const Permutation& q, int n_max, int r_max,
                                 CountingContext& ctx) {
    const HypothesisReport hyp = check_hypotheses(q);
    InequalityAudit audit;
    audit.pattern = q;
    audit.n_max = n_max;
    audit.r_max = r_max;
    audit.lower_family_checked = hyp.lower_bound_applies;
    audit.upper_family_checked = hyp.upper_bound_applies;

    const int m = q.size();
    const int ell = hyp.skew_parts.parts[0].size();

    for (int n = 0; n <= n_max; ++n) ctx.prefetch(q, n, r_max);
    if (hyp.upper_bound_applies || r_max >= 2)
        for (int n = 1; n <= n_max; ++n) ctx.prefetch_refined(q, n, r_max);

    auto push = [&](std::string family, int n, int r, BigInt lhs, BigInt rhs, bool lhs_at_least) {
        AuditLine line;
        line.family = std::move(family);
        line.n = n;
        line.r = r;
        line.lhs = std::move(lhs);
        line.rhs = std::move(rhs);
        line.lhs_at_least_rhs = lhs_at_least;
        line.holds = lhs_at_least ? line.lhs >= line.rhs : line.lhs <= line.rhs;
        if (!line.holds) audit.all_hold = false;
        audit.lines.push_back(std::move(line));
    };

    if (hyp.lower_bound_applies) {
        for (int r = 1; r <= r_max; ++r) {
            for (int n = 1; n <= n_max; ++n) {
                const int base_len = n - r * m - ell;
                if (base_len < 0) continue;
                push("lower", n, r, ctx.count(q, n, r),
                     binomial(base_len + 1, r) * ctx.avoiders(q, base_len), true);
            }
        }
    }

    if (hyp.upper_bound_applies) {
        for (int r = 1; r <= r_max; ++r)
            for (int n = 1; n <= n_max; ++n)
                push("upper", n, r, ctx.refined(q, n, r).star,
                     BigInt(n) * ctx.refined(q, n, r - 1).star, false);
    }

    for (int r = 2; r <= r_max; ++r) {
        for (int n = 1; n <= n_max; ++n) {
            BigInt rhs = 0;
            for (int i = 0; i <= r - 2; ++i) rhs += ctx.count(q, n - 1, i);
            rhs *= BigInt(n) * n;
            push("intersecting", n, r, ctx.refined(q, n, r).intersecting, rhs, false);
        }
    }

    return audit;
}

}  // namespace permlab
