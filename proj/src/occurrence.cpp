#include "permlab/occurrence.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace permlab {

namespace {

// Shared backtracking core. Chooses positions left to right; at each depth
// the candidate value must fall in the open interval forced by the already
// chosen values and the pattern's order relations.
class OccurrenceSearch {
public:
    OccurrenceSearch(const Permutation& q, const Permutation& p,
                     const std::function<bool(const std::vector<int>&)>& visit)
        : q_(q), p_(p), visit_(visit), m_(q.size()), n_(p.size()) {
        positions_.resize(static_cast<size_t>(m_));
        values_.resize(static_cast<size_t>(m_));
    }

    void run() {
        if (m_ == 0) throw std::invalid_argument("occurrences: empty pattern");
        if (m_ > n_) return;
        descend(0, 0);
    }

private:
    // Returns false when the visitor asked to stop.
    bool descend(int depth, int min_pos) {
        int lo = 0, hi = n_ + 1;
        for (int a = 0; a < depth; ++a) {
            if (q_.entries()[static_cast<size_t>(a)] < q_.entries()[static_cast<size_t>(depth)])
                lo = std::max(lo, values_[static_cast<size_t>(a)]);
            else
                hi = std::min(hi, values_[static_cast<size_t>(a)]);
        }
        // Enough positions must remain for the tail of the pattern.
        const int last_start = n_ - (m_ - depth);
        for (int pos = min_pos; pos <= last_start; ++pos) {
            const int x = p_.entries()[static_cast<size_t>(pos)];
            if (x <= lo || x >= hi) continue;
            positions_[static_cast<size_t>(depth)] = pos + 1;
            values_[static_cast<size_t>(depth)] = x;
            if (depth + 1 == m_) {
                if (!visit_(positions_)) return false;
            } else if (!descend(depth + 1, pos + 1)) {
                return false;
            }
        }
        return true;
    }

    const Permutation& q_;
    const Permutation& p_;
    const std::function<bool(const std::vector<int>&)>& visit_;
    int m_, n_;
    std::vector<int> positions_;
    std::vector<int> values_;
};

}  // namespace

void for_each_occurrence(const Permutation& q, const Permutation& p,
                         const std::function<bool(const std::vector<int>&)>& fn) {
    OccurrenceSearch(q, p, fn).run();
}

OccurrenceSet occurrences(const Permutation& q, const Permutation& p) {
    OccurrenceSet out;
    out.pattern_length = q.size();
    for_each_occurrence(q, p, [&](const std::vector<int>& t) {
        out.tuples.push_back(t);
        return true;
    });
    return out;
}

int count_occurrences(const Permutation& q, const Permutation& p, int cap) {
    int count = 0;
    for_each_occurrence(q, p, [&](const std::vector<int>&) {
        ++count;
        return count <= cap;
    });
    return count;
}

bool contains(const Permutation& q, const Permutation& p) {
    return count_occurrences(q, p, 0) > 0;
}

namespace detail {

void PrefixState::clear() {
    std::memset(vals, kernels::kSentinel, sizeof(vals));
    len = 0;
}

void PrefixState::push(int v) {
    if (len >= kMaxLen) throw std::length_error("PrefixState: desk-scale length exceeded");
    for (int i = 0; i < len; ++i) vals[i] += (vals[i] >= v);
    vals[len++] = static_cast<uint8_t>(v);
}

void PrefixState::pop(int v) {
    vals[--len] = kernels::kSentinel;
    for (int i = 0; i < len; ++i) vals[i] -= (vals[i] > v);
}

CompiledPattern compile_pattern(const Permutation& q) {
    if (q.size() < 1 || q.size() > 8)
        throw std::invalid_argument("pattern length must be between 1 and 8");
    CompiledPattern c;
    c.m = q.size();
    for (int i = 0; i < c.m; ++i) c.entry[static_cast<size_t>(i)] = static_cast<int8_t>(q.at(i + 1));
    return c;
}

namespace {

constexpr int kTop = 127;

// Generic tail for patterns of length >= 5: backtracks over the remaining
// pattern slots with the same interval pruning; the slot count is small so
// no vectorization is attempted.
int generic_count(const CompiledPattern& q, const uint8_t* vals, int t, int new_value,
                  int depth, int* chosen_vals, int min_idx, int cap, int count) {
    const int slots = q.m - 1;
    int lo = 0, hi = kTop;
    for (int a = 0; a < depth; ++a) {
        if (q.less(a, depth))
            lo = std::max(lo, chosen_vals[a]);
        else
            hi = std::min(hi, chosen_vals[a]);
    }
    if (q.less(depth, q.m - 1))
        hi = std::min(hi, new_value);  // x < v
    else
        lo = std::max(lo, new_value - 1);  // x >= v
    const int last_start = t - (slots - depth);
    for (int i = min_idx; i <= last_start; ++i) {
        const int x = vals[i];
        if (x <= lo || x >= hi) continue;
        if (depth + 1 == slots) {
            if (++count > cap) return count;
        } else {
            chosen_vals[depth] = x;
            count = generic_count(q, vals, t, new_value, depth + 1, chosen_vals, i + 1, cap, count);
            if (count > cap) return count;
        }
    }
    return count;
}

}  // namespace

int count_ending_at_last(const CompiledPattern& q, const PrefixState& st,
                         int new_value, int cap) {
    const int t = st.len;
    const int v = new_value;
    const uint8_t* vals = st.vals;
    if (q.m - 1 > t) return 0;

    switch (q.m) {
        case 1:
            return 1;
        case 2: {
            // Single interval against the new value.
            int lo = 0, hi = kTop;
            if (q.less(0, 1))
                hi = v;
            else
                lo = v - 1;
            return kernels::count_in_open_interval(vals, t, lo, hi);
        }
        case 3: {
            int count = 0;
            const bool a_below_v = q.less(0, 2);
            const bool b_above_a = q.less(0, 1);
            const bool b_below_v = q.less(1, 2);
            for (int i = 0; i + 1 < t; ++i) {
                const int a = vals[i];
                if (a_below_v ? a >= v : a < v) continue;
                int lo = 0, hi = kTop;
                if (b_above_a)
                    lo = a;
                else
                    hi = a;
                if (b_below_v)
                    hi = std::min(hi, v);
                else
                    lo = std::max(lo, v - 1);
                if (lo + 1 >= hi) continue;
                count += kernels::count_in_open_interval(vals + i + 1, t - i - 1, lo, hi);
                if (count > cap) return count;
            }
            return count;
        }
        case 4: {
            int count = 0;
            const bool a_below_v = q.less(0, 3);
            const bool b_above_a = q.less(0, 1);
            const bool b_below_v = q.less(1, 3);
            const bool c_above_a = q.less(0, 2);
            const bool c_above_b = q.less(1, 2);
            const bool c_below_v = q.less(2, 3);
            for (int i = 0; i + 2 < t; ++i) {
                const int a = vals[i];
                if (a_below_v ? a >= v : a < v) continue;
                for (int j = i + 1; j + 1 < t; ++j) {
                    const int b = vals[j];
                    if (b_above_a ? b < a : b > a) continue;
                    if (b_below_v ? b >= v : b < v) continue;
                    int lo = 0, hi = kTop;
                    if (c_above_a)
                        lo = a;
                    else
                        hi = a;
                    if (c_above_b)
                        lo = std::max(lo, b);
                    else
                        hi = std::min(hi, b);
                    if (c_below_v)
                        hi = std::min(hi, v);
                    else
                        lo = std::max(lo, v - 1);
                    if (lo + 1 >= hi) continue;
                    count += kernels::count_in_open_interval(vals + j + 1, t - j - 1, lo, hi);
                    if (count > cap) return count;
                }
            }
            return count;
        }
        default: {
            int chosen[8];
            return generic_count(q, vals, t, v, 0, chosen, 0, cap, 0);
        }
    }
}

}  // namespace detail

int occurrence_count_incremental(const Permutation& q, const Permutation& prefix,
                                 int new_last_value) {
    if (q.size() < 1) throw std::invalid_argument("occurrences: empty pattern");
    const int t = prefix.size();
    if (new_last_value < 1 || new_last_value > t + 1)
        throw std::invalid_argument("invalid insertion value " + std::to_string(new_last_value) +
                                    " for prefix of length " + std::to_string(t));
    if (t >= detail::PrefixState::kMaxLen)
        throw std::length_error("prefix exceeds desk-scale length");
    detail::PrefixState st;
    for (int i = 1; i <= t; ++i) st.vals[st.len++] = static_cast<uint8_t>(prefix.at(i));
    return detail::count_ending_at_last(detail::compile_pattern(q), st, new_last_value, kNoCap);
}

}  // namespace permlab
