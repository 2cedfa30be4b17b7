#include "permlab/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace permlab {

namespace {

void validate_entries(const std::vector<int>& entries) {
    const int n = static_cast<int>(entries.size());
    std::vector<char> seen(static_cast<size_t>(n) + 1, 0);
    for (int v : entries) {
        if (v < 1 || v > n)
            throw std::invalid_argument("not a permutation: value " +
                                        std::to_string(v) + " out of range 1.." +
                                        std::to_string(n));
        if (seen[static_cast<size_t>(v)])
            throw std::invalid_argument("not a permutation: duplicate value " +
                                        std::to_string(v));
        seen[static_cast<size_t>(v)] = 1;
    }
}

}  // namespace

Permutation::Permutation(std::vector<int> entries) : entries_(std::move(entries)) {
    validate_entries(entries_);
}

Permutation Permutation::identity(int n) {
    if (n < 0) throw std::invalid_argument("identity: negative length");
    std::vector<int> v(static_cast<size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
}

int Permutation::at(int position) const {
    if (position < 1 || position > size())
        throw std::out_of_range("position " + std::to_string(position) +
                                " outside 1.." + std::to_string(size()));
    return entries_[static_cast<size_t>(position - 1)];
}

Permutation make_permutation(const std::vector<int>& values) {
    return Permutation(values);
}

std::string to_string(const Permutation& p) {
    std::string out;
    const bool digits = p.size() <= 9;
    for (int i = 0; i < p.size(); ++i) {
        if (!digits && i > 0) out += ',';
        out += std::to_string(p.entries()[static_cast<size_t>(i)]);
    }
    return out;
}

Permutation parse_permutation(const std::string& text) {
    std::vector<int> vals;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(item, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("cannot parse permutation entry '" + item + "'");
            }
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size())
                throw std::invalid_argument("cannot parse permutation entry '" + item + "'");
            vals.push_back(v);
        }
    } else {
        for (char c : text) {
            if (c < '1' || c > '9')
                throw std::invalid_argument("cannot parse permutation '" + text +
                                            "': expected digits 1-9 or a comma-separated list");
            vals.push_back(c - '0');
        }
    }
    return Permutation(std::move(vals));
}

std::ostream& operator<<(std::ostream& os, const Permutation& p) {
    return os << to_string(p);
}

Permutation standardize(const std::vector<int>& values) {
    const int n = static_cast<int>(values.size());
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return values[static_cast<size_t>(a)] < values[static_cast<size_t>(b)]; });
    std::vector<int> out(static_cast<size_t>(n));
    for (int rank = 0; rank < n; ++rank) {
        if (rank > 0 && values[static_cast<size_t>(order[static_cast<size_t>(rank)])] ==
                            values[static_cast<size_t>(order[static_cast<size_t>(rank - 1)])])
            throw std::invalid_argument("standardize: duplicate values");
        out[static_cast<size_t>(order[static_cast<size_t>(rank)])] = rank + 1;
    }
    return Permutation(std::move(out));
}

Permutation flatten(const Permutation& p, const std::vector<int>& positions) {
    std::vector<int> vals;
    vals.reserve(positions.size());
    int prev = 0;
    for (int pos : positions) {
        if (pos <= prev)
            throw std::invalid_argument("flatten: positions must be strictly increasing");
        if (pos < 1 || pos > p.size())
            throw std::invalid_argument("flatten: position out of range");
        vals.push_back(p.at(pos));
        prev = pos;
    }
    return standardize(vals);
}

Permutation apply_symmetry(const Permutation& p, Symmetry s) {
    const int n = p.size();
    std::vector<int> out(static_cast<size_t>(n));
    switch (s) {
        case Symmetry::reverse:
            for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = p.entries()[static_cast<size_t>(n - 1 - i)];
            break;
        case Symmetry::complement:
            for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = n + 1 - p.entries()[static_cast<size_t>(i)];
            break;
        case Symmetry::inverse:
            for (int i = 0; i < n; ++i) out[static_cast<size_t>(p.entries()[static_cast<size_t>(i)] - 1)] = i + 1;
            break;
        case Symmetry::reverse_complement:
            for (int i = 0; i < n; ++i)
                out[static_cast<size_t>(i)] = n + 1 - p.entries()[static_cast<size_t>(n - 1 - i)];
            break;
    }
    return Permutation(std::move(out));
}

Permutation direct_sum(const Permutation& a, const Permutation& b) {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(a.size() + b.size()));
    for (int v : a.entries()) out.push_back(v);
    for (int v : b.entries()) out.push_back(v + a.size());
    return Permutation(std::move(out));
}

Permutation skew_sum(const Permutation& a, const Permutation& b) {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(a.size() + b.size()));
    for (int v : a.entries()) out.push_back(v + b.size());
    for (int v : b.entries()) out.push_back(v);
    return Permutation(std::move(out));
}

Permutation compose(const Permutation& a, const Permutation& b, SumMode mode) {
    return mode == SumMode::direct_sum ? direct_sum(a, b) : skew_sum(a, b);
}

Permutation insert_block(const Permutation& p, int position,
                         const std::vector<BigRat>& keys) {
    const int n = p.size();
    if (position < 1 || position > n + 1)
        throw std::invalid_argument("insert_block: position out of range");
    for (size_t i = 0; i < keys.size(); ++i) {
        if (denominator(keys[i]) == 1) {
            BigInt iv = numerator(keys[i]);
            if (iv >= 1 && iv <= n)
                throw std::invalid_argument("insert_block: key collides with existing value");
        }
        for (size_t j = i + 1; j < keys.size(); ++j)
            if (keys[i] == keys[j])
                throw std::invalid_argument("insert_block: duplicate keys");
    }

    // Assemble the extended value sequence, then rank jointly.
    std::vector<BigRat> vals;
    vals.reserve(static_cast<size_t>(n) + keys.size());
    for (int i = 0; i < position - 1; ++i) vals.emplace_back(p.entries()[static_cast<size_t>(i)]);
    for (const BigRat& k : keys) vals.push_back(k);
    for (int i = position - 1; i < n; ++i) vals.emplace_back(p.entries()[static_cast<size_t>(i)]);

    const int total = static_cast<int>(vals.size());
    std::vector<int> order(static_cast<size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals[static_cast<size_t>(a)] < vals[static_cast<size_t>(b)]; });
    std::vector<int> out(static_cast<size_t>(total));
    for (int rank = 0; rank < total; ++rank)
        out[static_cast<size_t>(order[static_cast<size_t>(rank)])] = rank + 1;
    return Permutation(std::move(out));
}

Permutation delete_entry(const Permutation& p, int position) {
    if (position < 1 || position > p.size())
        throw std::invalid_argument("delete_entry: position out of range");
    std::vector<int> vals;
    vals.reserve(static_cast<size_t>(p.size() - 1));
    for (int i = 1; i <= p.size(); ++i)
        if (i != position) vals.push_back(p.at(i));
    return standardize(vals);
}

}  // namespace permlab
