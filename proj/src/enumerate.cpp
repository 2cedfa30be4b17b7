#include "permlab/enumerate.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "permlab/occurrence.hpp"

namespace permlab {

namespace {

constexpr int kMaxN = 20;  // n! fits in uint64_t up to here

const uint64_t kFactorial[kMaxN + 1] = {
    1ULL,
    1ULL,
    2ULL,
    6ULL,
    24ULL,
    120ULL,
    720ULL,
    5040ULL,
    40320ULL,
    362880ULL,
    3628800ULL,
    39916800ULL,
    479001600ULL,
    6227020800ULL,
    87178291200ULL,
    1307674368000ULL,
    20922789888000ULL,
    355687428096000ULL,
    6402373705728000ULL,
    121645100408832000ULL,
    2432902008176640000ULL};

void check_scale(const Permutation& q, int n) {
    if (n < 0 || n > kMaxN)
        throw std::invalid_argument("n = " + std::to_string(n) +
                                    " is outside the desk-scale guard 0.." + std::to_string(kMaxN));
    if (q.size() < 1) throw std::invalid_argument("empty pattern");
}

// Doles the shared node budget out in chunks so workers only touch the
// atomic once per batch.
class BudgetMeter {
public:
    BudgetMeter(std::atomic<uint64_t>* used, uint64_t budget, std::atomic<bool>* stop)
        : used_(used), budget_(budget), stop_(stop) {}

    void tick() {
        if (local_ == 0) refill();
        --local_;
    }

private:
    void refill() {
        if (stop_ && stop_->load(std::memory_order_relaxed))
            throw BudgetExceededError(budget_);  // another worker already gave up
        const uint64_t before = used_->fetch_add(kBatch, std::memory_order_relaxed);
        const uint64_t grant = before >= budget_ ? 0 : std::min(kBatch, budget_ - before);
        if (grant == 0) {
            if (stop_) stop_->store(true, std::memory_order_relaxed);
            throw BudgetExceededError(budget_);
        }
        local_ = grant;
    }

    static constexpr uint64_t kBatch = 65536;
    std::atomic<uint64_t>* used_;
    uint64_t budget_;
    std::atomic<bool>* stop_;
    uint64_t local_ = 0;
};

// Depth-first prefix extension. Sink sees leaves (full permutations with
// their exact count <= cap) and pooled prunes (a prefix of length `len`
// whose count already exceeds the cap stands for n!/len! completions).
template <class Sink>
void dfs(const detail::CompiledPattern& q, int n, int r_cap, detail::PrefixState& st,
         int count, Sink& sink, BudgetMeter& meter) {
    if (st.len == n) {
        sink.leaf(st, count);
        return;
    }
    const int cap_left = r_cap < 0 ? kNoCap : r_cap - count;
    for (int v = 1; v <= st.len + 1; ++v) {
        meter.tick();
        const int grown = count + detail::count_ending_at_last(q, st, v, cap_left);
        if (r_cap >= 0 && grown > r_cap) {
            sink.pooled(st.len + 1);
            continue;
        }
        st.push(v);
        dfs(q, n, r_cap, st, grown, sink, meter);
        st.pop(v);
    }
}

struct Seed {
    std::vector<uint8_t> vals;
    int count = 0;
};

// Collects all surviving prefixes at `depth` (pooling the rest).
template <class Sink>
void collect_seeds(const detail::CompiledPattern& q, int n, int r_cap, int depth,
                   detail::PrefixState& st, int count, Sink& sink, BudgetMeter& meter,
                   std::vector<Seed>& seeds) {
    if (st.len == depth) {
        Seed s;
        s.vals.assign(st.vals, st.vals + st.len);
        s.count = count;
        seeds.push_back(std::move(s));
        return;
    }
    const int cap_left = r_cap < 0 ? kNoCap : r_cap - count;
    for (int v = 1; v <= st.len + 1; ++v) {
        meter.tick();
        const int grown = count + detail::count_ending_at_last(q, st, v, cap_left);
        if (r_cap >= 0 && grown > r_cap) {
            sink.pooled(st.len + 1);
            continue;
        }
        st.push(v);
        collect_seeds(q, n, r_cap, depth, st, grown, sink, meter, seeds);
        st.pop(v);
    }
}

int normalized_threads(const EnumOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs the prefix-extension search over all n! permutations, partitioned
// at a fixed depth across threads. Sinks merge associatively, so parallel
// and sequential runs produce identical results.
template <class Sink>
void run_search(const Permutation& pattern, int n, int r_cap, const EnumOptions& opts,
                Sink& sink) {
    check_scale(pattern, n);
    const detail::CompiledPattern q = detail::compile_pattern(pattern);
    const int threads = normalized_threads(opts);

    std::atomic<uint64_t> used{0};
    std::atomic<bool> stop{false};
    BudgetMeter main_meter(&used, opts.node_budget, &stop);

    detail::PrefixState st;
    const int seed_depth = std::min(n, 4);
    if (threads <= 1 || n <= 5) {
        dfs(q, n, r_cap, st, 0, sink, main_meter);
        return;
    }

    std::vector<Seed> seeds;
    collect_seeds(q, n, r_cap, seed_depth, st, 0, sink, main_meter, seeds);

    std::vector<Sink> partials(seeds.size(), sink.fork());
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                BudgetMeter meter(&used, opts.node_budget, &stop);
                detail::PrefixState local;
                for (;;) {
                    const size_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= seeds.size()) break;
                    local.clear();
                    for (uint8_t v : seeds[i].vals) local.vals[local.len++] = v;
                    dfs(q, n, r_cap, local, seeds[i].count, partials[i], meter);
                }
            } catch (...) {
                errors[static_cast<size_t>(t)] = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (const Sink& part : partials) sink.merge(part);
}

struct DistributionSink {
    int n = 0;
    std::vector<uint64_t> buckets;
    uint64_t overflow = 0;

    DistributionSink(int n_, size_t bucket_count) : n(n_), buckets(bucket_count, 0) {}

    DistributionSink fork() const { return DistributionSink(n, buckets.size()); }

    void leaf(const detail::PrefixState&, int count) { buckets[static_cast<size_t>(count)] += 1; }
    void pooled(int len) { overflow += kFactorial[n] / kFactorial[len]; }

    void merge(const DistributionSink& other) {
        for (size_t i = 0; i < buckets.size(); ++i) buckets[i] += other.buckets[i];
        overflow += other.overflow;
    }
};

struct MembersSink {
    int target = 0;
    std::vector<Permutation> out;

    explicit MembersSink(int target_) : target(target_) {}

    MembersSink fork() const { return MembersSink(target); }

    void leaf(const detail::PrefixState& st, int count) {
        if (count != target) return;
        std::vector<int> vals(st.vals, st.vals + st.len);
        out.emplace_back(std::move(vals));
    }
    void pooled(int) {}

    void merge(const MembersSink& other) {
        out.insert(out.end(), other.out.begin(), other.out.end());
    }
};

struct RefinedSink {
    Permutation pattern;
    int r_max = 0;
    std::vector<uint64_t> star;
    std::vector<uint64_t> intersecting;

    RefinedSink(Permutation pattern_, int r_max_)
        : pattern(std::move(pattern_)),
          r_max(r_max_),
          star(static_cast<size_t>(r_max_) + 1, 0),
          intersecting(static_cast<size_t>(r_max_) + 1, 0) {}

    RefinedSink fork() const { return RefinedSink(pattern, r_max); }

    void leaf(const detail::PrefixState& st, int count) {
        std::vector<int> vals(st.vals, st.vals + st.len);
        const Permutation p(std::move(vals));
        bool disjoint = true;
        uint32_t seen = 0;
        for_each_occurrence(pattern, p, [&](const std::vector<int>& tuple) {
            uint32_t mask = 0;
            for (int pos : tuple) mask |= 1u << (pos - 1);
            if (mask & seen) {
                disjoint = false;
                return false;
            }
            seen |= mask;
            return true;
        });
        (disjoint ? star : intersecting)[static_cast<size_t>(count)] += 1;
    }
    void pooled(int) {}

    void merge(const RefinedSink& other) {
        for (size_t i = 0; i < star.size(); ++i) {
            star[i] += other.star[i];
            intersecting[i] += other.intersecting[i];
        }
    }
};

uint64_t max_occurrences(int n, int m) {
    // C(n, m) as uint64 (desk scale keeps this small).
    if (m > n) return 0;
    uint64_t b = 1;
    if (m > n - m) m = n - m;
    for (int i = 1; i <= m; ++i) b = b * static_cast<uint64_t>(n - m + i) / static_cast<uint64_t>(i);
    return b;
}

}  // namespace

BigInt Distribution::at(int r) const {
    if (r < 0) throw std::invalid_argument("negative r");
    if (r < static_cast<int>(buckets.size())) return buckets[static_cast<size_t>(r)];
    if (r_cap.has_value())
        throw std::out_of_range("bucket " + std::to_string(r) + " was pooled into overflow");
    return 0;
}

BigInt Distribution::total() const {
    BigInt t = overflow;
    for (const BigInt& b : buckets) t += b;
    return t;
}

Distribution occurrence_distribution(const Permutation& q, int n, std::optional<int> r_cap,
                                     const EnumOptions& opts) {
    check_scale(q, n);
    if (r_cap && *r_cap < 0) throw std::invalid_argument("negative r_cap");
    const int cap = r_cap ? *r_cap : -1;
    const size_t buckets = r_cap ? static_cast<size_t>(*r_cap) + 1
                                 : static_cast<size_t>(max_occurrences(n, q.size())) + 1;
    DistributionSink sink(n, buckets);
    run_search(q, n, cap, opts, sink);

    Distribution out;
    out.pattern = q;
    out.n = n;
    out.r_cap = r_cap;
    out.buckets.assign(sink.buckets.begin(), sink.buckets.end());
    out.overflow = sink.overflow;
    return out;
}

BigInt count_avoiders(const Permutation& q, int n, const EnumOptions& opts) {
    return occurrence_distribution(q, n, 0, opts).at(0);
}

std::vector<RefinedCounts> refined_rows(const Permutation& q, int n, int r_max,
                                        const EnumOptions& opts) {
    check_scale(q, n);
    if (r_max < 0) throw std::invalid_argument("negative r");
    RefinedSink sink(q, r_max);
    run_search(q, n, r_max, opts, sink);
    std::vector<RefinedCounts> out(static_cast<size_t>(r_max) + 1);
    for (int r = 0; r <= r_max; ++r) {
        out[static_cast<size_t>(r)].star = sink.star[static_cast<size_t>(r)];
        out[static_cast<size_t>(r)].intersecting = sink.intersecting[static_cast<size_t>(r)];
    }
    return out;
}

RefinedCounts refined_counts(const Permutation& q, int n, int r, const EnumOptions& opts) {
    return refined_rows(q, n, r, opts)[static_cast<size_t>(r)];
}

std::vector<Permutation> members(const Permutation& q, int n, int r, const EnumOptions& opts) {
    check_scale(q, n);
    if (r < 0) throw std::invalid_argument("negative r");
    MembersSink sink(r);
    run_search(q, n, r, opts, sink);
    std::sort(sink.out.begin(), sink.out.end());
    return sink.out;
}

BigInt CountRow::sum() const {
    BigInt t = overflow.value_or(0);
    for (const BigInt& c : counts) t += c;
    return t;
}

const CountRow& CountTable::row(int n) const {
    auto it = rows.find(n);
    if (it == rows.end())
        throw std::out_of_range("no row for n = " + std::to_string(n));
    return it->second;
}

BigInt CountTable::entry(int n, int r) const {
    const CountRow& rw = row(n);
    if (r < 0) throw std::invalid_argument("negative r");
    if (r < static_cast<int>(rw.counts.size())) return rw.counts[static_cast<size_t>(r)];
    if (rw.capped())
        throw std::out_of_range("entry (" + std::to_string(n) + ", " + std::to_string(r) +
                                ") was pooled into overflow");
    return 0;
}

std::string to_csv(const CountTable& table) {
    std::ostringstream os;
    os << "n,r,count\n";
    for (const auto& [n, row] : table.rows) {
        for (size_t r = 0; r < row.counts.size(); ++r)
            os << n << ',' << r << ',' << row.counts[r].str() << '\n';
        if (row.capped()) os << n << ",overflow," << row.overflow->str() << '\n';
    }
    return os.str();
}

CountCache::CountCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path CountCache::file_for(const Permutation& q) const {
    return dir_ / (to_string(q) + ".jsonl");
}

std::map<int, CountRow> CountCache::load(const Permutation& q) const {
    std::map<int, CountRow> out;
    if (!enabled()) return out;
    const auto path = file_for(q);
    std::ifstream in(path);
    if (!in.is_open()) return out;  // nothing cached yet

    const std::string qstr = to_string(q);
    std::map<int, std::map<int, BigInt>> counts;
    std::map<int, BigInt> overflows;
    std::string line;
    int lineno = 0;
    try {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto doc = nlohmann::json::parse(line);
            if (doc.at("q").get<std::string>() != qstr)
                throw std::runtime_error("pattern mismatch");
            const int n = doc.at("n").get<int>();
            const BigInt count(doc.at("count").get<std::string>());
            const auto& r = doc.at("r");
            if (r.is_string()) {
                if (r.get<std::string>() != "overflow") throw std::runtime_error("bad r");
                overflows[n] = count;
            } else {
                counts[n][r.get<int>()] = count;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "permlab: ignoring corrupt cache file " << path.string() << " (line "
                  << lineno << ": " << e.what() << "); recomputing\n";
        return {};
    }

    for (const auto& [n, by_r] : counts) {
        CountRow row;
        row.n = n;
        const int max_r = by_r.rbegin()->first;
        row.counts.assign(static_cast<size_t>(max_r) + 1, 0);
        for (const auto& [r, c] : by_r) row.counts[static_cast<size_t>(r)] = c;
        if (auto it = overflows.find(n); it != overflows.end()) row.overflow = it->second;
        out[n] = std::move(row);
    }
    return out;
}

void CountCache::store(const Permutation& q, const std::map<int, CountRow>& rows) const {
    if (!enabled()) return;
    std::filesystem::create_directories(dir_);
    const auto path = file_for(q);
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream outf(tmp, std::ios::trunc);
        if (!outf.is_open())
            throw std::runtime_error("cannot write cache file " + tmp);
        const std::string qstr = to_string(q);
        for (const auto& [n, row] : rows) {
            for (size_t r = 0; r < row.counts.size(); ++r) {
                nlohmann::ordered_json doc{{"q", qstr}, {"n", n}, {"r", r}, {"count", row.counts[r].str()}};
                outf << doc.dump() << '\n';
            }
            if (row.capped()) {
                nlohmann::ordered_json doc{
                    {"q", qstr}, {"n", n}, {"r", "overflow"}, {"count", row.overflow->str()}};
                outf << doc.dump() << '\n';
            }
        }
        outf.flush();
        if (!outf.good()) throw std::runtime_error("failed writing cache file " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

namespace {

CountRow row_from_distribution(const Distribution& d) {
    CountRow row;
    row.n = d.n;
    row.counts = d.buckets;
    if (d.r_cap) {
        row.overflow = d.overflow;
    } else {
        while (row.counts.size() > 1 && row.counts.back() == 0) row.counts.pop_back();
    }
    return row;
}

bool row_answers(const CountRow& row, int r_needed) {
    return !row.capped() || row.cap() >= r_needed;
}

// Row as seen at cap r_max: counts 0..r_max plus pooled overflow.
CountRow view_at_cap(const CountRow& row, int r_max) {
    CountRow out;
    out.n = row.n;
    out.counts.assign(static_cast<size_t>(r_max) + 1, 0);
    BigInt over = row.overflow.value_or(0);
    for (size_t r = 0; r < row.counts.size(); ++r) {
        if (static_cast<int>(r) <= r_max)
            out.counts[r] = row.counts[r];
        else
            over += row.counts[r];
    }
    out.overflow = over;
    return out;
}

}  // namespace

CountTable table_build(const Permutation& q, int n_max, int r_max,
                       const std::filesystem::path& cache_dir, const EnumOptions& opts) {
    if (n_max < 0 || r_max < 0) throw std::invalid_argument("negative table bounds");
    CountCache cache{cache_dir};
    std::map<int, CountRow> stored = cache.load(q);
    bool changed = false;
    CountTable table;
    table.pattern = q;
    for (int n = 0; n <= n_max; ++n) {
        auto it = stored.find(n);
        if (it == stored.end() || !row_answers(it->second, r_max)) {
            const Distribution d = occurrence_distribution(q, n, r_max, opts);
            stored[n] = row_from_distribution(d);
            changed = true;
        }
        table.rows[n] = view_at_cap(stored[n], r_max);
    }
    if (changed) cache.store(q, stored);
    return table;
}

CountingContext::CountingContext(EnumOptions opts, std::filesystem::path cache_dir)
    : opts_(opts), cache_(std::move(cache_dir)) {}

CountRow& CountingContext::ensure_row_locked(const Permutation& q, int n, int min_cap) {
    const std::string key = to_string(q);
    if (cache_.enabled() && !cache_loaded_[key]) {
        auto loaded = cache_.load(q);
        auto& mine = rows_[key];
        for (auto& [rn, row] : loaded) mine.emplace(rn, std::move(row));
        cache_loaded_[key] = true;
    }
    auto& mine = rows_[key];
    auto it = mine.find(n);
    if (it == mine.end() || !row_answers(it->second, min_cap)) {
        const Distribution d = occurrence_distribution(q, n, min_cap, opts_);
        mine[n] = row_from_distribution(d);
        if (cache_.enabled()) cache_.store(q, mine);
        it = mine.find(n);
    }
    return it->second;
}

BigInt CountingContext::count(const Permutation& q, int n, int r) {
    if (r < 0) throw std::invalid_argument("negative r");
    std::lock_guard<std::mutex> lock(mutex_);
    const CountRow& row = ensure_row_locked(q, n, r);
    if (r < static_cast<int>(row.counts.size())) return row.counts[static_cast<size_t>(r)];
    return 0;  // uncapped row with trimmed tail
}

BigInt CountingContext::avoiders(const Permutation& q, int n) { return count(q, n, 0); }

void CountingContext::prefetch(const Permutation& q, int n, int r_cap) {
    std::lock_guard<std::mutex> lock(mutex_);
    ensure_row_locked(q, n, r_cap);
}

RefinedCounts CountingContext::refined(const Permutation& q, int n, int r) {
    if (r < 0) throw std::invalid_argument("negative r");
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string key = to_string(q) + "|" + std::to_string(n);
    auto it = refined_.find(key);
    if (it == refined_.end() || it->second.first < r) {
        auto rows = refined_rows(q, n, r, opts_);
        refined_[key] = {r, std::move(rows)};
        it = refined_.find(key);
    }
    return it->second.second[static_cast<size_t>(r)];
}

void CountingContext::prefetch_refined(const Permutation& q, int n, int r_cap) {
    refined(q, n, r_cap);
}

CountTable CountingContext::table(const Permutation& q, int n_max, int r_max) {
    std::lock_guard<std::mutex> lock(mutex_);
    CountTable table;
    table.pattern = q;
    for (int n = 0; n <= n_max; ++n)
        table.rows[n] = view_at_cap(ensure_row_locked(q, n, r_max), r_max);
    return table;
}

}  // namespace permlab
