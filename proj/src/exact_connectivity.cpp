#include "aniso/exact_connectivity.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <thread>
#include <unordered_map>

#include "aniso/detail/compensated_sum.hpp"
#include "aniso/detail/union_find.hpp"
#include "aniso/errors.hpp"

namespace aniso {

std::string to_string(Engine e) {
    switch (e) {
        case Engine::brute_force: return "brute_force";
        case Engine::transfer_matrix: return "transfer_matrix";
        case Engine::brute_force_rational: return "brute_force_rational";
    }
    return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void require_interior(const LatticeRegion& region, Vertex v) {
    if (!region.is_interior(v))
        throw UsageError("vertex " + to_string(v) + " is not in the interior of region " + to_string(region));
}

unsigned resolve_threads(unsigned requested) {
    return requested ? requested : std::max(1u, std::thread::hardware_concurrency());
}

ExactResult make_result(double value, Engine engine, const LatticeRegion& region, const Params& params, Vertex x,
                        Vertex y) {
    ExactResult r;
    r.value = value;
    r.log_value = value > 0.0 ? std::log(value) : -std::numeric_limits<double>::infinity();
    r.engine = engine;
    r.region = region;
    r.params = params;
    r.x = x;
    r.y = y;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Brute force

double SuccessCounts::evaluate(const Params& p) const {
    std::vector<double> wh(e_h + 1), wv(e_v + 1);
    for (std::size_t c = 0; c <= e_h; ++c)
        wh[c] = std::pow(1.0 - p.p_h(), static_cast<double>(c)) * std::pow(p.p_h(), static_cast<double>(e_h - c));
    for (std::size_t c = 0; c <= e_v; ++c)
        wv[c] = std::pow(1.0 - p.p_v(), static_cast<double>(c)) * std::pow(p.p_v(), static_cast<double>(e_v - c));
    detail::CompensatedSum sum;
    for (std::size_t ch = 0; ch <= e_h; ++ch)
        for (std::size_t cv = 0; cv <= e_v; ++cv)
            if (const auto n = at(ch, cv)) sum.add(static_cast<double>(n) * wh[ch] * wv[cv]);
    return sum.value();
}

Rational SuccessCounts::evaluate_exact(const Rational& p_h, const Rational& p_v) const {
    auto power = [](const Rational& b, std::size_t e) {
        Rational r = 1;
        for (std::size_t i = 0; i < e; ++i) r *= b;
        return r;
    };
    std::vector<Rational> wh(e_h + 1), wv(e_v + 1);
    for (std::size_t c = 0; c <= e_h; ++c) wh[c] = power(1 - p_h, c) * power(p_h, e_h - c);
    for (std::size_t c = 0; c <= e_v; ++c) wv[c] = power(1 - p_v, c) * power(p_v, e_v - c);
    Rational sum = 0;
    for (std::size_t ch = 0; ch <= e_h; ++ch)
        for (std::size_t cv = 0; cv <= e_v; ++cv)
            if (const auto n = at(ch, cv)) sum += Rational(n) * wh[ch] * wv[cv];
    return sum;
}

std::vector<SuccessCounts> count_success(const LatticeRegion& region, std::span<const std::pair<Vertex, Vertex>> pairs,
                                         const ExactLimits& limits) {
    const std::size_t n_edges = region.edge_count();
    if (n_edges > limits.max_edges || n_edges > 40)
        throw BudgetExceeded("brute force needs 2^" + std::to_string(n_edges) + " configurations; the cap is 2^" +
                             std::to_string(std::min<std::size_t>(limits.max_edges, 40)));
    for (const auto& [x, y] : pairs) {
        require_interior(region, x);
        require_interior(region, y);
    }

    const std::size_t e_h = region.horizontal_edge_count();
    const std::size_t e_v = region.vertical_edge_count();
    const std::size_t n_vertices = region.vertex_count();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ends(n_edges);
    for (std::size_t i = 0; i < n_edges; ++i) {
        const Edge e = region.edge_at(i);
        ends[i] = {static_cast<std::uint32_t>(region.vertex_index(e.from)),
                   static_cast<std::uint32_t>(region.vertex_index(e.to()))};
    }
    std::vector<std::uint32_t> frame;
    for (std::size_t v = 0; v < n_vertices; ++v)
        if (region.on_internal_boundary(region.vertex_at(v))) frame.push_back(static_cast<std::uint32_t>(v));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> targets;
    for (const auto& [x, y] : pairs)
        targets.emplace_back(static_cast<std::uint32_t>(region.vertex_index(x)),
                             static_cast<std::uint32_t>(region.vertex_index(y)));

    const std::uint64_t h_mask = (std::uint64_t{1} << e_h) - 1;
    const std::uint64_t total = std::uint64_t{1} << n_edges;
    const std::size_t table = (e_h + 1) * (e_v + 1);

    const unsigned threads =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(limits.threads), std::max<std::uint64_t>(1, total >> 12)));
    std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(targets.size() * table, 0));

    auto sweep = [&](unsigned t) {
        const std::uint64_t lo = total / threads * t;
        const std::uint64_t hi = t + 1 == threads ? total : total / threads * (t + 1);
        detail::UnionFind uf(n_vertices);
        std::vector<std::uint8_t> touches(n_vertices);
        auto& out = partial[t];
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t closed = i ^ (i >> 1);  // Gray code
            uf.reset();
            for (std::size_t e = 0; e < n_edges; ++e)
                if (!((closed >> e) & 1)) uf.unite(ends[e].first, ends[e].second);
            std::fill(touches.begin(), touches.end(), 0);
            for (const auto v : frame) touches[uf.find(v)] = 1;
            const auto ch = static_cast<std::size_t>(std::popcount(closed & h_mask));
            const auto cv = static_cast<std::size_t>(std::popcount(closed & ~h_mask));
            for (std::size_t k = 0; k < targets.size(); ++k) {
                const auto rx = uf.find(targets[k].first);
                if (rx == uf.find(targets[k].second) && !touches[rx]) ++out[k * table + ch * (e_v + 1) + cv];
            }
        }
    };
    if (threads == 1) {
        sweep(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(sweep, t);
        for (auto& th : pool) th.join();
    }

    std::vector<SuccessCounts> result;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        SuccessCounts s;
        s.region = region;
        s.x = pairs[k].first;
        s.y = pairs[k].second;
        s.e_h = e_h;
        s.e_v = e_v;
        s.counts.assign(table, 0);
        for (const auto& p : partial)
            for (std::size_t j = 0; j < table; ++j) s.counts[j] += p[k * table + j];
        result.push_back(std::move(s));
    }
    return result;
}

ExactResult tau_fN_bruteforce(const LatticeRegion& region, const Params& params, Vertex x, Vertex y,
                              const ExactLimits& limits) {
    const auto t0 = Clock::now();
    const std::pair<Vertex, Vertex> pair{x, y};
    const auto counts = count_success(region, {&pair, 1}, limits);
    auto r = make_result(counts.front().evaluate(params), Engine::brute_force, region, params, x, y);
    r.runtime_ms = elapsed_ms(t0);
    return r;
}

Rational tau_fN_rational(const LatticeRegion& region, const Rational& p_h, const Rational& p_v, Vertex x, Vertex y,
                         const ExactLimits& limits) {
    if (p_h < 0 || p_h > 1 || p_v < 0 || p_v > 1) throw UsageError("probabilities must lie in [0,1]");
    const std::pair<Vertex, Vertex> pair{x, y};
    return count_success(region, {&pair, 1}, limits).front().evaluate_exact(p_h, p_v);
}

ExactResult tau_fN_bruteforce_rational(const LatticeRegion& region, const Params& params, Vertex x, Vertex y,
                                       const ExactLimits& limits) {
    const auto t0 = Clock::now();
    const Rational exact = tau_fN_rational(region, Rational(params.p_h()), Rational(params.p_v()), x, y, limits);
    auto r = make_result(exact.convert_to<double>(), Engine::brute_force_rational, region, params, x, y);
    r.exact = boost::multiprecision::numerator(exact).str() + "/" + boost::multiprecision::denominator(exact).str();
    r.runtime_ms = elapsed_ms(t0);
    return r;
}

// ---------------------------------------------------------------------------
// Transfer matrix

namespace {

// One byte per frontier slot: block label in the low nibble, block flags above.
// Every slot of a block carries the same flags.
constexpr std::uint8_t kLabel = 0x0f;
constexpr std::uint8_t kHasX = 0x10;
constexpr std::uint8_t kHasY = 0x20;
constexpr std::uint8_t kBoundary = 0x40;
constexpr std::uint8_t kFresh = 0x0f;

struct FrontierKey {
    std::array<std::uint8_t, 16> slot{};
    friend bool operator==(const FrontierKey&, const FrontierKey&) = default;
};

struct FrontierHash {
    std::size_t operator()(const FrontierKey& k) const noexcept {
        std::uint64_t a = 0, b = 0;
        std::memcpy(&a, k.slot.data(), 8);
        std::memcpy(&b, k.slot.data() + 8, 8);
        return static_cast<std::size_t>((a * 0x9E3779B97F4A7C15ull) ^ (b + 0x632BE59BD9B4E019ull + (a << 6)));
    }
};

using StateMap = std::unordered_map<FrontierKey, detail::CompensatedSum, FrontierHash>;

class FrontierSweep {
public:
    FrontierSweep(int slots, double p_along, double p_across)
        : slots_(slots), p_along_(p_along), p_across_(p_across) {}

    // Column 0: every vertex starts as its own block, then the vertical edges.
    void first_column(const std::vector<std::uint8_t>& vertex_flags) {
        FrontierKey k;
        for (int r = 0; r < slots_; ++r) k.slot[r] = static_cast<std::uint8_t>(r) | vertex_flags[r];
        states_.clear();
        detail::CompensatedSum one;
        one.add(1.0);
        if (!dead(k)) states_.emplace(canonical(k), one);
        for (int r = 1; r < slots_; ++r) across_edge(r);
    }

    void next_column(const std::vector<std::uint8_t>& vertex_flags) {
        for (int r = 0; r < slots_; ++r) {
            along_edge(r, vertex_flags[r]);
            if (r > 0) across_edge(r);
        }
    }

    // Closes every remaining block.
    void finish() {
        for (const auto& [k, w] : states_) {
            for (int r = 0; r < slots_; ++r) {
                if (k.slot[r] & kHasX) {
                    if (k.slot[r] & kHasY) success_.add(w.value());
                    break;
                }
            }
        }
        states_.clear();
    }

    [[nodiscard]] double success() const { return success_.value(); }
    [[nodiscard]] std::size_t peak_states() const { return peak_; }

private:
    static bool dead(const FrontierKey& k) {
        for (const auto s : k.slot)
            if ((s & (kHasX | kHasY)) && (s & kBoundary)) return true;
        return false;
    }

    FrontierKey canonical(FrontierKey k) const {
        std::array<std::uint8_t, 16> map;
        map.fill(0xff);
        std::uint8_t next = 0;
        for (int r = 0; r < slots_; ++r) {
            const std::uint8_t l = k.slot[r] & kLabel;
            if (map[l] == 0xff) map[l] = next++;
            k.slot[r] = static_cast<std::uint8_t>((k.slot[r] & ~kLabel) | map[l]);
        }
        return k;
    }

    void emit(StateMap& out, const FrontierKey& k, double w) {
        if (w == 0.0) return;
        out[canonical(k)].add(w);
    }

    // Joins the blocks of two slots, OR-ing their flags. Returns false if the merge is fatal.
    bool merge(FrontierKey& k, int r1, int r2) const {
        const std::uint8_t la = k.slot[r1] & kLabel;
        const std::uint8_t lb = k.slot[r2] & kLabel;
        const std::uint8_t flags = (k.slot[r1] | k.slot[r2]) & ~kLabel;
        if ((flags & (kHasX | kHasY)) && (flags & kBoundary)) return false;
        for (int r = 0; r < slots_; ++r) {
            const std::uint8_t l = k.slot[r] & kLabel;
            if (l == la || l == lb) k.slot[r] = static_cast<std::uint8_t>(la | flags);
        }
        return true;
    }

    // Vertical (across-frontier) edge between slots r-1 and r of the current column.
    void across_edge(int r) {
        StateMap out;
        out.reserve(states_.size() * 2);
        for (const auto& [k, acc] : states_) {
            const double w = acc.value();
            emit(out, k, w * (1.0 - p_across_));
            FrontierKey m = k;
            if (merge(m, r - 1, r)) emit(out, m, w * p_across_);
        }
        commit(out);
    }

    // Edge from the previous column's vertex in slot r to the new vertex in the same row.
    void along_edge(int r, std::uint8_t new_flags) {
        StateMap out;
        out.reserve(states_.size() * 2);
        for (const auto& [k, acc] : states_) {
            const double w = acc.value();
            // Open: the new vertex joins the block, which stays on the frontier.
            {
                FrontierKey m = k;
                const std::uint8_t label = k.slot[r] & kLabel;
                const std::uint8_t flags = (k.slot[r] | new_flags) & ~kLabel;
                if (!((flags & (kHasX | kHasY)) && (flags & kBoundary))) {
                    for (int s = 0; s < slots_; ++s)
                        if ((m.slot[s] & kLabel) == label) m.slot[s] = static_cast<std::uint8_t>(label | flags);
                    emit(out, m, w * p_along_);
                }
            }
            // Closed: the old vertex leaves the frontier; its block may be complete.
            {
                const std::uint8_t old = k.slot[r];
                bool shared = false;
                for (int s = 0; s < slots_; ++s)
                    if (s != r && (k.slot[s] & kLabel) == (old & kLabel)) shared = true;
                const double wc = w * (1.0 - p_along_);
                if (!shared && (old & kHasX)) {
                    if (old & kHasY) success_.add(wc);
                    continue;
                }
                if (!shared && (old & kHasY)) continue;
                FrontierKey m = k;
                m.slot[r] = static_cast<std::uint8_t>(kFresh | new_flags);
                emit(out, m, wc);
            }
        }
        commit(out);
    }

    void commit(StateMap& out) {
        states_.swap(out);
        peak_ = std::max(peak_, states_.size());
    }

    int slots_;
    double p_along_;
    double p_across_;
    StateMap states_;
    detail::CompensatedSum success_;
    std::size_t peak_ = 0;
};

}  // namespace

ExactResult tau_fN_transfer(const LatticeRegion& region, const Params& params, Vertex x, Vertex y,
                            const ExactLimits& limits) {
    const auto t0 = Clock::now();
    require_interior(region, x);
    require_interior(region, y);

    // Sweep along the longer side so the frontier is the shorter one.
    const bool transposed = region.height() > region.width();
    const int columns = transposed ? region.height() : region.width();
    const int slots = transposed ? region.width() : region.height();
    if (slots > limits.max_frontier || slots > 15)
        throw BudgetExceeded("transfer matrix frontier of " + std::to_string(slots) + " vertices exceeds the cap of " +
                             std::to_string(std::min(limits.max_frontier, 15)));

    auto vertex = [&](int c, int r) -> Vertex {
        return transposed ? Vertex{region.x_lo() + r, region.y_lo() + c} : Vertex{region.x_lo() + c, region.y_lo() + r};
    };
    auto flags_of_column = [&](int c) {
        std::vector<std::uint8_t> f(static_cast<std::size_t>(slots), 0);
        for (int r = 0; r < slots; ++r) {
            const Vertex v = vertex(c, r);
            if (region.on_internal_boundary(v)) f[r] |= kBoundary;
            if (v == x) f[r] |= kHasX;
            if (v == y) f[r] |= kHasY;
        }
        return f;
    };

    FrontierSweep sweep(slots, transposed ? params.p_v() : params.p_h(), transposed ? params.p_h() : params.p_v());
    sweep.first_column(flags_of_column(0));
    for (int c = 1; c < columns; ++c) sweep.next_column(flags_of_column(c));
    sweep.finish();

    auto r = make_result(sweep.success(), Engine::transfer_matrix, region, params, x, y);
    r.runtime_ms = elapsed_ms(t0);
    return r;
}

// ---------------------------------------------------------------------------

PartitionReport partition_identity_check(const LatticeRegion& region, const Params& params) {
    const std::size_t n_edges = region.edge_count();
    if (n_edges > 24)
        throw BudgetExceeded("partition identity summation is capped at 24 edges, region has " +
                             std::to_string(n_edges));
    const std::size_t e_h = region.horizontal_edge_count();
    const std::size_t e_v = region.vertical_edge_count();
    const double lh = params.lambda_h();
    const double lv = params.lambda_v();
    std::vector<double> pow_h(e_h + 1, 1.0), pow_v(e_v + 1, 1.0);
    for (std::size_t i = 1; i <= e_h; ++i) pow_h[i] = pow_h[i - 1] * lh;
    for (std::size_t i = 1; i <= e_v; ++i) pow_v[i] = pow_v[i - 1] * lv;

    const std::uint64_t h_mask = (std::uint64_t{1} << e_h) - 1;
    detail::CompensatedSum sum;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << n_edges); ++c)
        sum.add(pow_h[std::popcount(c & h_mask)] * pow_v[std::popcount(c & ~h_mask)]);

    PartitionReport r;
    r.region = region;
    r.sum = sum.value();
    r.expected = std::pow(params.p_h(), -static_cast<double>(e_h)) * std::pow(params.p_v(), -static_cast<double>(e_v));
    r.rel_error = std::abs(r.sum - r.expected) / r.expected;
    r.holds = r.rel_error <= 1e-10;

    if (n_edges <= 16) {
        const Rational ph(params.p_h()), pv(params.p_v());
        const Rational rlh = (1 - ph) / ph, rlv = (1 - pv) / pv;
        std::vector<Rational> rpow_h(e_h + 1, Rational(1)), rpow_v(e_v + 1, Rational(1));
        for (std::size_t i = 1; i <= e_h; ++i) rpow_h[i] = rpow_h[i - 1] * rlh;
        for (std::size_t i = 1; i <= e_v; ++i) rpow_v[i] = rpow_v[i - 1] * rlv;
        Rational exact_sum = 0;
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << n_edges); ++c)
            exact_sum += rpow_h[std::popcount(c & h_mask)] * rpow_v[std::popcount(c & ~h_mask)];
        Rational expected = 1;
        for (std::size_t i = 0; i < e_h; ++i) expected /= ph;
        for (std::size_t i = 0; i < e_v; ++i) expected /= pv;
        r.rational_checked = true;
        r.rational_holds = exact_sum == expected;
    }
    return r;
}

MonotonicityReport tau_fN_monotonicity_probe(const Params& params, Vertex x, Vertex y,
                                             std::span<const LatticeRegion> regions, const ExactLimits& limits) {
    MonotonicityReport report;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto& r = regions[i];
        if (i > 0) {
            const auto& prev = regions[i - 1];
            if (r.x_lo() > prev.x_lo() || r.x_hi() < prev.x_hi() || r.y_lo() > prev.y_lo() || r.y_hi() < prev.y_hi())
                throw UsageError("monotonicity probe needs nested regions");
        }
        const bool brute = r.edge_count() <= std::min<std::size_t>(limits.max_edges, 20);
        report.results.push_back(brute ? tau_fN_bruteforce(r, params, x, y, limits)
                                       : tau_fN_transfer(r, params, x, y, limits));
    }
    report.nondecreasing = true;
    for (std::size_t i = 1; i < report.results.size(); ++i) {
        const double a = report.results[i - 1].value;
        const double b = report.results[i].value;
        if (b < a * (1.0 - 1e-12)) report.nondecreasing = false;
    }
    return report;
}

}  // namespace aniso
