#include "aniso/mc_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "aniso/detail/union_find.hpp"
#include "aniso/errors.hpp"

namespace aniso {

std::string to_string(CiMethod m) { return m == CiMethod::normal ? "normal" : "wilson"; }

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kBlock = 4096;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void require_interior(const LatticeRegion& region, Vertex v) {
    if (!region.is_interior(v))
        throw UsageError("vertex " + to_string(v) + " is not in the interior of region " + to_string(region));
}

// Flattened region: edge endpoints, frame flags and per-edge open probabilities.
struct Layout {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
    std::vector<double> p_open;
    std::vector<std::uint8_t> frame;
    std::size_t vertices = 0;

    Layout(const LatticeRegion& region, const Params& params) : vertices(region.vertex_count()) {
        for (std::size_t i = 0; i < region.edge_count(); ++i) {
            const Edge e = region.edge_at(i);
            ends.emplace_back(static_cast<std::uint32_t>(region.vertex_index(e.from)),
                              static_cast<std::uint32_t>(region.vertex_index(e.to())));
            p_open.push_back(e.is_horizontal() ? params.p_h() : params.p_v());
        }
        for (std::size_t v = 0; v < vertices; ++v)
            frame.push_back(region.on_internal_boundary(region.vertex_at(v)) ? 1 : 0);
    }
};

// Per-thread scratch: one sample at a time.
struct Sampler {
    const Layout& layout;
    detail::UnionFind uf;
    std::vector<std::uint8_t> open;
    std::vector<std::uint8_t> touches;

    explicit Sampler(const Layout& l) : layout(l), uf(l.vertices), open(l.ends.size()), touches(l.vertices) {}

    void draw(std::uint64_t seed, std::uint64_t index) {
        auto rng = SampleRng::for_sample(seed, index);
        for (std::size_t e = 0; e < open.size(); ++e) open[e] = rng.uniform() < layout.p_open[e] ? 1 : 0;
    }

    // Clusters of the current open-edge vector.
    void label(const std::vector<std::uint8_t>& edges_open) {
        uf.reset();
        for (std::size_t e = 0; e < edges_open.size(); ++e)
            if (edges_open[e]) uf.unite(layout.ends[e].first, layout.ends[e].second);
        std::fill(touches.begin(), touches.end(), 0);
        for (std::uint32_t v = 0; v < layout.vertices; ++v)
            if (layout.frame[v]) touches[uf.find(v)] = 1;
    }

    bool event(std::uint32_t a, std::uint32_t b) {
        const auto r = uf.find(a);
        return r == uf.find(b) && !touches[r];
    }
};

unsigned resolve_threads(unsigned requested, std::uint64_t n) {
    const unsigned hw = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(hw, (n + kBlock - 1) / kBlock)));
}

// Runs body(thread_state, index) over [0, n) in fixed blocks; the per-thread totals are
// integer counts so the merged result does not depend on the schedule.
template <class State, class Body>
std::vector<State> run_blocks(std::uint64_t n, unsigned threads, const State& init, Body body) {
    std::vector<State> states(threads, init);
    const std::uint64_t blocks = (n + kBlock - 1) / kBlock;
    auto work = [&](unsigned t) {
        for (std::uint64_t b = t; b < blocks; b += threads)
            for (std::uint64_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) body(states[t], t, i);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    return states;
}

}  // namespace

Configuration sample_config(const LatticeRegion& region, const Params& params, SampleRng& rng) {
    Configuration c(region);
    for (std::size_t i = 0; i < region.edge_count(); ++i) {
        const double p = region.edge_at(i).is_horizontal() ? params.p_h() : params.p_v();
        c.set_closed(i, !(rng.uniform() < p));
    }
    return c;
}

Estimate make_estimate(std::uint64_t successes, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw UsageError("an estimate needs at least one sample");
    Estimate e;
    e.successes = successes;
    e.n_samples = n;
    e.seed = seed;
    const double nn = static_cast<double>(n);
    e.p_hat = static_cast<double>(successes) / nn;
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / nn);
    if (successes < 30 || n - successes < 30) {
        e.ci_method = CiMethod::wilson;
        const double z2 = kZ95 * kZ95;
        const double centre = (e.p_hat + z2 / (2 * nn)) / (1 + z2 / nn);
        const double half = kZ95 / (1 + z2 / nn) * std::sqrt(e.p_hat * (1 - e.p_hat) / nn + z2 / (4 * nn * nn));
        e.ci_lo = centre - half;
        e.ci_hi = centre + half;
    } else {
        e.ci_method = CiMethod::normal;
        e.ci_lo = e.p_hat - kZ95 * e.std_err;
        e.ci_hi = e.p_hat + kZ95 * e.std_err;
    }
    e.ci_lo = std::clamp(e.ci_lo, 0.0, 1.0);
    e.ci_hi = std::clamp(e.ci_hi, 0.0, 1.0);
    return e;
}

Estimate estimate_tau_fN(const LatticeRegion& region, const Params& params, Vertex x, Vertex y, std::uint64_t n,
                         std::uint64_t seed, const McOptions& opts) {
    const auto t0 = Clock::now();
    if (n == 0) throw UsageError("n must be at least 1");
    require_interior(region, x);
    require_interior(region, y);
    const Layout layout(region, params);
    const auto xi = static_cast<std::uint32_t>(region.vertex_index(x));
    const auto yi = static_cast<std::uint32_t>(region.vertex_index(y));

    const unsigned threads = resolve_threads(opts.threads, n);
    std::vector<Sampler> samplers;
    for (unsigned t = 0; t < threads; ++t) samplers.emplace_back(layout);
    const auto hits = run_blocks<std::uint64_t>(n, threads, 0, [&](std::uint64_t& acc, unsigned t, std::uint64_t i) {
        auto& s = samplers[t];
        s.draw(seed, i);
        s.label(s.open);
        acc += s.event(xi, yi) ? 1 : 0;
    });
    std::uint64_t total = 0;
    for (const auto h : hits) total += h;
    auto e = make_estimate(total, n, seed);
    e.runtime_ms = elapsed_ms(t0);
    return e;
}

PairedEstimate estimate_pair_difference(const LatticeRegion& region, const Params& params, Vertex x, std::uint64_t n,
                                        std::uint64_t seed, const McOptions& opts) {
    const auto t0 = Clock::now();
    if (n == 0) throw UsageError("n must be at least 1");
    if (!region.is_diagonally_symmetric())
        throw UsageError("paired estimation needs a region symmetric under the diagonal reflection, got " +
                         to_string(region));
    const Vertex origin{0, 0};
    const Vertex xp = reflect(x);
    require_interior(region, origin);
    require_interior(region, x);
    require_interior(region, xp);

    const Layout layout(region, params);
    const auto oi = static_cast<std::uint32_t>(region.vertex_index(origin));
    const auto xi = static_cast<std::uint32_t>(region.vertex_index(x));
    const auto xpi = static_cast<std::uint32_t>(region.vertex_index(xp));
    // Edge index of each edge's mirror image; the region maps onto itself.
    std::vector<std::size_t> mirror(region.edge_count());
    for (std::size_t i = 0; i < mirror.size(); ++i) mirror[i] = region.edge_index(reflect(region.edge_at(i)));

    struct Counts {
        std::uint64_t x = 0, xp = 0, only_x = 0, only_xp = 0, mismatch = 0;
    };
    const unsigned threads = resolve_threads(opts.threads, n);
    std::vector<Sampler> samplers;
    for (unsigned t = 0; t < threads; ++t) samplers.emplace_back(layout);
    std::vector<std::vector<std::uint8_t>> mirrored(threads, std::vector<std::uint8_t>(mirror.size()));

    const auto parts = run_blocks<Counts>(n, threads, {}, [&](Counts& c, unsigned t, std::uint64_t i) {
        auto& s = samplers[t];
        s.draw(seed, i);
        s.label(s.open);
        const bool a = s.event(oi, xi);
        const bool b = s.event(oi, xpi);
        auto& m = mirrored[t];
        for (std::size_t e = 0; e < m.size(); ++e) m[mirror[e]] = s.open[e];
        s.label(m);
        const bool control = s.event(oi, xpi);
        c.x += a;
        c.xp += b;
        c.only_x += a && !b;
        c.only_xp += b && !a;
        c.mismatch += control != a;
    });
    Counts total;
    for (const auto& c : parts) {
        total.x += c.x;
        total.xp += c.xp;
        total.only_x += c.only_x;
        total.only_xp += c.only_xp;
        total.mismatch += c.mismatch;
    }

    PairedEstimate r;
    r.n_samples = n;
    r.seed = seed;
    r.x_event = make_estimate(total.x, n, seed);
    r.xprime_event = make_estimate(total.xp, n, seed);
    r.only_x = total.only_x;
    r.only_xprime = total.only_xp;
    r.reflection_mismatches = total.mismatch;
    const double nn = static_cast<double>(n);
    r.d_hat = (static_cast<double>(total.only_x) - static_cast<double>(total.only_xp)) / nn;
    if (n < 2) {
        r.std_err = std::numeric_limits<double>::infinity();
    } else {
        const double second = static_cast<double>(total.only_x + total.only_xp) / nn;
        const double var = std::max(0.0, (second - r.d_hat * r.d_hat) * nn / (nn - 1));
        r.std_err = std::sqrt(var / nn);
    }
    r.ci_lo = std::max(-1.0, r.d_hat - kZ95 * r.std_err);
    r.ci_hi = std::min(1.0, r.d_hat + kZ95 * r.std_err);
    r.runtime_ms = elapsed_ms(t0);
    return r;
}

}  // namespace aniso
