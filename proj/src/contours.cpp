#include "aniso/contours.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "aniso/errors.hpp"

namespace aniso {

std::string to_string(const DualVertex& v) {
    return "(" + std::to_string(v.a) + "-1/2," + std::to_string(v.b) + "-1/2)";
}

DualVertex step(DualVertex v, char letter) {
    switch (letter) {
        case 'R': return {v.a + 1, v.b};
        case 'L': return {v.a - 1, v.b};
        case 'U': return {v.a, v.b + 1};
        case 'D': return {v.a, v.b - 1};
        default: throw UsageError(std::string("invalid dual step letter '") + letter + "'");
    }
}

Edge crossed_edge(DualVertex v, char letter) {
    switch (letter) {
        case 'U': return {{v.a - 1, v.b}, EdgeKind::horizontal};
        case 'D': return {{v.a - 1, v.b - 1}, EdgeKind::horizontal};
        case 'R': return {{v.a, v.b - 1}, EdgeKind::vertical};
        case 'L': return {{v.a - 1, v.b - 1}, EdgeKind::vertical};
        default: throw UsageError(std::string("invalid dual step letter '") + letter + "'");
    }
}

namespace {

constexpr char inverse_letter(char c) {
    switch (c) {
        case 'R': return 'L';
        case 'L': return 'R';
        case 'U': return 'D';
        default: return 'U';
    }
}

struct DualHash {
    std::size_t operator()(const DualVertex& v) const noexcept { return std::hash<Vertex>{}({v.a, v.b}); }
};

// Dual endpoints of the dual edge crossing a primal edge.
std::pair<DualVertex, DualVertex> dual_endpoints(const Edge& e) {
    if (e.is_horizontal()) return {{e.from.x + 1, e.from.y}, {e.from.x + 1, e.from.y + 1}};
    return {{e.from.x, e.from.y + 1}, {e.from.x + 1, e.from.y + 1}};
}

// Vertices visited by a closed self-avoiding walk, without the repeated endpoint.
std::vector<DualVertex> trace_circuit(DualVertex base, std::string_view word) {
    if (word.size() < 4) throw UsageError("a dual circuit has at least 4 steps");
    std::vector<DualVertex> path;
    path.reserve(word.size());
    std::unordered_set<DualVertex, DualHash> seen;
    DualVertex cur = base;
    for (const char c : word) {
        if (!seen.insert(cur).second) throw UsageError("dual word is not self-avoiding");
        path.push_back(cur);
        cur = step(cur, c);
    }
    if (cur != base) throw UsageError("dual word is not closed");
    return path;
}

std::vector<Edge> edges_of_walk(DualVertex base, std::string_view word) {
    std::vector<Edge> edges;
    edges.reserve(word.size());
    DualVertex cur = base;
    for (const char c : word) {
        edges.push_back(crossed_edge(cur, c));
        cur = step(cur, c);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

// Parity of crossings of the leftward ray from v with the horizontal edges of a closed curve.
bool encloses(std::span<const Edge> edges, Vertex v) {
    bool inside = false;
    for (const auto& e : edges) {
        if (e.is_horizontal() && e.from.y == v.y && e.from.x < v.x) inside = !inside;
    }
    return inside;
}

}  // namespace

// ---------------------------------------------------------------------------

ContourCheck is_contour(std::span<const Edge> input) {
    ContourCheck result;
    if (input.empty()) return result;
    std::vector<Edge> edges(input.begin(), input.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    int xmin = edges.front().from.x, xmax = xmin, ymin = edges.front().from.y, ymax = ymin;
    for (const auto& e : edges) {
        const Vertex t = e.to();
        xmin = std::min(xmin, e.from.x);
        xmax = std::max(xmax, t.x);
        ymin = std::min(ymin, e.from.y);
        ymax = std::max(ymax, t.y);
    }
    // Pad by one so the frame is connected to infinity without crossing any edge.
    --xmin, --ymin, ++xmax, ++ymax;
    const int w = xmax - xmin + 1;
    const int h = ymax - ymin + 1;
    auto idx = [&](int x, int y) { return static_cast<std::size_t>(y - ymin) * w + (x - xmin); };
    std::vector<std::uint8_t> cut_right(static_cast<std::size_t>(w) * h, 0), cut_up(cut_right.size(), 0);
    for (const auto& e : edges) (e.is_horizontal() ? cut_right : cut_up)[idx(e.from.x, e.from.y)] = 1;

    std::vector<int> label(cut_right.size(), -1);
    std::vector<Vertex> stack;
    auto flood = [&](Vertex seed, int id) {
        label[idx(seed.x, seed.y)] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            auto visit = [&](int nx, int ny, bool blocked) {
                if (blocked || nx < xmin || nx > xmax || ny < ymin || ny > ymax) return;
                auto& l = label[idx(nx, ny)];
                if (l != -1) return;
                l = id;
                stack.push_back({nx, ny});
            };
            visit(v.x + 1, v.y, v.x < xmax && cut_right[idx(v.x, v.y)]);
            visit(v.x - 1, v.y, v.x > xmin && cut_right[idx(v.x - 1, v.y)]);
            visit(v.x, v.y + 1, v.y < ymax && cut_up[idx(v.x, v.y)]);
            visit(v.x, v.y - 1, v.y > ymin && cut_up[idx(v.x, v.y - 1)]);
        }
    };
    flood({xmin, ymin}, 0);

    int finite = 0;
    for (int y = ymin; y <= ymax; ++y) {
        for (int x = xmin; x <= xmax; ++x) {
            if (label[idx(x, y)] == -1) {
                if (++finite > 1) return result;
                flood({x, y}, 1);
            }
        }
    }
    if (finite != 1) return result;

    for (const auto& e : edges) {
        const Vertex t = e.to();
        const bool a = label[idx(e.from.x, e.from.y)] == 1;
        const bool b = label[idx(t.x, t.y)] == 1;
        if (a == b) return result;
    }
    result.valid = true;
    for (int y = ymin; y <= ymax; ++y)
        for (int x = xmin; x <= xmax; ++x)
            if (label[idx(x, y)] == 1) result.interior.push_back({x, y});
    std::sort(result.interior.begin(), result.interior.end());
    return result;
}

std::optional<Contour> as_contour(std::span<const Edge> edges) {
    auto check = is_contour(edges);
    if (!check.valid) return std::nullopt;
    Contour c;
    c.edges_.assign(edges.begin(), edges.end());
    std::sort(c.edges_.begin(), c.edges_.end());
    c.edges_.erase(std::unique(c.edges_.begin(), c.edges_.end()), c.edges_.end());
    c.interior_ = std::move(check.interior);
    for (const auto& e : c.edges_) (e.is_horizontal() ? c.h_count_ : c.v_count_)++;
    return c;
}

bool Contour::surrounds(Vertex v) const { return std::binary_search(interior_.begin(), interior_.end(), v); }

bool Contour::contains(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

// ---------------------------------------------------------------------------

DualCircuit dual_of(const Contour& contour) {
    std::unordered_map<DualVertex, std::vector<DualVertex>, DualHash> adj;
    for (const auto& e : contour.edges()) {
        const auto [p, q] = dual_endpoints(e);
        adj[p].push_back(q);
        adj[q].push_back(p);
    }
    DualVertex base = adj.begin()->first;
    for (const auto& [v, nbrs] : adj) {
        if (nbrs.size() != 2) throw UsageError("dual of the edge set is not a circuit");
        if (v < base) base = v;
    }
    // The lowest vertex of the leftmost column has neighbours above and to the right.
    DualCircuit circuit{base, {}};
    DualVertex prev = base;
    DualVertex cur = {base.a + 1, base.b};
    circuit.word.push_back('R');
    while (cur != base) {
        const auto& nbrs = adj.at(cur);
        const DualVertex next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
        const int da = next.a - cur.a;
        const int db = next.b - cur.b;
        circuit.word.push_back(da == 1 ? 'R' : da == -1 ? 'L' : db == 1 ? 'U' : 'D');
        prev = cur;
        cur = next;
    }
    if (circuit.word.size() != contour.edges().size())
        throw UsageError("dual of the edge set is not a single circuit");
    return circuit;
}

std::vector<Edge> primal_of(const DualCircuit& circuit) {
    trace_circuit(circuit.base, circuit.word);
    return edges_of_walk(circuit.base, circuit.word);
}

DualCircuit word_decode(DualVertex base, std::string_view word) {
    trace_circuit(base, word);
    return {base, std::string(word)};
}

DualCircuit word_encode(const DualCircuit& circuit) {
    const auto path = trace_circuit(circuit.base, circuit.word);
    const std::size_t n = path.size();
    std::optional<std::size_t> best;
    int best_k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const char c = circuit.word[i];
        const DualVertex v = path[i];
        const bool crossing = (c == 'U' && v.b == 0) || (c == 'D' && v.b == 1);
        if (crossing && (!best || v.a < best_k)) {
            best = i;
            best_k = v.a;
        }
    }
    if (!best || best_k > 0) throw UsageError("circuit does not cross the x-axis at or left of the origin");

    std::string word(n, ' ');
    const std::size_t i0 = *best;
    if (circuit.word[i0] == 'U') {
        for (std::size_t j = 0; j < n; ++j) word[j] = circuit.word[(i0 + j) % n];
    } else {
        // Traverse backwards starting from the lower end of the crossing edge.
        for (std::size_t j = 0; j < n; ++j) word[j] = inverse_letter(circuit.word[(i0 + n - j) % n]);
    }
    return {{best_k, 0}, word};
}

// ---------------------------------------------------------------------------

std::array<Edge, 4> corner_set(Vertex x) {
    return {Edge{{-1, 0}, EdgeKind::horizontal}, Edge{{0, -1}, EdgeKind::vertical}, Edge{x, EdgeKind::vertical},
            Edge{x, EdgeKind::horizontal}};
}

namespace {

void require_positive(Vertex x) {
    if (x.x <= 0 || x.y <= 0) throw UsageError("target vertex needs positive coordinates, got " + to_string(x));
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

BigInt beta(Vertex x) {
    require_positive(x);
    // Both dual paths take `steps` unit steps; after t steps each sits on the
    // anti-diagonal a + b = t, so the pair is described by (t, a_upper, a_lower).
    const int right = x.x + 1;
    const int up = x.y + 1;
    const int steps = right + up;
    const int span = right + 1;
    auto at = [span](int au, int al) { return static_cast<std::size_t>(au) * span + al; };
    std::vector<BigInt> cur(static_cast<std::size_t>(span) * span), next(cur.size());
    cur[at(0, 1)] = 1;  // upper path opens with U, lower with R
    for (int t = 1; t < steps; ++t) {
        std::fill(next.begin(), next.end(), BigInt(0));
        const bool last = t + 1 == steps;
        for (int au = 0; au <= right; ++au) {
            for (int al = au + 1; al <= right; ++al) {
                const BigInt& w = cur[at(au, al)];
                if (w == 0) continue;
                for (int du = 0; du <= 1; ++du) {
                    for (int dl = 0; dl <= 1; ++dl) {
                        const int nu = au + du, nl = al + dl;
                        if (nu > right || nl > right || t + 1 - nu > up || t + 1 - nl > up) continue;
                        if (last ? (nu != right || nl != right) : nu >= nl) continue;
                        if (last)
                            next[at(0, 0)] += w;  // parked: the only terminal state
                        else
                            next[at(nu, nl)] += w;
                    }
                }
            }
        }
        std::swap(cur, next);
        if (last) return cur[at(0, 0)];
    }
    return 0;
}

BigInt beta_lgv(Vertex x) {
    require_positive(x);
    // Upper path (0,1) -> (x1, x2+1), lower path (1,0) -> (x1+1, x2).
    auto paths = [](int a0, int b0, int a1, int b1) { return binomial((a1 - a0) + (b1 - b0), a1 - a0); };
    return paths(0, 1, x.x, x.y + 1) * paths(1, 0, x.x + 1, x.y) - paths(0, 1, x.x + 1, x.y) * paths(1, 0, x.x, x.y + 1);
}

BigInt beta_narayana(Vertex x) {
    require_positive(x);
    const int n = x.x + x.y + 1;
    const int k = x.x + 1;
    return binomial(n, k) * binomial(n, k - 1) / n;
}

std::vector<Contour> minimal_contours(Vertex x) {
    require_positive(x);
    const int right = x.x + 1;
    const int up = x.y + 1;
    std::string w(static_cast<std::size_t>(right), 'R');
    w.append(static_cast<std::size_t>(up), 'U');
    std::sort(w.begin(), w.end());
    std::vector<std::string> uppers, lowers;
    do {
        if (w.front() == 'U' && w.back() == 'R') uppers.push_back(w);
        if (w.front() == 'R' && w.back() == 'U') lowers.push_back(w);
    } while (std::next_permutation(w.begin(), w.end()));

    auto vertices = [](const std::string& word) {
        std::vector<DualVertex> vs;
        DualVertex cur{0, 0};
        for (std::size_t i = 0; i + 1 < word.size(); ++i) {
            cur = step(cur, word[i]);
            vs.push_back(cur);
        }
        std::sort(vs.begin(), vs.end());
        return vs;
    };
    std::vector<std::vector<DualVertex>> lower_vs;
    lower_vs.reserve(lowers.size());
    for (const auto& l : lowers) lower_vs.push_back(vertices(l));

    std::vector<Contour> out;
    for (const auto& u : uppers) {
        const auto uv = vertices(u);
        for (std::size_t j = 0; j < lowers.size(); ++j) {
            const auto& lv = lower_vs[j];
            std::vector<DualVertex> common;
            std::set_intersection(uv.begin(), uv.end(), lv.begin(), lv.end(), std::back_inserter(common));
            if (!common.empty()) continue;
            std::string word = u;
            for (auto it = lowers[j].rbegin(); it != lowers[j].rend(); ++it) word.push_back(inverse_letter(*it));
            const auto edges = primal_of({{0, 0}, word});
            auto c = as_contour(edges);
            if (!c) throw std::logic_error("non-intersecting path pair did not produce a contour");
            out.push_back(std::move(*c));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Census search

namespace {

std::string edge_key(std::span<const Edge> sorted_edges) {
    std::string key;
    key.reserve(sorted_edges.size() * 5);
    for (const auto& e : sorted_edges) {
        const auto x = static_cast<std::uint16_t>(e.from.x);
        const auto y = static_cast<std::uint16_t>(e.from.y);
        key.push_back(static_cast<char>(x & 0xff));
        key.push_back(static_cast<char>(x >> 8));
        key.push_back(static_cast<char>(y & 0xff));
        key.push_back(static_cast<char>(y >> 8));
        key.push_back(e.is_horizontal() ? 'h' : 'v');
    }
    return key;
}

struct Found {
    int n;
    int anchor;
    std::string key;
    std::optional<Contour> member;
};

struct WorkItem {
    int anchor;
    std::string prefix;  // letters after the opening U
};

class CircuitSearch {
public:
    CircuitSearch(Vertex x, int n_max, std::atomic<std::uint64_t>& shared_nodes, std::uint64_t budget, bool keep)
        : x_(x), n_max_(n_max), need_a_(x.x + 1), need_b_(x.y + 1), shared_nodes_(shared_nodes),
          budget_(budget), keep_(keep), origin_(-n_max - 2), side_(2 * n_max + 5),
          visited_(static_cast<std::size_t>(side_) * side_, 0) {}

    // Enumerates prefixes of `depth` letters after the opening U, or closes early.
    void collect_prefixes(int anchor, int depth, std::vector<WorkItem>& items) {
        begin(anchor);
        prefix_depth_ = depth;
        prefix_sink_ = &items;
        dfs({anchor, 1}, 1, false, false);
        prefix_sink_ = nullptr;
        end();
    }

    void run(const WorkItem& item) {
        begin(item.anchor);
        DualVertex cur{item.anchor, 1};
        bool ra = false, rb = cur.b >= need_b_;
        std::vector<DualVertex> marked;
        for (const char c : item.prefix) {
            cur = step(cur, c);
            mark(cur, true);
            marked.push_back(cur);
            letters_.push_back(c);
            ra = ra || cur.a >= need_a_;
            rb = rb || cur.b >= need_b_;
        }
        dfs(cur, 1 + static_cast<int>(item.prefix.size()), ra, rb);
        for (const auto& v : marked) mark(v, false);
        letters_.clear();
        end();
    }

    void flush_nodes() {
        shared_nodes_.fetch_add(local_nodes_);
        local_nodes_ = 0;
    }

    std::vector<Found> found;
    std::uint64_t rejected = 0;

private:
    void begin(int anchor) {
        anchor_ = anchor;
        start_ = {anchor, 0};
        mark(start_, true);
        mark({anchor, 1}, true);
        letters_.assign(1, 'U');
    }
    void end() {
        mark(start_, false);
        mark({anchor_, 1}, false);
        letters_.clear();
    }

    [[nodiscard]] std::size_t cell(DualVertex v) const {
        return static_cast<std::size_t>(v.b - origin_) * side_ + static_cast<std::size_t>(v.a - anchor_ - origin_);
    }
    [[nodiscard]] bool in_grid(DualVertex v) const {
        const int da = v.a - anchor_ - origin_;
        const int db = v.b - origin_;
        return da >= 0 && db >= 0 && da < side_ && db < side_;
    }
    void mark(DualVertex v, bool on) { visited_[cell(v)] = on ? 1 : 0; }

    // Fewest steps from `v` that still reach column need_a and row need_b (if not yet
    // reached) and return to the start vertex.
    [[nodiscard]] int remaining_lower_bound(DualVertex v, bool ra, bool rb) const {
        const int horiz = ra ? std::abs(v.a - start_.a)
                             : std::max(0, need_a_ - v.a) + (std::max(v.a, need_a_) - start_.a);
        const int vert = rb ? std::abs(v.b - start_.b)
                            : std::max(0, need_b_ - v.b) + (std::max(v.b, need_b_) - start_.b);
        return horiz + vert;
    }

    void tick() {
        if (++local_nodes_ >= 4096) {
            const auto total = shared_nodes_.fetch_add(local_nodes_) + local_nodes_;
            local_nodes_ = 0;
            if (total > budget_)
                throw BudgetExceeded("contour census exceeded its budget of " + std::to_string(budget_) +
                                     " search nodes");
        }
    }

    void dfs(DualVertex cur, int depth, bool ra, bool rb) {
        tick();
        if (prefix_sink_ && depth - 1 == prefix_depth_) {
            prefix_sink_->push_back({anchor_, letters_.substr(1)});
            return;
        }
        static constexpr char kLetters[4] = {'U', 'R', 'D', 'L'};
        for (const char c : kLetters) {
            // The opening edge is the leftmost x-axis crossing: no crossing further left.
            if (cur.a < anchor_ && ((c == 'U' && cur.b == 0) || (c == 'D' && cur.b == 1))) continue;
            const DualVertex next = step(cur, c);
            const int nd = depth + 1;
            if (next == start_) {
                if (nd >= 4 && ra && rb) {
                    letters_.push_back(c);
                    record();
                    letters_.pop_back();
                }
                continue;
            }
            if (!in_grid(next) || visited_[cell(next)]) continue;
            const bool nra = ra || next.a >= need_a_;
            const bool nrb = rb || next.b >= need_b_;
            if (nd + remaining_lower_bound(next, nra, nrb) > n_max_) continue;
            mark(next, true);
            letters_.push_back(c);
            dfs(next, nd, nra, nrb);
            letters_.pop_back();
            mark(next, false);
        }
    }

    void record() {
        const auto edges = edges_of_walk(start_, letters_);
        if (!encloses(edges, {0, 0}) || !encloses(edges, x_)) return;
        auto contour = as_contour(edges);
        if (!contour) {
            ++rejected;
            return;
        }
        Found f{static_cast<int>(letters_.size()), anchor_, edge_key(edges), std::nullopt};
        if (keep_) f.member = std::move(contour);
        found.push_back(std::move(f));
    }

    Vertex x_;
    int n_max_;
    int need_a_;
    int need_b_;
    std::atomic<std::uint64_t>& shared_nodes_;
    std::uint64_t budget_;
    bool keep_;
    int origin_;
    int side_;
    std::vector<std::uint8_t> visited_;
    int anchor_ = 0;
    DualVertex start_{};
    std::string letters_;
    std::uint64_t local_nodes_ = 0;
    int prefix_depth_ = 0;
    std::vector<WorkItem>* prefix_sink_ = nullptr;
};

}  // namespace

const BigInt& ContourCensus::count(int n) const {
    const auto it = counts.find(n);
    if (it == counts.end()) throw UsageError("census does not cover n = " + std::to_string(n));
    return it->second;
}

ContourCensus census(Vertex x, int n_max, const CensusOptions& options) {
    require_positive(x);
    const int norm = norm_x(x);
    if (n_max < norm)
        throw UsageError("census needs n_max >= ||x|| = " + std::to_string(norm) + ", got " + std::to_string(n_max));

    ContourCensus out;
    out.x = x;
    out.n_max = n_max;
    // A circuit with leftmost crossing k spans at least x1 + 1 - k columns and
    // x2 + 1 rows, so its length is at least norm - 2k.
    const int k_min = -((n_max - norm) / 2);

    std::atomic<std::uint64_t> nodes{0};
    std::vector<WorkItem> items;
    {
        CircuitSearch seed(x, n_max, nodes, options.node_budget, options.keep_members);
        const int prefix_depth = std::min(6, norm - 2);
        for (int k = 0; k >= k_min; --k) seed.collect_prefixes(k, prefix_depth, items);
        seed.flush_nodes();
        // Short circuits closing inside the prefix depth are impossible: norm >= 8 > prefix_depth + 1.
    }

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, items.size())));

    std::vector<std::unique_ptr<CircuitSearch>> workers;
    for (unsigned t = 0; t < threads; ++t)
        workers.push_back(std::make_unique<CircuitSearch>(x, n_max, nodes, options.node_budget, options.keep_members));

    std::atomic<std::size_t> next_item{0};
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](unsigned t) {
        try {
            for (std::size_t i = next_item++; i < items.size(); i = next_item++) workers[t]->run(items[i]);
            workers[t]->flush_nodes();
        } catch (...) {
            errors[t] = std::current_exception();
            next_item = items.size();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    out.nodes = nodes.load();
    for (int n = norm; n <= n_max; ++n) {
        out.counts[n] = 0;
        for (int k = 0; k >= std::max(k_min, -((n - norm) / 2)); --k) out.per_anchor[n][k] = 0;
    }

    // Each circuit is stored once, keyed by its sorted primal edge set.
    std::vector<Found> all;
    for (auto& w : workers) {
        out.non_contour_circuits += w->rejected;
        std::move(w->found.begin(), w->found.end(), std::back_inserter(all));
    }
    std::sort(all.begin(), all.end(), [](const Found& a, const Found& b) {
        return a.n != b.n ? a.n < b.n : a.key < b.key;
    });
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (i > 0 && all[i].n == all[i - 1].n && all[i].key == all[i - 1].key) continue;
        out.counts[all[i].n] += 1;
        out.per_anchor[all[i].n][all[i].anchor] += 1;
        if (all[i].member) out.members.push_back(std::move(*all[i].member));
    }
    out.beta = out.counts[norm];
    return out;
}

std::string census_csv(const ContourCensus& census) {
    std::ostringstream os;
    os << "x1,x2,n,count\n";
    for (const auto& [n, c] : census.counts) os << census.x.x << ',' << census.x.y << ',' << n << ',' << c << '\n';
    return os.str();
}

LemmaReport verify_counting_lemma(Vertex x, int m, const ContourCensus& census) {
    const int norm = norm_x(x);
    if (m < 0 || 2 * m > norm)
        throw UsageError("counting lemma requires 0 <= m <= ||x||/2, got m = " + std::to_string(m));
    if (census.x != x || census.n_max < norm + m)
        throw UsageError("census does not cover ||x|| + m = " + std::to_string(norm + m));
    LemmaReport r;
    r.x = x;
    r.m = m;
    r.lhs = census.count(norm + m);
    BigInt twelve_m = 1, three_m = 1;
    for (int i = 0; i < m; ++i) {
        twelve_m *= 12;
        three_m *= 3;
    }
    r.rhs = twelve_m * binomial(norm, m) * census.beta;
    r.holds = r.lhs <= r.rhs;
    r.anchor_bound = three_m * binomial(norm + m, m) * census.beta;
    r.anchors = std::max(m, 1);
    r.aggregate_bound = r.anchor_bound * r.anchors;
    r.aggregate_holds = r.lhs <= r.aggregate_bound;
    r.per_anchor_holds = true;
    if (const auto it = census.per_anchor.find(norm + m); it != census.per_anchor.end()) {
        for (const auto& [k, c] : it->second) {
            if (c > r.anchor_bound || (k <= -r.anchors && c != 0)) r.per_anchor_holds = false;
        }
    }
    return r;
}

AlphaReport alpha_sequence(int rho, int n_max) {
    if (rho < 1) throw UsageError("alpha_sequence requires an integer rho >= 1");
    if (n_max < 2) throw UsageError("alpha_sequence requires n_max >= 2");
    AlphaReport r;
    r.rho = rho;
    const double ceiling = std::pow(4.0, 1.0 + rho);
    for (int n = 1; n <= n_max; ++n) {
        AlphaRow row;
        row.n = n;
        row.alpha = beta({n, rho * n});
        row.root = std::exp(std::log(row.alpha.convert_to<long double>()) / n);
        if (row.alpha < 1 || row.root < 1.0 || row.root > ceiling) r.bound_violations.push_back(n);
        r.rows.push_back(std::move(row));
    }
    for (int n = 1; n <= n_max; ++n)
        for (int m = 1; n + m <= n_max; ++m)
            if (r.rows[n + m - 1].alpha < r.rows[n - 1].alpha * r.rows[m - 1].alpha)
                r.supermultiplicativity_violations.emplace_back(n, m);
    return r;
}

// ---------------------------------------------------------------------------

CompanionPaths companion_paths(const Contour& contour, Vertex x) {
    require_positive(x);
    const int norm = norm_x(x);
    if (!contour.surrounds({0, 0}) || !contour.surrounds(x))
        throw UsageError("contour does not surround {0, x}");
    if (contour.size() != norm || contour.h_count() != 2 * (x.y + 1) || contour.v_count() != 2 * (x.x + 1))
        throw UsageError("contour is not minimal for x = " + to_string(x));

    CompanionPaths out;
    out.q = corner_set(x);
    for (const auto& e : out.q)
        if (!contour.contains(e)) throw UsageError("minimal contour misses corner edge " + to_string(e));

    const DualCircuit circuit = dual_of(contour);
    const auto path = trace_circuit(circuit.base, circuit.word);
    const std::size_t n = path.size();
    const DualVertex u{0, 0};
    const DualVertex w{x.x + 1, x.y + 1};
    const auto iu = static_cast<std::size_t>(std::find(path.begin(), path.end(), u) - path.begin());
    if (iu == n || std::find(path.begin(), path.end(), w) == path.end())
        throw UsageError("dual circuit misses a forced corner");

    // Walk from u in both directions until w; the branch leaving u upward is c1.
    auto branch = [&](bool forward) {
        std::vector<DualVertex> vs;
        std::size_t i = iu;
        vs.push_back(path[i]);
        while (path[i] != w) {
            i = forward ? (i + 1) % n : (i + n - 1) % n;
            vs.push_back(path[i]);
        }
        return vs;
    };
    auto fwd = branch(true);
    auto bwd = branch(false);
    auto& upper = fwd[1] == DualVertex{0, 1} ? fwd : bwd;
    auto& lower = fwd[1] == DualVertex{0, 1} ? bwd : fwd;
    if (upper[1] != DualVertex{0, 1} || lower[1] != DualVertex{1, 0})
        throw UsageError("dual halves do not leave the lower-left corner as expected");

    // Drop the corner steps and translate back to the primal lattice.
    for (std::size_t i = 1; i + 1 < upper.size(); ++i) out.sigma1.push_back({upper[i].a, upper[i].b - 1});
    for (std::size_t i = 1; i + 1 < lower.size(); ++i) out.sigma2.push_back({lower[i].a - 1, lower[i].b});
    const auto path_len = static_cast<std::size_t>(x.x + x.y + 1);
    if (out.sigma1.size() != path_len || out.sigma2.size() != path_len || out.sigma1.front() != Vertex{0, 0} ||
        out.sigma1.back() != x || out.sigma2.front() != Vertex{0, 0} || out.sigma2.back() != x)
        throw std::logic_error("companion paths do not join 0 to x with minimal length");

    for (const auto* sigma : {&out.sigma1, &out.sigma2})
        for (std::size_t i = 0; i + 1 < sigma->size(); ++i) out.t.push_back(edge_between((*sigma)[i], (*sigma)[i + 1]));
    std::sort(out.t.begin(), out.t.end());
    out.t.erase(std::unique(out.t.begin(), out.t.end()), out.t.end());
    for (const auto& e : out.t) {
        (e.is_horizontal() ? out.t_h : out.t_v)++;
        if (!contour.surrounds(e.from) || !contour.surrounds(e.to()))
            throw std::logic_error("companion edge " + to_string(e) + " leaves the contour interior");
    }
    if (!(out.t_h <= 2 * x.x && 2 * x.x < contour.v_count() && out.t_v <= 2 * x.y && 2 * x.y < contour.h_count()))
        throw std::logic_error("companion set violates the size comparison with the contour");
    return out;
}

}  // namespace aniso
