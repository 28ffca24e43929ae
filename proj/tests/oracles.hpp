#pragma once
// Test-only reference computations. Nothing here calls into the library's
// enumeration or DP code paths; they work on primal vertex sets instead.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "aniso/core_model.hpp"

namespace oracle {

using aniso::Vertex;

// Size of the edge boundary of a finite vertex set.
inline int edge_boundary_size(const std::set<Vertex>& s) {
    int n = 0;
    for (const auto& v : s)
        for (const Vertex w : {Vertex{v.x + 1, v.y}, Vertex{v.x - 1, v.y}, Vertex{v.x, v.y + 1}, Vertex{v.x, v.y - 1}})
            n += s.count(w) ? 0 : 1;
    return n;
}

inline int horizontal_boundary_size(const std::set<Vertex>& s) {
    int n = 0;
    for (const auto& v : s)
        for (const Vertex w : {Vertex{v.x + 1, v.y}, Vertex{v.x - 1, v.y}}) n += s.count(w) ? 0 : 1;
    return n;
}

// Every vertex outside `s` but within its padded bounding box reaches the pad frame.
inline bool simply_connected_complement(const std::set<Vertex>& s) {
    int x0 = s.begin()->x, x1 = x0, y0 = s.begin()->y, y1 = y0;
    for (const auto& v : s) {
        x0 = std::min(x0, v.x), x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y), y1 = std::max(y1, v.y);
    }
    --x0, --y0, ++x1, ++y1;
    std::set<Vertex> seen;
    std::vector<Vertex> stack{{x0, y0}};
    seen.insert({x0, y0});
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (const Vertex w : {Vertex{v.x + 1, v.y}, Vertex{v.x - 1, v.y}, Vertex{v.x, v.y + 1}, Vertex{v.x, v.y - 1}}) {
            if (w.x < x0 || w.x > x1 || w.y < y0 || w.y > y1 || s.count(w) || seen.count(w)) continue;
            seen.insert(w);
            stack.push_back(w);
        }
    }
    const long box = static_cast<long>(x1 - x0 + 1) * (y1 - y0 + 1);
    return static_cast<long>(seen.size() + s.size()) == box;
}

inline bool connected(const std::set<Vertex>& s) {
    std::set<Vertex> seen{*s.begin()};
    std::vector<Vertex> stack{*s.begin()};
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (const Vertex w : {Vertex{v.x + 1, v.y}, Vertex{v.x - 1, v.y}, Vertex{v.x, v.y + 1}, Vertex{v.x, v.y - 1}}) {
            if (s.count(w) && !seen.count(w)) {
                seen.insert(w);
                stack.push_back(w);
            }
        }
    }
    return seen.size() == s.size();
}

// Minimal contours around {0, x} are the edge boundaries of connected, hole-free
// vertex sets inside [0, x1] x [0, x2] containing both points with boundary 2(x1+x2+2).
inline std::uint64_t beta_by_subsets(Vertex x) {
    std::vector<Vertex> free_cells;
    for (int a = 0; a <= x.x; ++a)
        for (int b = 0; b <= x.y; ++b)
            if (!(a == 0 && b == 0) && !(a == x.x && b == x.y)) free_cells.push_back({a, b});
    const int norm = 2 * (x.x + x.y + 2);
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_cells.size()); ++mask) {
        std::set<Vertex> s{{0, 0}, x};
        for (std::size_t i = 0; i < free_cells.size(); ++i)
            if ((mask >> i) & 1) s.insert(free_cells[i]);
        if (edge_boundary_size(s) != norm) continue;
        if (connected(s) && simply_connected_complement(s)) ++count;
    }
    return count;
}

// |Gamma^n_{0,x}| for all n <= n_max by growing connected vertex sets from the origin.
// A set with edge boundary 2k has area at most floor(k/2) * ceil(k/2).
inline std::map<int, std::uint64_t> census_by_animals(Vertex x, int n_max) {
    const int k = n_max / 2;
    const auto max_area = static_cast<std::size_t>((k / 2) * ((k + 1) / 2));
    std::map<int, std::uint64_t> counts;
    std::set<std::vector<Vertex>> layer{{Vertex{0, 0}}};
    for (std::size_t area = 1; area <= max_area && !layer.empty(); ++area) {
        std::set<std::vector<Vertex>> next;
        for (const auto& cells : layer) {
            const std::set<Vertex> s(cells.begin(), cells.end());
            if (s.count(x)) {
                const int n = edge_boundary_size(s);
                if (n <= n_max && simply_connected_complement(s)) counts[n]++;
            }
            if (area == max_area) continue;
            for (const auto& v : cells) {
                for (const Vertex w : {Vertex{v.x + 1, v.y}, Vertex{v.x - 1, v.y}, Vertex{v.x, v.y + 1}, Vertex{v.x, v.y - 1}}) {
                    if (s.count(w)) continue;
                    auto grown = cells;
                    grown.insert(std::upper_bound(grown.begin(), grown.end(), w), w);
                    next.insert(std::move(grown));
                }
            }
        }
        layer = std::move(next);
    }
    return counts;
}

// All closed self-avoiding dual walks from a fixed base with length <= max_len, as words.
inline void closed_walks(int max_len, std::vector<std::string>& out) {
    std::string word;
    std::set<std::pair<int, int>> visited{{0, 0}};
    auto rec = [&](auto&& self, int a, int b) -> void {
        if (static_cast<int>(word.size()) >= max_len) return;
        static constexpr std::pair<char, std::pair<int, int>> steps[] = {
            {'R', {1, 0}}, {'L', {-1, 0}}, {'U', {0, 1}}, {'D', {0, -1}}};
        for (const auto& [c, d] : steps) {
            const int na = a + d.first, nb = b + d.second;
            if (std::abs(na) + std::abs(nb) > max_len - static_cast<int>(word.size()) - 1) continue;
            word.push_back(c);
            if (na == 0 && nb == 0) {
                if (word.size() >= 4) out.push_back(word);
            } else if (!visited.count({na, nb})) {
                visited.insert({na, nb});
                self(self, na, nb);
                visited.erase({na, nb});
            }
            word.pop_back();
        }
    };
    rec(rec, 0, 0);
}

// Truncated finite-volume connectivity by direct summation over configurations of the
// box [x0,x1] x [y0,y1], with a breadth-first search per configuration.
inline double tau_by_configurations(int x0, int x1, int y0, int y1, double p_h, double p_v, Vertex x, Vertex y) {
    struct E {
        Vertex a, b;
        bool h;
    };
    std::vector<E> edges;
    for (int i = x0; i <= x1; ++i)
        for (int j = y0; j <= y1; ++j) {
            if (i < x1) edges.push_back({{i, j}, {i + 1, j}, true});
            if (j < y1) edges.push_back({{i, j}, {i, j + 1}, false});
        }
    const std::size_t m = edges.size();
    long double total = 0.0L;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        long double w = 1.0L;
        std::map<Vertex, std::vector<Vertex>> adj;
        for (std::size_t i = 0; i < m; ++i) {
            const long double p = edges[i].h ? p_h : p_v;
            if ((mask >> i) & 1) {
                w *= p;
                adj[edges[i].a].push_back(edges[i].b);
                adj[edges[i].b].push_back(edges[i].a);
            } else {
                w *= 1.0L - p;
            }
        }
        if (w == 0.0L) continue;
        std::set<Vertex> seen{x};
        std::vector<Vertex> stack{x};
        bool ok = true;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            if (v.x == x0 || v.x == x1 || v.y == y0 || v.y == y1) ok = false;
            for (const auto& u : adj[v])
                if (seen.insert(u).second) stack.push_back(u);
        }
        if (ok && seen.count(y)) total += w;
    }
    return static_cast<double>(total);
}

}  // namespace oracle
