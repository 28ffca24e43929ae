#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "aniso/contours.hpp"
#include "aniso/errors.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

std::vector<Edge> incident(Vertex v) {
    return {Edge{{v.x - 1, v.y}, EdgeKind::horizontal}, Edge{v, EdgeKind::horizontal},
            Edge{{v.x, v.y - 1}, EdgeKind::vertical}, Edge{v, EdgeKind::vertical}};
}

std::vector<Edge> boundary_of(const std::set<Vertex>& s) {
    std::set<Edge> out;
    for (const auto& v : s)
        for (const auto& e : incident(v))
            if (!s.count(e.from) || !s.count(e.to())) out.insert(e);
    return {out.begin(), out.end()};
}

}  // namespace

TEST_CASE("is_contour on small edge sets") {
    auto unit = incident({0, 0});
    auto check = is_contour(unit);
    CHECK(check.valid);
    CHECK(check.interior == std::vector<Vertex>{{0, 0}});

    std::vector<Edge> three(unit.begin(), unit.begin() + 3);
    CHECK_FALSE(is_contour(three).valid);

    const auto block = boundary_of({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK(block.size() == 8);
    check = is_contour(block);
    CHECK(check.valid);
    CHECK(check.interior == std::vector<Vertex>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

    // Two disjoint unit contours: two finite components.
    auto two = incident({0, 0});
    for (const auto& e : incident({5, 5})) two.push_back(e);
    CHECK_FALSE(is_contour(two).valid);

    // Boundary of a unit square plus a dangling interior-free edge is not minimal.
    auto extra = incident({0, 0});
    extra.push_back(Edge{{3, 3}, EdgeKind::horizontal});
    CHECK_FALSE(is_contour(extra).valid);

    // A ring has a hole: the complement has two finite components.
    std::set<Vertex> ring;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != 1 || b != 1) ring.insert({a, b});
    CHECK_FALSE(is_contour(boundary_of(ring)).valid);

    CHECK_FALSE(is_contour(std::vector<Edge>{}).valid);
}

TEST_CASE("dual_of and primal_of") {
    const auto unit = *as_contour(incident({0, 0}));
    const auto circuit = dual_of(unit);
    CHECK(circuit.base == DualVertex{0, 0});
    CHECK(circuit.word == "RULD");
    CHECK(primal_of(circuit) == unit.edges());

    CHECK_THROWS_AS((void)primal_of({{0, 0}, "RRUU"}), UsageError);
    CHECK_THROWS_AS((void)primal_of({{0, 0}, "RL"}), UsageError);
    CHECK_THROWS_AS((void)primal_of({{0, 0}, "RURDLL"}), UsageError);  // open walk
    CHECK_THROWS_AS((void)primal_of({{0, 0}, "RRULLDRULD"}), UsageError);
}

TEST_CASE("word_encode anchors at the leftmost x-axis crossing") {
    const auto unit = *as_contour(incident({0, 0}));
    const auto enc = word_encode(dual_of(unit));
    CHECK(enc.base == DualVertex{0, 0});
    CHECK(enc.word.front() == 'U');
    CHECK(enc.word == "URDL");

    CHECK_THROWS_AS((void)word_decode({0, 0}, "URRDLULD"), UsageError);  // revisits a vertex
    CHECK_THROWS_AS((void)word_decode({0, 0}, "URRD"), UsageError);
    // A circuit living entirely above the axis has no crossing.
    CHECK_THROWS_AS((void)word_encode({{0, 3}, "RULD"}), UsageError);
    // Crossing only at k = 2 > 0.
    CHECK_THROWS_AS((void)word_encode({{2, 0}, "RULD"}), UsageError);
}

TEST_CASE("encode then decode is the identity on every small circuit") {
    std::vector<std::string> words;
    oracle::closed_walks(12, words);
    REQUIRE(words.size() > 1000);
    int tested = 0;
    for (const auto& w : words) {
        // Shift each walk so that it straddles the x-axis at the origin column.
        for (const int shift : {0, 1, -1}) {
            const DualCircuit c{{0, shift}, w};
            DualCircuit enc;
            try {
                enc = word_encode(c);
            } catch (const UsageError&) {
                continue;
            }
            ++tested;
            const auto dec = word_decode(enc.base, enc.word);
            CHECK(word_encode(dec) == enc);
            CHECK(primal_of(dec) == primal_of(c));
            CHECK(enc.word.front() == 'U');
            CHECK(enc.base.b == 0);
        }
    }
    CHECK(tested > 1000);
}

TEST_CASE("beta spot values and cross-checks") {
    CHECK(beta({1, 1}) == 3);
    CHECK(beta({1, 2}) == 6);
    CHECK(beta({2, 4}) == 105);
    CHECK_THROWS_AS((void)beta({0, 2}), UsageError);

    // Subset-enumeration oracle on primal vertex sets, for every x1 + x2 <= 7.
    for (int a = 1; a <= 6; ++a) {
        for (int b = 1; a + b <= 7; ++b) {
            CAPTURE(a);
            CAPTURE(b);
            const auto expected = oracle::beta_by_subsets({a, b});
            CHECK(beta({a, b}) == expected);
            CHECK(beta_lgv({a, b}) == expected);
            CHECK(beta_narayana({a, b}) == expected);
            CHECK(minimal_contours({a, b}).size() == expected);
        }
    }
    CHECK(oracle::beta_by_subsets({2, 4}) == 105);

    for (int a = 1; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b) CHECK(beta({a, b}) == beta(reflect(Vertex{a, b})));

    for (int a = 1; a <= 12; ++a)
        for (int b = 1; b <= 12; ++b) CHECK(beta({a, b}) == beta_lgv({a, b}));
}

TEST_CASE("census against the lattice-animal oracle") {
    for (const Vertex x : {Vertex{1, 1}, Vertex{1, 2}, Vertex{2, 1}}) {
        CAPTURE(x.x);
        CAPTURE(x.y);
        const auto expected = oracle::census_by_animals(x, 12);
        const auto c = census(x, 12);
        for (int n = norm_x(x); n <= 12; ++n) {
            CAPTURE(n);
            const auto it = expected.find(n);
            CHECK(c.count(n) == (it == expected.end() ? 0 : it->second));
        }
        CHECK(c.non_contour_circuits == 0);
    }
}

TEST_CASE("census examples and invariants") {
    const auto c = census({1, 1}, 12, {.keep_members = true});
    CHECK(c.count(8) == 3);
    CHECK(c.beta == 3);
    CHECK(c.count(9) == 0);
    CHECK(c.count(10) > 0);
    CHECK(c.count(10) <= 12096);
    CHECK(c.count(11) == 0);
    MESSAGE("census (1,1): n=10 -> " << c.count(10) << ", n=12 -> " << c.count(12));

    std::size_t total = 0;
    for (const auto& [n, k] : c.counts) total += k.convert_to<std::size_t>();
    CHECK(c.members.size() == total);

    for (const auto& g : c.members) {
        CHECK(g.surrounds({0, 0}));
        CHECK(g.surrounds({1, 1}));
        CHECK(g.h_count() + g.v_count() == g.size());
        CHECK(g.h_count() >= 4);
        CHECK(g.v_count() >= 4);
        CHECK((g.size() == 8) == (g.h_count() == 4 && g.v_count() == 4));
        const auto d = dual_of(g);
        CHECK(primal_of(d) == g.edges());
        CHECK(primal_of(word_encode(d)) == g.edges());
    }

    for (int n = 8; n <= 12; ++n) {
        BigInt sum = 0;
        for (const auto& [k, cnt] : c.per_anchor.at(n)) {
            CHECK(k <= 0);
            sum += cnt;
        }
        CHECK(sum == c.count(n));
    }

    CHECK_THROWS_AS((void)census({1, 1}, 7), UsageError);
    CHECK_THROWS_AS((void)census({2, 3}, 24, {.node_budget = 1000}), BudgetExceeded);
}

TEST_CASE("census minimal counts equal beta") {
    for (int a = 1; a <= 6; ++a) {
        for (int b = 1; a + b <= 7; ++b) {
            const auto c = census({a, b}, norm_x({a, b}));
            CHECK(c.beta == beta({a, b}));
        }
    }
}

TEST_CASE("census is independent of the thread count") {
    const auto one = census({1, 2}, 14, {.threads = 1});
    const auto four = census({1, 2}, 14, {.threads = 4});
    CHECK(one.counts == four.counts);
    CHECK(one.per_anchor == four.per_anchor);
}

TEST_CASE("counting lemma") {
    const auto c11 = census({1, 1}, 12);
    auto r = verify_counting_lemma({1, 1}, 0, c11);
    CHECK(r.lhs == 3);
    CHECK(r.rhs == 3);
    CHECK(r.holds);
    r = verify_counting_lemma({1, 1}, 1, c11);
    CHECK(r.lhs == 0);
    CHECK(r.holds);
    for (int m = 0; m <= 4; ++m) {
        r = verify_counting_lemma({1, 1}, m, c11);
        CHECK(r.holds);
        CHECK(r.aggregate_holds);
        CHECK(r.per_anchor_holds);
    }
    CHECK_THROWS_AS((void)verify_counting_lemma({1, 1}, 5, c11), UsageError);
    CHECK_THROWS_AS((void)verify_counting_lemma({1, 1}, -1, c11), UsageError);

    const auto c12 = census({1, 2}, 12);
    r = verify_counting_lemma({1, 2}, 2, c12);
    CHECK(r.rhs == 38880);
    CHECK(r.holds);
    CHECK_THROWS_AS((void)verify_counting_lemma({1, 2}, 3, c12), UsageError);  // census too short
}

TEST_CASE("alpha sequence") {
    auto r = alpha_sequence(2, 3);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].alpha == 6);
    CHECK(r.rows[1].alpha == 105);
    CHECK(r.rows[1].alpha >= r.rows[0].alpha * r.rows[0].alpha);
    CHECK(r.supermultiplicativity_violations.empty());
    CHECK(r.bound_violations.empty());

    r = alpha_sequence(1, 6);
    CHECK(r.rows[0].alpha == 3);
    CHECK(r.rows[0].root == doctest::Approx(3.0));
    CHECK(r.rows[0].root <= 16.0);
    for (const auto& row : r.rows) CHECK(row.alpha >= 1);
    CHECK(r.supermultiplicativity_violations.empty());

    CHECK_THROWS_AS((void)alpha_sequence(0, 3), UsageError);
    CHECK_THROWS_AS((void)alpha_sequence(2, 1), UsageError);
}

TEST_CASE("companion paths") {
    const Vertex x{1, 1};
    const auto block = *as_contour(boundary_of({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    const auto cp = companion_paths(block, x);
    CHECK(cp.sigma1 == std::vector<Vertex>{{0, 0}, {0, 1}, {1, 1}});
    CHECK(cp.sigma2 == std::vector<Vertex>{{0, 0}, {1, 0}, {1, 1}});
    CHECK(cp.t_h == 2);
    CHECK(cp.t_v == 2);
    CHECK(cp.q == corner_set(x));

    std::set<std::pair<std::vector<Vertex>, std::vector<Vertex>>> pairs;
    for (const auto& g : minimal_contours(x)) {
        const auto p = companion_paths(g, x);
        pairs.insert({p.sigma1, p.sigma2});
        for (const auto& e : p.q) CHECK(g.contains(e));
    }
    CHECK(pairs.size() == 3);

    for (const Vertex y : {Vertex{1, 2}, Vertex{2, 4}, Vertex{3, 2}}) {
        for (const auto& g : minimal_contours(y)) {
            const auto p = companion_paths(g, y);
            CHECK(p.t_h <= 2 * y.x);
            CHECK(p.t_v <= 2 * y.y);
            CHECK(p.sigma1.size() == static_cast<std::size_t>(y.x + y.y + 1));
        }
    }

    // Non-minimal or non-surrounding contours are rejected.
    const auto unit = *as_contour(incident({0, 0}));
    CHECK_THROWS_AS((void)companion_paths(unit, x), UsageError);
    const auto big = *as_contour(boundary_of({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}}));
    CHECK_THROWS_AS((void)companion_paths(big, x), UsageError);
}

TEST_CASE("census csv") {
    const auto c = census({1, 1}, 9);
    CHECK(census_csv(c) == "x1,x2,n,count\n1,1,8,3\n1,1,9,0\n");
}
