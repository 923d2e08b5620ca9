#include "shiftperc/graphs.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace shiftperc;

namespace {

using tuple = std::vector<tuple_value>;

errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return errc::parse_error;
}

tuple as_tuple(std::span<const tuple_value> t) { return tuple(t.begin(), t.end()); }

// Edge oracle: pairwise satisfies over every member.
bool oracle_edge(const truncated_graph& g, vertex_id a, vertex_id b) {
    for (const auto& rel : g.spec())
        if (satisfies(g.tuple(a), g.tuple(b), rel)) return true;
    return false;
}

// Longest path by exhaustive DFS over the oracle adjacency.
std::size_t dfs_longest(const truncated_graph& g, const std::vector<std::uint8_t>& inc) {
    const auto n = g.vertex_count();
    std::vector<std::vector<vertex_id>> adj(n);
    for (vertex_id a = 0; a < n; ++a)
        for (vertex_id b = 0; b < n; ++b)
            if (inc[a] && inc[b] && oracle_edge(g, a, b)) adj[a].push_back(b);
    std::size_t best = 0;
    std::function<void(vertex_id, std::size_t)> walk = [&](vertex_id v, std::size_t len) {
        best = std::max(best, len);
        for (auto w : adj[v]) walk(w, len + 1);
    };
    for (vertex_id v = 0; v < n; ++v)
        if (inc[v]) walk(v, 0);
    return best;
}

tuple merge(std::span<const tuple_value> a, std::span<const tuple_value> b) {
    tuple out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

tuple random_tuple(counter_rng& rng, std::size_t k, std::size_t n) {
    std::set<tuple_value> s;
    while (s.size() < k) s.insert(static_cast<tuple_value>(rng.below(n)));
    return tuple(s.begin(), s.end());
}

} // namespace

TEST(Satisfies, Examples) {
    const auto shift2 = shift_relation(2);
    EXPECT_TRUE(satisfies(tuple{3, 5}, tuple{5, 9}, shift2));
    EXPECT_FALSE(satisfies(tuple{3, 5}, tuple{4, 9}, shift2));
    EXPECT_EQ(code_of([&] { satisfies(tuple{1, 2, 3}, tuple{2, 3}, shift2); }), errc::arity_mismatch);
}

TEST(Satisfies, Antisymmetric) {
    counter_rng rng(21);
    const auto e2 = enumerate_classes(2);
    const auto e3 = enumerate_classes(3);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto k = 2 + rng.below(2);
        const auto& set = k == 2 ? e2 : e3;
        const auto& rel = set.relations()[rng.below(set.size())];
        const auto v = random_tuple(rng, k, 8), w = random_tuple(rng, k, 8);
        ASSERT_FALSE(satisfies(v, w, rel) && satisfies(w, v, rel));
    }
}

TEST(ShiftGraph, Examples) {
    const auto g1 = shift_graph(1, 3);
    EXPECT_EQ(g1.vertex_count(), 3u);
    EXPECT_EQ(g1.edge_count(), 3u);
    EXPECT_EQ(g1.successors(0), (std::vector<vertex_id>{1, 2}));

    const auto g2 = shift_graph(2, 4);
    EXPECT_EQ(g2.vertex_count(), 6u);
    EXPECT_EQ(g2.edge_count(), 4u);

    const auto g3 = shift_graph(3, 3);
    EXPECT_EQ(g3.vertex_count(), 1u);
    EXPECT_EQ(g3.edge_count(), 0u);

    EXPECT_EQ(code_of([] { shift_graph(3, 2); }), errc::too_small);
    EXPECT_EQ(code_of([] { shift_graph(12, 80); }), errc::too_large);
}

TEST(ShiftGraph, HandEnumeration) {
    const auto g = shift_graph(2, 3);
    std::ostringstream os;
    write_edges_csv(os, g);
    EXPECT_EQ(os.str(), "0,1;1,2\n");
    std::set<tuple> verts;
    for (vertex_id v = 0; v < g.vertex_count(); ++v) verts.insert(as_tuple(g.tuple(v)));
    EXPECT_EQ(verts, (std::set<tuple>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(ShiftGraph, EdgeCountIsBinomial) {
    for (std::size_t k = 1; k <= 5; ++k) {
        for (std::size_t n = k; n <= 12; ++n) {
            const auto g = shift_graph(k, n);
            std::uint64_t counted = 0;
            for (vertex_id v = 0; v < g.vertex_count(); ++v) counted += g.successors(v).size();
            ASSERT_EQ(counted, choose(n, k + 1)) << k << "," << n;
            ASSERT_EQ(g.edge_count(), counted);
        }
    }
}

TEST(ShiftGraph, FastPathMatchesPatternMatching) {
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto fast = shift_graph(k, 9);
        const truncated_graph slow(relation_set({shift_relation(k)}), 9, false);
        for (vertex_id v = 0; v < fast.vertex_count(); ++v) ASSERT_EQ(fast.successors(v), slow.successors(v));
    }
}

TEST(BuildTruncated, RankRoundTrip) {
    const auto g = build_truncated(enumerate_classes(3), 9);
    EXPECT_EQ(g.vertex_count(), choose(9, 3));
    for (vertex_id v = 0; v < g.vertex_count(); ++v) ASSERT_EQ(g.rank(g.tuple(v)), v);
}

TEST(BuildTruncated, SuccessorsMatchPairOracle) {
    std::vector<relation_set> specs{enumerate_classes(2), enumerate_classes(3),
                                    relation_set({validate_relation({1, 2}, {3, 4})}),
                                    relation_set({validate_relation({0, 2, 3}, {4, 3, 5})})};
    for (const auto& spec : specs) {
        for (std::size_t n : {spec.k(), spec.k() + 2, std::size_t{7}}) {
            const auto g = build_truncated(spec, n);
            for (vertex_id a = 0; a < g.vertex_count(); ++a) {
                std::vector<vertex_id> expected;
                for (vertex_id b = 0; b < g.vertex_count(); ++b)
                    if (oracle_edge(g, a, b)) expected.push_back(b);
                ASSERT_EQ(g.successors(a), expected);
                for (auto b : expected) ASSERT_TRUE(g.has_edge(a, b));
            }
        }
    }
}

TEST(BuildTruncated, AllClassesEdgesAreComponentwiseIncreasing) {
    const auto g = build_truncated(enumerate_classes(2), 4);
    for (vertex_id a = 0; a < g.vertex_count(); ++a) {
        for (vertex_id b = 0; b < g.vertex_count(); ++b) {
            const auto ta = g.tuple(a), tb = g.tuple(b);
            const bool increasing = ta[0] < tb[0] && ta[1] < tb[1];
            ASSERT_EQ(g.has_edge(a, b), increasing);
        }
    }
}

TEST(BuildTruncated, ContractabilityClosure) {
    counter_rng rng(22);
    const std::size_t n = 14;
    const auto spec = enumerate_classes(3);
    const auto g = build_truncated(spec, n);
    int checked = 0;
    while (checked < 2000) {
        const auto a = static_cast<vertex_id>(rng.below(g.vertex_count()));
        const auto succ = g.successors(a);
        if (succ.empty()) continue;
        const auto b = succ[rng.below(succ.size())];
        // a random increasing injection of the points used by (a, b)
        const auto pts = merge(g.tuple(a), g.tuple(b));
        const auto target = random_tuple(rng, pts.size(), n);
        auto sigma = [&](std::span<const tuple_value> t) {
            tuple out;
            for (auto x : t) out.push_back(target[std::lower_bound(pts.begin(), pts.end(), x) - pts.begin()]);
            return out;
        };
        ASSERT_TRUE(g.has_edge(g.rank(sigma(g.tuple(a))), g.rank(sigma(g.tuple(b)))));
        ++checked;
    }
}

TEST(Debruijn, Examples) {
    const auto b22 = debruijn(2, 2);
    EXPECT_EQ(b22.size(), 4u);
    EXPECT_EQ(b22.edge_count(), 8u);
    int loops = 0;
    for (std::uint64_t x = 0; x < b22.size(); ++x) loops += b22.is_self_loop(x);
    EXPECT_EQ(loops, 2);

    const auto b23 = debruijn(2, 3);
    EXPECT_EQ(b23.size(), 8u);
    for (std::uint64_t x = 0; x < b23.size(); ++x) {
        int out = 0;
        for (std::uint64_t y = 0; y < b23.size(); ++y) out += b23.has_edge(x, y);
        EXPECT_EQ(out, 2);
    }

    const auto b32 = debruijn(3, 2);
    loops = 0;
    for (std::uint64_t x = 0; x < b32.size(); ++x) loops += b32.is_self_loop(x);
    EXPECT_EQ(b32.size(), 9u);
    EXPECT_EQ(loops, 3);

    EXPECT_EQ(code_of([] { debruijn(2, 40); }), errc::too_large);
    EXPECT_EQ(code_of([] { debruijn(1, 3); }), errc::bad_arity);
}

TEST(Debruijn, SuccessorsAndLabels) {
    const auto g = debruijn(3, 4);
    for (std::uint64_t x = 0; x < g.size(); ++x) {
        const auto lx = g.label(x);
        ASSERT_EQ(g.parse_label(lx), x);
        for (std::uint32_t c = 0; c < 3; ++c) {
            const auto y = g.successor(x, c);
            ASSERT_TRUE(g.has_edge(x, y));
            ASSERT_EQ(lx.substr(1), g.label(y).substr(0, 3));
            ASSERT_TRUE(g.has_edge(g.predecessor(x, c), x));
        }
    }
    EXPECT_EQ(debruijn_graph::format_label(35, 36, 2), "0z");
    EXPECT_EQ(code_of([&] { g.parse_label("0123"); }), errc::parse_error);
}

TEST(LiftEdges, ShiftLiftsToShift) {
    for (std::size_t k = 1; k <= 6; ++k) {
        const auto lifted = lift_edges(shift_relation(k));
        ASSERT_EQ(lifted.size(), 1u);
        EXPECT_TRUE(equivalent(lifted.relations().front(), shift_relation(k + 1)));
        EXPECT_EQ(edge_threshold(shift_relation(k)).value(), vertex_threshold(lifted.relations().front()).value());
    }
}

TEST(LiftEdges, ConsecutiveEdgePairsBiject) {
    std::vector<order_relation> rels{shift_relation(1), shift_relation(2), shift_relation(3)};
    for (const auto& r : enumerate_classes(2)) rels.push_back(r);
    for (const auto& r : enumerate_classes(3)) rels.push_back(r);
    for (const auto& rel : rels) {
        const auto lifted = lift_edges(rel);
        const std::size_t m = lifted.k();
        const std::size_t n = m <= 3 ? 12 : m == 4 ? 10 : 9;
        const auto g = build_truncated(relation_set({rel}), n);
        std::set<std::pair<tuple, tuple>> expected;
        for (vertex_id a = 0; a < g.vertex_count(); ++a)
            for (auto b : g.successors(a))
                for (auto c : g.successors(b))
                    expected.insert({merge(g.tuple(a), g.tuple(b)), merge(g.tuple(b), g.tuple(c))});
        const auto h = build_truncated(lifted, n);
        std::set<std::pair<tuple, tuple>> got;
        for (vertex_id x = 0; x < h.vertex_count(); ++x)
            for (auto y : h.successors(x)) got.insert({as_tuple(h.tuple(x)), as_tuple(h.tuple(y))});
        ASSERT_EQ(got, expected) << "relation of length " << rel.size() << " with " << lifted.size() << " lifts";
    }
}

TEST(TopologicalOrder, ForwardEdges) {
    const auto one = shift_graph(3, 3);
    EXPECT_EQ(topological_order(one), (std::vector<vertex_id>{0}));

    // coordinate sum is also a valid order for shift k=2
    const auto g = shift_graph(2, 4);
    for (vertex_id v = 0; v < g.vertex_count(); ++v)
        for (auto w : g.successors(v)) EXPECT_LT(g.tuple(v)[0] + g.tuple(v)[1], g.tuple(w)[0] + g.tuple(w)[1]);

    for (const auto& spec : {enumerate_classes(2), enumerate_classes(3)}) {
        const auto t = build_truncated(spec, 8);
        const auto order = topological_order(t);
        std::vector<std::size_t> pos(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
        for (vertex_id v = 0; v < t.vertex_count(); ++v)
            for (auto w : t.successors(v)) ASSERT_LT(pos[v], pos[w]);
    }
}

TEST(LongestPath, Examples) {
    const auto g = shift_graph(2, 4);
    const auto all = longest_path(g);
    EXPECT_EQ(all.length, 2u);
    ASSERT_EQ(all.witness.size(), 3u);
    for (std::size_t i = 0; i + 1 < all.witness.size(); ++i) EXPECT_TRUE(g.has_edge(all.witness[i], all.witness[i + 1]));

    const auto none = longest_path(g, [](vertex_id) { return false; });
    EXPECT_EQ(none.length, 0u);
    EXPECT_TRUE(none.witness.empty());

    EXPECT_EQ(heights(g, [](vertex_id) { return true; }).max(), 3u);
    const auto zero = heights(g, [](vertex_id) { return false; });
    for (auto h : zero.h) EXPECT_EQ(h, 0u);
}

TEST(LongestPath, MatchesDfsOracle) {
    counter_rng rng(23);
    std::vector<truncated_graph> graphs;
    for (std::size_t n = 4; n <= 8; ++n) {
        graphs.push_back(shift_graph(2, n));
        graphs.push_back(shift_graph(3, n));
        graphs.push_back(build_truncated(enumerate_classes(2), n));
        graphs.push_back(build_truncated(relation_set({validate_relation({1, 2}, {3, 4})}), n));
    }
    for (const auto& g : graphs) {
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<std::uint8_t> inc(g.vertex_count());
            const auto density = rng.uniform();
            for (auto& x : inc) x = rng.uniform() < density;
            auto pred = [&](vertex_id v) { return inc[v] != 0; };
            const auto field = heights(g, pred);
            const auto path = longest_path(g, pred);
            ASSERT_EQ(path.length, dfs_longest(g, inc));
            if (std::count(inc.begin(), inc.end(), 1)) {
                ASSERT_EQ(field.max(), path.length + 1);
                ASSERT_EQ(path.witness.size(), path.length + 1);
            }
            for (std::size_t i = 0; i + 1 < path.witness.size(); ++i) {
                ASSERT_TRUE(inc[path.witness[i]]);
                ASSERT_TRUE(g.has_edge(path.witness[i], path.witness[i + 1]));
            }
            for (vertex_id v = 0; v < g.vertex_count(); ++v) {
                if (!inc[v]) {
                    ASSERT_EQ(field[v], 0u);
                    continue;
                }
                for (auto w : g.successors(v)) {
                    if (inc[w]) {
                        ASSERT_GT(field[v], field[w]);
                    }
                }
            }
        }
    }
}

TEST(Materialize, MatchesLazySuccessors) {
    const auto g = build_truncated(enumerate_classes(2), 7);
    const auto adj = g.materialize();
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        const auto s = adj.successors(v);
        ASSERT_EQ(std::vector<vertex_id>(s.begin(), s.end()), g.successors(v));
    }
    EXPECT_EQ(code_of([] { shift_graph(1, 65).materialize(); }), errc::too_large);
    const auto sum = shift_graph(2, 10).summary();
    EXPECT_EQ(sum.vertices, 45u);
    EXPECT_EQ(sum.edges, 120u);
    EXPECT_EQ(sum.spec, "shift");
}
