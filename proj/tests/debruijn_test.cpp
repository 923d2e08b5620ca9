#include "shiftperc/debruijn.hpp"

#include "shiftperc/rng.hpp"

#include <gtest/gtest.h>

using namespace shiftperc;

namespace {

errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return errc::parse_error;
}

// Plain exhaustive MIS over all subsets of B(d,k), for tiny graphs.
std::uint64_t brute_force_alpha(std::uint32_t d, std::uint32_t k) {
    const debruijn_graph g(d, k);
    const auto n = g.size();
    std::uint64_t best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::uint64_t> set;
        for (std::uint64_t x = 0; x < n; ++x)
            if (mask >> x & 1) set.push_back(x);
        if (set.size() > best && is_independent(g, set)) best = set.size();
    }
    return best;
}

} // namespace

TEST(SubsetExact, Examples) {
    const auto a = alpha_subset_exact(2, 2);
    EXPECT_EQ(a.value, 1u);
    EXPECT_TRUE(a.exact);
    EXPECT_TRUE(verify_witness(a));

    const auto b = alpha_subset_exact(2, 3);
    EXPECT_EQ(b.value, 2u);
    EXPECT_TRUE(verify_witness(b));

    const auto c = alpha_subset_exact(3, 3);
    EXPECT_EQ(c.value, 8u);
    EXPECT_LE(static_cast<double>(c.value) / 27.0, 1.0 / 3.0);

    EXPECT_EQ(code_of([] { alpha_subset_exact(3, 4); }), errc::budget_exceeded);
}

TEST(SubsetExact, ThreadCountIndependent) {
    const auto a = alpha_subset_exact(2, 5, 1);
    const auto b = alpha_subset_exact(2, 5, 4);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.witness, b.witness);
}

TEST(MisExact, Examples) {
    EXPECT_EQ(alpha_mis_exact(2, 2).value, 1u);
    EXPECT_EQ(alpha_mis_exact(2, 3).value, 2u);
    EXPECT_EQ(code_of([] { alpha_mis_exact(2, 16); }), errc::budget_exceeded);
    EXPECT_EQ(code_of([] { alpha_mis_exact(3, 6, {.node_budget = 10}); }), errc::budget_exceeded);
}

TEST(MisExact, MatchesBruteForce) {
    EXPECT_EQ(alpha_mis_exact(2, 2).value, brute_force_alpha(2, 2));
    EXPECT_EQ(alpha_mis_exact(2, 3).value, brute_force_alpha(2, 3));
    EXPECT_EQ(alpha_mis_exact(2, 4).value, brute_force_alpha(2, 4));
    EXPECT_EQ(alpha_mis_exact(3, 2).value, brute_force_alpha(3, 2));
    EXPECT_EQ(alpha_mis_exact(4, 2).value, brute_force_alpha(4, 2));
}

TEST(MethodAgreement, SubsetEqualsMis) {
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> cases{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 2},
                                                                     {3, 3}, {4, 2}, {4, 3}, {5, 2}};
    for (auto [d, k] : cases) {
        const auto s = alpha_subset_exact(d, k);
        const auto m = alpha_mis_exact(d, k);
        ASSERT_EQ(s.value, m.value) << d << "," << k;
        ASSERT_TRUE(verify_witness(s));
        ASSERT_TRUE(verify_witness(m));
        for (auto x : m.witness) ASSERT_FALSE(debruijn_graph(d, k).is_self_loop(x));
    }
    EXPECT_EQ(alpha_subset_exact(2, 4).value, 6u);
    EXPECT_EQ(alpha_subset_exact(2, 5).value, 12u);
    EXPECT_EQ(alpha_subset_exact(4, 3).value, 20u);
}

TEST(Monotonicity, LargerAlphabet) {
    for (std::uint32_t k = 2; k <= 3; ++k) {
        std::uint64_t prev = 0;
        for (std::uint32_t d = 2; d <= 5; ++d) {
            const auto a = alpha_subset_exact(d, k).value;
            ASSERT_GE(a, prev);
            prev = a;
        }
    }
}

TEST(Reformulation, ObjectiveEqualsEdgeBoundary) {
    counter_rng rng(51);
    for (auto [d, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
        const dicut_instance inst(d, k);
        const auto n = inst.ground_size();
        ASSERT_LE(n, 12u);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<std::uint8_t> in_a(n);
            for (std::uint64_t u = 0; u < n; ++u) in_a[u] = mask >> u & 1;
            const auto obj = inst.objective(in_a);
            ASSERT_EQ(obj, edge_boundary(inst.ground(), in_a));
            ASSERT_EQ(obj, inst.induced_independent_set(in_a).size());
            ASSERT_TRUE(is_independent(inst.strings(), inst.induced_independent_set(in_a)));
            const auto u = rng.below(n);
            auto flipped = in_a;
            flipped[u] ^= 1;
            ASSERT_EQ(static_cast<std::int64_t>(inst.objective(flipped)) - static_cast<std::int64_t>(obj),
                      inst.flip_delta(in_a, u));
        }
        std::vector<std::uint8_t> none(n, 0), all(n, 1);
        EXPECT_EQ(inst.objective(none), 0u);
        EXPECT_EQ(inst.objective(all), 0u);
    }
}

TEST(LocalSearch, Examples) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = alpha_local_search(2, 3, seed, 100);
        EXPECT_EQ(r.value, 2u);
        EXPECT_FALSE(r.exact);
        EXPECT_TRUE(verify_witness(r));
    }
    const auto greedy = alpha_local_search(3, 4, 1, 0);
    EXPECT_TRUE(verify_witness(greedy));

    const auto big = alpha_local_search(6, 3, 2, 100000);
    EXPECT_TRUE(verify_witness(big));
    EXPECT_LE(static_cast<double>(big.value) / 216.0, 1.0 / 3.0 + 1e-12);

    const auto again = alpha_local_search(6, 3, 2, 100000);
    EXPECT_EQ(again.value, big.value);
    EXPECT_EQ(again.witness, big.witness);
}

TEST(LocalSearch, NeverExceedsExact) {
    for (auto [d, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 4}, {2, 5}, {3, 3}, {4, 3}}) {
        const auto exact = alpha_subset_exact(d, k).value;
        for (std::uint64_t seed = 0; seed < 3; ++seed) ASSERT_LE(alpha_local_search(d, k, seed, 5000).value, exact);
    }
}

TEST(RatioReport, KEqualsThree) {
    const auto rows = alpha_ratio_report(2, 4, 3);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].alpha, 2u);
    EXPECT_DOUBLE_EQ(rows[0].ratio, 0.25);
    EXPECT_EQ(rows[0].lambda_lo, rational(1, 3));
    EXPECT_EQ(rows[0].lambda_hi, rational(1, 3));
    EXPECT_NEAR(rows[0].gap, 1.0 / 12.0, 1e-12);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) EXPECT_LT(rows[i].ratio, rows[i + 1].ratio);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.exact);
        EXPECT_LT(r.ratio, 1.0 / 3.0);
    }
}

TEST(RatioReport, EvenKShowsInterval) {
    const auto rows = alpha_ratio_report(2, 3, 2);
    EXPECT_EQ(rows[0].lambda_lo, rational(0));
    EXPECT_EQ(rows[0].lambda_hi, rational(1, 2));
    EXPECT_EQ(rows[0].gap, 0.0);
    EXPECT_EQ(code_of([] { alpha_ratio_report(3, 2, 3); }), errc::bad_arity);
}
