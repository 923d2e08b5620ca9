#pragma once

// Random induced subgraphs of truncated graphs: i.i.d. vertex inclusion by
// thresholding one uniform per vertex (so samples at different lambda are
// nested), and the correlated extremal sampler that never has a path of
// length p.

#include "shiftperc/error.hpp"
#include "shiftperc/graphs.hpp"
#include "shiftperc/parallel.hpp"
#include "shiftperc/pattern_oracle.hpp"
#include "shiftperc/rational.hpp"
#include "shiftperc/relations.hpp"
#include "shiftperc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace shiftperc {

enum class sampler_kind { iid, extremal, custom };

inline std::string_view to_string(sampler_kind k) {
    switch (k) {
    case sampler_kind::iid: return "iid";
    case sampler_kind::extremal: return "extremal";
    case sampler_kind::custom: return "custom";
    }
    return "?";
}

struct subgraph_sample {
    std::vector<std::uint8_t> included;
    sampler_kind sampler = sampler_kind::iid;
    std::uint64_t seed = 0;

    bool operator()(vertex_id v) const { return included[v] != 0; }
    std::size_t count() const { return static_cast<std::size_t>(std::count(included.begin(), included.end(), 1)); }
    double inclusion_rate() const {
        return included.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(included.size());
    }
};

namespace detail {

// u < num/den on the 53-bit grid, evaluated exactly.
inline bool below_threshold(std::uint64_t u53, const rational& lambda) {
    if (lambda <= rational(0)) return false;
    if (lambda >= rational(1)) return true;
    const auto lhs = static_cast<unsigned __int128>(u53) * static_cast<unsigned __int128>(lambda.denominator());
    const auto rhs = static_cast<unsigned __int128>(lambda.numerator()) << 53;
    return lhs < rhs;
}

inline std::uint64_t vertex_bits(std::uint64_t seed, vertex_id v) { return to_u53(mix64(derive_seed(seed, v))); }

inline void require_probability(const rational& lambda) {
    if (lambda < rational(0) || lambda > rational(1))
        throw error(errc::parse_error, "lambda must lie in [0,1], got " + to_string(lambda));
}

} // namespace detail

inline subgraph_sample sample_iid(const truncated_graph& g, const rational& lambda, std::uint64_t seed) {
    detail::require_probability(lambda);
    subgraph_sample s;
    s.sampler = sampler_kind::iid;
    s.seed = seed;
    s.included.resize(g.vertex_count());
    for (vertex_id v = 0; v < g.vertex_count(); ++v)
        s.included[v] = detail::below_threshold(detail::vertex_bits(seed, v), lambda);
    return s;
}

// Level-i uniform, shared with ah_sample's singleton uniforms.
inline double level_uniform(std::uint64_t seed, tuple_value i) {
    const tuple_value one[1] = {i};
    return subset_uniform(seed, one);
}

// v is kept iff the argmax-mod-p color of (u_{v_0}..u_{v_{k-2}}) exceeds that
// of (u_{v_1}..u_{v_{k-1}}). Colors strictly drop along kept edges, so no
// kept path has p edges.
inline subgraph_sample sample_extremal(const truncated_graph& g, int p, std::uint64_t seed) {
    if (!g.is_shift()) throw error(errc::not_shift_graph, "the extremal sampler needs a shift graph");
    if (g.k() < 2) throw error(errc::not_shift_graph, "the extremal sampler needs k >= 2");
    if (p < 1) throw error(errc::bad_arity, "p must be >= 1");
    std::vector<double> level(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) level[i] = level_uniform(seed, static_cast<tuple_value>(i));
    const std::size_t k = g.k();
    subgraph_sample s;
    s.sampler = sampler_kind::extremal;
    s.seed = seed;
    s.included.resize(g.vertex_count());
    std::vector<double> window(k);
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        const auto t = g.tuple(v);
        for (std::size_t i = 0; i < k; ++i) window[i] = level[t[i]];
        const std::span<const double> w(window);
        s.included[v] = argmax_mod_coloring(w.first(k - 1), p) > argmax_mod_coloring(w.subspan(1), p);
    }
    return s;
}

inline constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

struct path_stats {
    std::size_t longest = 0;         // edges
    std::uint64_t paths_at_least_p = 0; // saturates at uint64 max
    std::size_t p = 0;
    std::uint32_t max_height = 0;
    std::vector<vertex_id> witness;
};

namespace detail {

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > saturated - b ? saturated : a + b; }

} // namespace detail

inline path_stats compute_path_stats(const truncated_graph& g, const subgraph_sample& sample, std::size_t p) {
    if (sample.included.size() != g.vertex_count())
        throw error(errc::arity_mismatch, "sample does not belong to this graph");
    path_stats st;
    st.p = p;
    const auto field = heights(g, sample);
    st.max_height = field.max();
    const auto path = path_from_heights(g, field);
    st.longest = path.length;
    st.witness = path.witness;

    // ge[v][j] = number of included paths starting at v with >= j edges
    const std::size_t n = g.vertex_count();
    std::vector<std::uint64_t> ge((p + 1) * n, 0);
    for (std::size_t i = n; i-- > 0;) {
        const auto v = static_cast<vertex_id>(i);
        if (!sample(v)) continue;
        std::uint64_t* row = &ge[i * (p + 1)];
        row[0] = 1;
        g.for_each_successor(v, [&](vertex_id w) {
            if (!sample(w)) return;
            const std::uint64_t* next = &ge[std::size_t{w} * (p + 1)];
            row[0] = detail::sat_add(row[0], next[0]);
            for (std::size_t j = 1; j <= p; ++j) row[j] = detail::sat_add(row[j], next[j - 1]);
        });
    }
    for (std::size_t i = 0; i < n; ++i) st.paths_at_least_p = detail::sat_add(st.paths_at_least_p, ge[i * (p + 1) + p]);
    return st;
}

struct sweep_row {
    rational lambda;
    std::uint64_t replicas = 0;
    std::uint64_t hits = 0;
    double frequency = 0;
    double ci_half_width = 0;
    double mean_inclusion = 0;
    rational corollary_bound;
};

struct sweep_report {
    std::size_t p = 0;
    std::uint64_t seed = 0;
    rational lambda_g;
    std::vector<sweep_row> rows;
};

// Threshold used for the reference column: the closed form for a single
// relation, else the smallest member threshold (an upper estimate).
inline rational reference_threshold(const truncated_graph& g) {
    rational best(1);
    for (const auto& rel : g.spec()) best = std::min(best, vertex_threshold(rel).value());
    return best;
}

// Frequency of "longest included path >= p edges" per lambda; replica r uses
// seed derive_seed(seed, r) for every lambda, so samples are nested in lambda.
inline sweep_report sweep(const truncated_graph& g, std::vector<rational> lambdas, std::size_t p, std::uint64_t replicas,
                          std::uint64_t seed, unsigned threads = 1) {
    if (replicas < 1) throw error(errc::too_small, "need at least one replica");
    for (const auto& l : lambdas) detail::require_probability(l);
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

    struct outcome {
        std::vector<std::uint8_t> hit;
        std::vector<std::uint32_t> included;
    };
    std::vector<outcome> results(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
        const auto replica_seed = derive_seed(seed, r);
        std::vector<std::uint64_t> bits(g.vertex_count());
        for (vertex_id v = 0; v < g.vertex_count(); ++v) bits[v] = detail::vertex_bits(replica_seed, v);
        auto& out = results[r];
        for (const auto& lambda : lambdas) {
            std::uint32_t included = 0;
            for (auto b : bits) included += detail::below_threshold(b, lambda);
            const auto field =
                heights(g, [&](vertex_id v) { return detail::below_threshold(bits[v], lambda); });
            out.hit.push_back(field.max() >= p + 1);
            out.included.push_back(included);
        }
    });

    sweep_report report;
    report.p = p;
    report.seed = seed;
    report.lambda_g = reference_threshold(g);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        sweep_row row;
        row.lambda = lambdas[i];
        row.replicas = replicas;
        double inclusion = 0;
        for (const auto& res : results) {
            row.hits += res.hit[i];
            inclusion += static_cast<double>(res.included[i]) / static_cast<double>(g.vertex_count());
        }
        row.frequency = static_cast<double>(row.hits) / static_cast<double>(replicas);
        row.ci_half_width = z99 * std::sqrt(row.frequency * (1 - row.frequency) / static_cast<double>(replicas));
        row.mean_inclusion = inclusion / static_cast<double>(replicas);
        row.corollary_bound = infinite_path_probability_bound(row.lambda, report.lambda_g);
        report.rows.push_back(row);
    }
    return report;
}

struct extremal_report {
    std::size_t p = 0;
    std::uint64_t seed = 0;
    std::uint64_t replicas = 0;
    std::uint64_t samples_with_path = 0; // samples with a path of p edges
    std::size_t max_longest = 0;
    double mean_inclusion = 0;
    double inclusion_std_error = 0;
};

inline extremal_report run_extremal(const truncated_graph& g, int p, std::uint64_t replicas, std::uint64_t seed,
                                    unsigned threads = 1) {
    if (replicas < 1) throw error(errc::too_small, "need at least one replica");
    std::vector<double> rate(replicas);
    std::vector<std::size_t> longest(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
        const auto s = sample_extremal(g, p, derive_seed(seed, r));
        rate[r] = s.inclusion_rate();
        longest[r] = longest_path(g, s).length;
    });
    extremal_report rep;
    rep.p = static_cast<std::size_t>(p);
    rep.seed = seed;
    rep.replicas = replicas;
    double sum = 0, sum_sq = 0;
    for (std::size_t r = 0; r < replicas; ++r) {
        rep.samples_with_path += longest[r] >= static_cast<std::size_t>(p);
        rep.max_longest = std::max(rep.max_longest, longest[r]);
        sum += rate[r];
        sum_sq += rate[r] * rate[r];
    }
    const double n = static_cast<double>(replicas);
    rep.mean_inclusion = sum / n;
    const double var = replicas > 1 ? std::max(0.0, (sum_sq - n * rep.mean_inclusion * rep.mean_inclusion) / (n - 1)) : 0.0;
    rep.inclusion_std_error = std::sqrt(var / n);
    return rep;
}

// Linear interpolation at the first grid interval where the frequency
// reaches the target.
inline double empirical_threshold(const sweep_report& report, double target) {
    const auto& rows = report.rows;
    if (rows.size() < 3) throw error(errc::no_crossing, "need at least 3 grid points");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].frequency == target) return to_double(rows[i].lambda);
        if (i + 1 < rows.size() && rows[i].frequency < target && rows[i + 1].frequency > target) {
            const double x0 = to_double(rows[i].lambda), x1 = to_double(rows[i + 1].lambda);
            const double y0 = rows[i].frequency, y1 = rows[i + 1].frequency;
            return x0 + (target - y0) * (x1 - x0) / (y1 - y0);
        }
    }
    throw error(errc::no_crossing, "frequency curve never crosses " + std::to_string(target));
}

} // namespace shiftperc
