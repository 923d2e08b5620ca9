#pragma once

// Independence numbers of de Bruijn graphs B(d, k), two ways:
//   - as a maximum directed cut of B(d, k-1): pick A among the (k-1)-strings
//     and count k-strings whose prefix is in A and suffix is not;
//   - as a maximum independent set of B(d, k) by branch and bound.

#include "shiftperc/error.hpp"
#include "shiftperc/graphs.hpp"
#include "shiftperc/parallel.hpp"
#include "shiftperc/relations.hpp"
#include "shiftperc/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shiftperc {

inline constexpr std::size_t max_subset_ground = 26;
inline constexpr std::uint64_t max_mis_vertices = 40000;

enum class alpha_method { subset_exhaustive, mis_branch_bound, local_search };

inline std::string_view to_string(alpha_method m) {
    switch (m) {
    case alpha_method::subset_exhaustive: return "subset";
    case alpha_method::mis_branch_bound: return "mis";
    case alpha_method::local_search: return "local";
    }
    return "?";
}

struct alpha_result {
    std::uint32_t d = 0;
    std::uint32_t k = 0;
    std::uint64_t value = 0;
    std::vector<std::uint64_t> witness; // subset A of (k-1)-strings, or an independent set of k-strings
    alpha_method method = alpha_method::subset_exhaustive;
    bool exact = false;

    bool witness_is_subset() const { return method != alpha_method::mis_branch_bound; }
    std::uint32_t witness_length() const { return witness_is_subset() ? k - 1 : k; }
};

// The directed-cut form: ground set = vertices of B(d, k-1), one arc per
// k-string (constant strings give loops and never count).
class dicut_instance {
public:
    dicut_instance(std::uint32_t d, std::uint32_t k) : d_(d), k_(k), ground_(d, k - 1), strings_(d, k) {
        if (k < 2) throw error(errc::bad_arity, "need k >= 2");
        out_.resize(ground_.size());
        in_.resize(ground_.size());
        for (std::uint64_t x = 0; x < strings_.size(); ++x) {
            const auto from = strings_.prefix(x), to = strings_.suffix(x);
            if (from == to) continue;
            out_[from].push_back(to);
            in_[to].push_back(from);
        }
    }

    std::uint32_t d() const { return d_; }
    std::uint32_t k() const { return k_; }
    std::uint64_t ground_size() const { return ground_.size(); }
    const debruijn_graph& ground() const { return ground_; }
    const debruijn_graph& strings() const { return strings_; }
    const std::vector<std::uint64_t>& out(std::uint64_t u) const { return out_[u]; }
    const std::vector<std::uint64_t>& in(std::uint64_t u) const { return in_[u]; }

    // |{x in d^k : prefix(x) in A, suffix(x) not in A}| by direct string count.
    std::uint64_t objective(const std::vector<std::uint8_t>& in_a) const {
        std::uint64_t count = 0;
        for (std::uint64_t x = 0; x < strings_.size(); ++x)
            count += in_a[strings_.prefix(x)] && !in_a[strings_.suffix(x)];
        return count;
    }

    // Change of the objective when u toggles membership.
    std::int64_t flip_delta(const std::vector<std::uint8_t>& in_a, std::uint64_t u) const {
        std::int64_t out_free = 0, in_taken = 0;
        for (auto v : out_[u]) out_free += !in_a[v];
        for (auto v : in_[u]) in_taken += in_a[v];
        const std::int64_t gain = out_free - in_taken;
        return in_a[u] ? -gain : gain;
    }

    // The independent set {x : prefix in A, suffix not in A} of B(d, k).
    std::vector<std::uint64_t> induced_independent_set(const std::vector<std::uint8_t>& in_a) const {
        std::vector<std::uint64_t> set;
        for (std::uint64_t x = 0; x < strings_.size(); ++x)
            if (in_a[strings_.prefix(x)] && !in_a[strings_.suffix(x)]) set.push_back(x);
        return set;
    }

    std::vector<std::uint8_t> indicator(const std::vector<std::uint64_t>& subset) const {
        std::vector<std::uint8_t> in_a(ground_.size(), 0);
        for (auto u : subset) in_a.at(u) = 1;
        return in_a;
    }

private:
    std::uint32_t d_;
    std::uint32_t k_;
    debruijn_graph ground_;
    debruijn_graph strings_;
    std::vector<std::vector<std::uint64_t>> out_;
    std::vector<std::vector<std::uint64_t>> in_;
};

// Arcs of g leaving A, counted on the graph rather than on strings.
inline std::uint64_t edge_boundary(const debruijn_graph& g, const std::vector<std::uint8_t>& in_a) {
    std::uint64_t count = 0;
    for (std::uint64_t u = 0; u < g.size(); ++u) {
        if (!in_a[u]) continue;
        for (std::uint32_t c = 0; c < g.d(); ++c) {
            const auto v = g.successor(u, c);
            count += v != u && !in_a[v];
        }
    }
    return count;
}

// No member is self-looped and no arc joins two members (either direction).
inline bool is_independent(const debruijn_graph& g, const std::vector<std::uint64_t>& set) {
    std::vector<std::uint8_t> member(g.size(), 0);
    for (auto x : set) {
        if (x >= g.size() || member[x]) return false;
        member[x] = 1;
    }
    for (auto x : set) {
        if (g.is_self_loop(x)) return false;
        for (std::uint32_t c = 0; c < g.d(); ++c)
            if (member[g.successor(x, c)]) return false;
    }
    return true;
}

// Rechecks a result against its witness: the witness value matches and the
// induced set is independent.
inline bool verify_witness(const alpha_result& r) {
    const auto g = debruijn_graph(r.d, r.k);
    if (r.method == alpha_method::mis_branch_bound) return is_independent(g, r.witness) && r.witness.size() == r.value;
    const dicut_instance inst(r.d, r.k);
    for (auto u : r.witness)
        if (u >= inst.ground_size()) return false;
    const auto in_a = inst.indicator(r.witness);
    const auto set = inst.induced_independent_set(in_a);
    return is_independent(g, set) && set.size() == r.value && inst.objective(in_a) == r.value;
}

namespace detail {

inline std::vector<std::uint64_t> mask_members(std::uint64_t mask) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) out.push_back(i);
    return out;
}

} // namespace detail

// Exhaustive over all 2^N subsets in Gray-code order with O(1) updates.
// Blocks of the high bits run independently; ties go to the smallest mask,
// so the result does not depend on the worker count.
inline alpha_result alpha_subset_exact(std::uint32_t d, std::uint32_t k, unsigned threads = 1) {
    if (k < 2) throw error(errc::bad_arity, "need k >= 2");
    const debruijn_graph ground(d, k - 1);
    if (ground.size() > max_subset_ground)
        throw error(errc::budget_exceeded, "d^(k-1) = " + std::to_string(ground.size()) + " exceeds the subset budget of " +
                                               std::to_string(max_subset_ground));
    const dicut_instance inst(d, k);
    const auto n = static_cast<std::uint32_t>(ground.size());
    std::vector<std::uint32_t> out_mask(n, 0), in_mask(n, 0);
    for (std::uint32_t u = 0; u < n; ++u) {
        for (auto v : inst.out(u)) out_mask[u] |= 1u << v;
        for (auto v : inst.in(u)) in_mask[u] |= 1u << v;
    }
    auto objective = [&](std::uint32_t a) {
        std::int64_t total = 0;
        for (std::uint32_t u = 0; u < n; ++u)
            if (a >> u & 1) total += std::popcount(out_mask[u] & ~a);
        return total;
    };

    const std::uint32_t high_bits = std::min<std::uint32_t>(n, 6);
    const std::uint32_t low_bits = n - high_bits;
    const std::uint32_t blocks = 1u << high_bits;
    std::vector<std::pair<std::int64_t, std::uint32_t>> best(blocks, {-1, 0});
    parallel_for(blocks, threads, [&](std::size_t b) {
        std::uint32_t a = static_cast<std::uint32_t>(b) << low_bits;
        std::int64_t value = objective(a);
        auto local = std::pair<std::int64_t, std::uint32_t>{value, a};
        const std::uint64_t steps = std::uint64_t{1} << low_bits;
        for (std::uint64_t i = 1; i < steps; ++i) {
            const auto u = static_cast<std::uint32_t>(std::countr_zero(i));
            const std::int64_t gain = std::popcount(out_mask[u] & ~a) - std::popcount(in_mask[u] & a);
            if (a >> u & 1) value -= gain; else value += gain;
            a ^= 1u << u;
            if (value > local.first || (value == local.first && a < local.second)) local = {value, a};
        }
        best[b] = local;
    });
    auto winner = best.front();
    for (const auto& c : best)
        if (c.first > winner.first || (c.first == winner.first && c.second < winner.second)) winner = c;

    alpha_result r;
    r.d = d;
    r.k = k;
    r.value = static_cast<std::uint64_t>(winner.first);
    r.witness = detail::mask_members(winner.second);
    r.method = alpha_method::subset_exhaustive;
    r.exact = true;
    return r;
}

struct mis_options {
    std::uint64_t node_budget = 50'000'000;
};

namespace detail {

// Branch and bound on the undirected simple graph underlying B(d, k) with
// self-looped vertices removed. Bound: greedy clique cover of the candidates.
class mis_solver {
public:
    mis_solver(const debruijn_graph& g, const mis_options& opt) : g_(g), opt_(opt), n_(g.size()) {
        adj_.resize(n_);
        for (std::uint64_t x = 0; x < n_; ++x) {
            if (g.is_self_loop(x)) continue;
            for (std::uint32_t c = 0; c < g.d(); ++c) {
                const auto y = g.successor(x, c);
                if (y == x || g.is_self_loop(y)) continue;
                adj_[x].push_back(y);
                adj_[y].push_back(x);
            }
        }
        for (auto& a : adj_) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        mark_.assign(n_, 0);
    }

    std::vector<std::uint64_t> solve() {
        std::vector<std::uint8_t> cand(n_, 0);
        for (std::uint64_t x = 0; x < n_; ++x) cand[x] = !g_.is_self_loop(x);
        best_ = greedy(cand);
        std::vector<std::uint64_t> chosen;
        branch(cand, chosen);
        std::sort(best_.begin(), best_.end());
        return best_;
    }

private:
    std::vector<std::uint64_t> greedy(std::vector<std::uint8_t> cand) const {
        std::vector<std::uint64_t> out;
        while (true) {
            std::optional<std::uint64_t> pick;
            std::size_t pick_deg = 0;
            for (std::uint64_t x = 0; x < n_; ++x) {
                if (!cand[x]) continue;
                const auto deg = degree(cand, x);
                if (!pick || deg < pick_deg) {
                    pick = x;
                    pick_deg = deg;
                }
            }
            if (!pick) break;
            out.push_back(*pick);
            cand[*pick] = 0;
            for (auto y : adj_[*pick]) cand[y] = 0;
        }
        return out;
    }

    std::size_t degree(const std::vector<std::uint8_t>& cand, std::uint64_t x) const {
        std::size_t deg = 0;
        for (auto y : adj_[x]) deg += cand[y];
        return deg;
    }

    std::size_t clique_cover_bound(const std::vector<std::uint8_t>& cand) {
        std::vector<std::vector<std::uint64_t>> cliques;
        for (std::uint64_t x = 0; x < n_; ++x) {
            if (!cand[x]) continue;
            for (auto y : adj_[x]) mark_[y] = 1;
            bool placed = false;
            for (auto& c : cliques) {
                if (std::all_of(c.begin(), c.end(), [&](std::uint64_t z) { return mark_[z] != 0; })) {
                    c.push_back(x);
                    placed = true;
                    break;
                }
            }
            if (!placed) cliques.push_back({x});
            for (auto y : adj_[x]) mark_[y] = 0;
        }
        return cliques.size();
    }

    void branch(std::vector<std::uint8_t>& cand, std::vector<std::uint64_t>& chosen) {
        if (++nodes_ > opt_.node_budget) throw error(errc::budget_exceeded, "branch-and-bound node budget exhausted");
        // degree <= 1 vertices are always safe to take
        std::vector<std::uint64_t> forced;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::uint64_t x = 0; x < n_; ++x) {
                if (!cand[x] || degree(cand, x) > 1) continue;
                forced.push_back(x);
                cand[x] = 0;
                for (auto y : adj_[x]) {
                    if (cand[y]) forced.push_back(~y); // removed neighbor, tagged
                    cand[y] = 0;
                }
                changed = true;
            }
        }
        std::size_t taken = 0;
        for (auto f : forced)
            if (!(f & (std::uint64_t{1} << 63))) {
                chosen.push_back(f);
                ++taken;
            }

        if (chosen.size() > best_.size()) best_ = chosen;
        if (chosen.size() + clique_cover_bound(cand) > best_.size()) {
            std::optional<std::uint64_t> pivot;
            std::size_t pivot_deg = 0;
            for (std::uint64_t x = 0; x < n_; ++x) {
                if (!cand[x]) continue;
                const auto deg = degree(cand, x);
                if (!pivot || deg > pivot_deg) {
                    pivot = x;
                    pivot_deg = deg;
                }
            }
            if (pivot) {
                // include the pivot
                std::vector<std::uint64_t> removed{*pivot};
                cand[*pivot] = 0;
                for (auto y : adj_[*pivot])
                    if (cand[y]) {
                        cand[y] = 0;
                        removed.push_back(y);
                    }
                chosen.push_back(*pivot);
                branch(cand, chosen);
                chosen.pop_back();
                for (auto y : removed) cand[y] = 1;
                // exclude the pivot
                cand[*pivot] = 0;
                branch(cand, chosen);
                cand[*pivot] = 1;
            }
        }

        chosen.resize(chosen.size() - taken);
        for (auto f : forced) cand[(f & (std::uint64_t{1} << 63)) ? ~f : f] = 1;
    }

    const debruijn_graph& g_;
    mis_options opt_;
    std::uint64_t n_;
    std::vector<std::vector<std::uint64_t>> adj_;
    std::vector<std::uint8_t> mark_;
    std::vector<std::uint64_t> best_;
    std::uint64_t nodes_ = 0;
};

} // namespace detail

inline alpha_result alpha_mis_exact(std::uint32_t d, std::uint32_t k, const mis_options& opt = {}) {
    if (k < 2) throw error(errc::bad_arity, "need k >= 2");
    const debruijn_graph g(d, k);
    if (g.size() > max_mis_vertices)
        throw error(errc::budget_exceeded, "d^k = " + std::to_string(g.size()) + " exceeds the MIS budget");
    detail::mis_solver solver(g, opt);
    alpha_result r;
    r.d = d;
    r.k = k;
    r.witness = solver.solve();
    r.value = r.witness.size();
    r.method = alpha_method::mis_branch_bound;
    r.exact = true;
    return r;
}

struct anneal_options {
    double start_temperature = 1.0;
    double end_temperature = 0.02;
};

// Greedy seed (add strings in lexicographic order while that helps), then
// simulated annealing on single flips with a geometric cooling schedule.
inline alpha_result alpha_local_search(std::uint32_t d, std::uint32_t k, std::uint64_t seed, std::uint64_t iterations,
                                       const anneal_options& opt = {}) {
    const dicut_instance inst(d, k);
    const auto n = inst.ground_size();
    std::vector<std::uint8_t> in_a(n, 0);
    std::int64_t value = 0;
    for (std::uint64_t u = 0; u < n; ++u) {
        const auto delta = inst.flip_delta(in_a, u);
        if (delta > 0) {
            in_a[u] = 1;
            value += delta;
        }
    }
    auto best = in_a;
    std::int64_t best_value = value;
    counter_rng rng(seed, 0xa11ce);
    for (std::uint64_t it = 0; it < iterations; ++it) {
        const double frac = iterations > 1 ? static_cast<double>(it) / static_cast<double>(iterations - 1) : 1.0;
        const double temperature = opt.start_temperature * std::pow(opt.end_temperature / opt.start_temperature, frac);
        const auto u = rng.below(n);
        const auto delta = inst.flip_delta(in_a, u);
        if (delta >= 0 || rng.uniform() < std::exp(static_cast<double>(delta) / temperature)) {
            in_a[u] ^= 1;
            value += delta;
            if (value > best_value) {
                best_value = value;
                best = in_a;
            }
        }
    }
    alpha_result r;
    r.d = d;
    r.k = k;
    r.value = static_cast<std::uint64_t>(best_value);
    for (std::uint64_t u = 0; u < n; ++u)
        if (best[u]) r.witness.push_back(u);
    r.method = alpha_method::local_search;
    r.exact = false;
    return r;
}

struct ratio_row {
    std::uint32_t d = 0;
    std::uint32_t k = 0;
    std::uint64_t alpha = 0;
    bool exact = false;
    alpha_method method = alpha_method::subset_exhaustive;
    double ratio = 0;
    rational lambda_lo;
    rational lambda_hi;
    double gap = 0; // distance from the ratio to [lambda_lo, lambda_hi]; lo - ratio when collapsed
};

struct ratio_options {
    std::uint64_t seed = default_seed;
    std::uint64_t iterations = 100'000;
    unsigned threads = 1;
};

// alpha(d, k) / d^k against the p = 2 finite-path threshold for k.
inline std::vector<ratio_row> alpha_ratio_report(std::uint32_t d_lo, std::uint32_t d_hi, std::uint32_t k,
                                                 const ratio_options& opt = {}) {
    if (d_lo < 2 || d_hi < d_lo) throw error(errc::bad_arity, "need 2 <= d_lo <= d_hi");
    const auto bounds = finite_path_bounds(2, k);
    std::vector<ratio_row> rows;
    for (std::uint32_t d = d_lo; d <= d_hi; ++d) {
        const debruijn_graph ground(d, k - 1);
        alpha_result r;
        if (ground.size() <= max_subset_ground) {
            r = alpha_subset_exact(d, k, opt.threads);
        } else {
            r = alpha_local_search(d, k, derive_seed(opt.seed, d), opt.iterations);
        }
        ratio_row row;
        row.d = d;
        row.k = k;
        row.alpha = r.value;
        row.exact = r.exact;
        row.method = r.method;
        const double size = std::pow(static_cast<double>(d), static_cast<double>(k));
        row.ratio = static_cast<double>(r.value) / size;
        row.lambda_lo = bounds.lo;
        row.lambda_hi = bounds.hi;
        const double lo = to_double(bounds.lo), hi = to_double(bounds.hi);
        row.gap = std::clamp(row.ratio, lo, hi) - row.ratio;
        rows.push_back(row);
    }
    return rows;
}

} // namespace shiftperc
