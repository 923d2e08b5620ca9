#pragma once

// Exact probabilities of order-pattern events for i.i.d. uniforms. Ties have
// probability zero, so the relative order (a uniformly random permutation)
// decides every event here and m! enumeration gives the exact value.

#include "shiftperc/error.hpp"
#include "shiftperc/graphs.hpp"
#include "shiftperc/parallel.hpp"
#include "shiftperc/rational.hpp"
#include "shiftperc/relations.hpp"
#include "shiftperc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace shiftperc {

inline constexpr std::size_t max_exact_arity = 10;

struct exact_probability {
    std::uint64_t num = 0;
    std::uint64_t den = 1; // m!

    rational value() const { return rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)); }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

// Lexicographic index of the relative order of distinct values: the rank
// sequence (0 = smallest) read as a permutation.
template <class T>
std::uint32_t pattern_rank(std::span<const T> values) {
    const std::size_t m = values.size();
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t smaller_after = 0;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (values[j] == values[i]) throw error(errc::tie_detected, "window values are not distinct");
            smaller_after += values[j] < values[i];
        }
        index = index * (m - i) + smaller_after;
    }
    return static_cast<std::uint32_t>(index);
}

template <class T>
std::uint32_t pattern_rank(const std::vector<T>& values) {
    return pattern_rank(std::span<const T>(values));
}

// Rank sequence of a pattern index, e.g. (2, 0, 1) for the word "201".
inline std::vector<int> pattern_ranks(std::uint32_t index, std::size_t m) {
    std::vector<int> lehmer(m);
    for (std::size_t i = m; i-- > 0;) {
        lehmer[i] = static_cast<int>(index % (m - i));
        index /= static_cast<std::uint32_t>(m - i);
    }
    std::vector<int> pool(m);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> ranks(m);
    for (std::size_t i = 0; i < m; ++i) {
        ranks[i] = pool[static_cast<std::size_t>(lehmer[i])];
        pool.erase(pool.begin() + lehmer[i]);
    }
    return ranks;
}

inline std::string pattern_word(std::uint32_t index, std::size_t m) {
    std::string w;
    for (int r : pattern_ranks(index, m)) w.push_back(static_cast<char>('0' + r));
    return w;
}

inline std::uint32_t pattern_from_word(const std::string& word) {
    std::vector<int> ranks;
    for (char c : word) {
        if (c < '0' || c > '9') throw error(errc::parse_error, "pattern word '" + word + "' has a non-digit");
        ranks.push_back(c - '0');
    }
    auto sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i)) throw error(errc::parse_error, "pattern word '" + word + "' is not a permutation");
    return pattern_rank(std::span<const int>(ranks));
}

// Calls fn(ranks) for every permutation of {0..m-1} (rank of u_i is ranks[i]).
template <class Fn>
void for_each_permutation(std::size_t m, Fn&& fn) {
    std::vector<int> ranks(m);
    std::iota(ranks.begin(), ranks.end(), 0);
    do fn(std::span<const int>(ranks));
    while (std::next_permutation(ranks.begin(), ranks.end()));
}

struct pattern_event {
    std::size_t arity = 0;
    std::function<bool(std::span<const int>)> predicate;
};

inline exact_probability exact_event_probability(const pattern_event& event) {
    if (event.arity > max_exact_arity)
        throw error(errc::arity_too_large, "exact evaluation is limited to arity <= " + std::to_string(max_exact_arity));
    exact_probability p{0, factorial(event.arity)};
    for_each_permutation(event.arity, [&](std::span<const int> ranks) { p.num += event.predicate(ranks); });
    return p;
}

// Index of the window maximum (0-based) reduced mod p.
template <class T>
int argmax_mod_coloring(std::span<const T> window, int p) {
    if (window.empty()) throw error(errc::bad_arity, "empty window");
    if (p < 1) throw error(errc::bad_arity, "need at least one color");
    std::size_t best = 0;
    for (std::size_t i = 1; i < window.size(); ++i)
        if (window[i] > window[best]) best = i;
    for (std::size_t i = 0; i < window.size(); ++i)
        if (i != best && window[i] == window[best]) throw error(errc::tie_detected, "window maximum is not unique");
    return static_cast<int>(best % static_cast<std::size_t>(p));
}

template <class T>
int argmax_mod_coloring(const std::vector<T>& window, int p) {
    return argmax_mod_coloring(std::span<const T>(window), p);
}

// epsilon -> 0 limit of max_j x_j + eps * argmax: lexicographic on
// (max value, position of the max). True iff the first window wins strictly.
template <class T>
bool f_eps_limit_compare(std::span<const T> first, std::span<const T> second) {
    if (first.size() != second.size() || first.empty())
        throw error(errc::arity_mismatch, "windows must be nonempty and of equal length");
    const auto a = std::max_element(first.begin(), first.end());
    const auto b = std::max_element(second.begin(), second.end());
    if (*a != *b) return *a > *b;
    return (a - first.begin()) > (b - second.begin());
}

template <class T>
bool f_eps_limit_compare(const std::vector<T>& first, const std::vector<T>& second) {
    return f_eps_limit_compare(std::span<const T>(first), std::span<const T>(second));
}

enum class coloring_kind { argmax_mod, f_eps_limit, table };

inline std::string_view to_string(coloring_kind k) {
    switch (k) {
    case coloring_kind::argmax_mod: return "argmax_mod";
    case coloring_kind::f_eps_limit: return "f_eps_limit";
    case coloring_kind::table: return "table";
    }
    return "?";
}

// A function of the relative order of `arity` uniforms (argmax_mod, table),
// or the epsilon-limit of the extremal function along an orbit.
class coloring_spec {
public:
    static coloring_spec argmax_mod(std::size_t arity, int p) {
        if (arity == 0 || p < 1) throw error(errc::bad_arity, "argmax_mod needs arity >= 1 and p >= 1");
        coloring_spec c;
        c.kind_ = coloring_kind::argmax_mod;
        c.arity_ = arity;
        c.colors_ = p;
        return c;
    }

    static coloring_spec f_eps_limit(std::size_t orbit_length) {
        if (orbit_length == 0) throw error(errc::bad_arity, "orbit must be nonempty");
        coloring_spec c;
        c.kind_ = coloring_kind::f_eps_limit;
        c.arity_ = orbit_length;
        return c;
    }

    // table[pattern_rank] = color; colors default to 1 + max entry.
    static coloring_spec explicit_table(std::size_t arity, std::vector<int> table, int colors = 0) {
        if (arity == 0 || arity > max_exact_arity) throw error(errc::arity_too_large, "table arity must be in [1, 10]");
        if (table.size() != factorial(arity))
            throw error(errc::incompatible_coloring, "table must list all " + std::to_string(factorial(arity)) + " patterns");
        const int top = *std::max_element(table.begin(), table.end());
        if (colors == 0) colors = top + 1;
        for (int c : table)
            if (c < 0 || c >= colors) throw error(errc::incompatible_coloring, "color out of range");
        coloring_spec s;
        s.kind_ = coloring_kind::table;
        s.arity_ = arity;
        s.colors_ = colors;
        s.table_ = std::move(table);
        return s;
    }

    coloring_kind kind() const { return kind_; }
    std::size_t arity() const { return arity_; }
    int colors() const { return colors_; }
    const std::vector<int>& table() const { return table_; }

    template <class T>
    int color(std::span<const T> window) const {
        if (window.size() != arity_) throw error(errc::arity_mismatch, "window length differs from coloring arity");
        switch (kind_) {
        case coloring_kind::argmax_mod: return argmax_mod_coloring(window, colors_);
        case coloring_kind::table: return table_[pattern_rank(window)];
        case coloring_kind::f_eps_limit: break;
        }
        throw error(errc::incompatible_coloring, "the f_eps limit has no finite color");
    }

    // Strict decrease f(first) > f(second).
    template <class T>
    bool decreases(std::span<const T> first, std::span<const T> second) const {
        if (kind_ == coloring_kind::f_eps_limit) return f_eps_limit_compare(first, second);
        return color(first) > color(second);
    }

private:
    coloring_kind kind_ = coloring_kind::argmax_mod;
    std::size_t arity_ = 0;
    int colors_ = 0;
    std::vector<int> table_;
};

// The event {f(x|S_0) > f(tau*(x))} for a relation and a coloring, as index
// lists into the merged point set S ∪ tau(S).
class relation_event {
public:
    relation_event(const order_relation& rel, coloring_spec coloring) : coloring_(std::move(coloring)) {
        std::vector<point> merged = rel.domain();
        merged.insert(merged.end(), rel.images().begin(), rel.images().end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        points_ = merged.size();
        if (points_ > max_exact_arity)
            throw error(errc::arity_too_large, "relation spans " + std::to_string(points_) + " points (limit 10)");
        auto index_of = [&](point x) {
            return static_cast<std::size_t>(std::lower_bound(merged.begin(), merged.end(), x) - merged.begin());
        };

        if (coloring_.kind() == coloring_kind::f_eps_limit) {
            // longest orbit s, tau(s), ..., tau^{w-2}(s) inside the domain
            const auto w = compute_w(rel);
            const std::size_t orbit = static_cast<std::size_t>(w - 1);
            if (coloring_.arity() != orbit)
                throw error(errc::incompatible_coloring, "f_eps orbit length " + std::to_string(coloring_.arity()) +
                                                             " but w - 1 = " + std::to_string(orbit));
            for (auto start : rel.domain()) {
                std::vector<point> chain{start};
                while (chain.size() < orbit) {
                    auto img = rel(chain.back());
                    if (!img || !rel(*img)) break;
                    chain.push_back(*img);
                }
                if (chain.size() == orbit) {
                    for (auto s : chain) {
                        first_.push_back(index_of(s));
                        second_.push_back(index_of(*rel(s)));
                    }
                    break;
                }
            }
        } else {
            if (coloring_.arity() != rel.size())
                throw error(errc::incompatible_coloring, "coloring arity " + std::to_string(coloring_.arity()) +
                                                             " differs from relation length " + std::to_string(rel.size()));
            for (std::size_t i = 0; i < rel.size(); ++i) {
                first_.push_back(index_of(rel.domain()[i]));
                second_.push_back(index_of(rel.images()[i]));
            }
        }
    }

    std::size_t points() const { return points_; }
    const std::vector<std::size_t>& first_window() const { return first_; }
    const std::vector<std::size_t>& second_window() const { return second_; }

    template <class T>
    bool operator()(std::span<const T> values) const {
        T a[max_exact_arity], b[max_exact_arity];
        for (std::size_t i = 0; i < first_.size(); ++i) {
            a[i] = values[first_[i]];
            b[i] = values[second_[i]];
        }
        return coloring_.decreases(std::span<const T>(a, first_.size()), std::span<const T>(b, second_.size()));
    }

private:
    coloring_spec coloring_;
    std::size_t points_ = 0;
    std::vector<std::size_t> first_;
    std::vector<std::size_t> second_;
};

inline exact_probability z_measure_exact(const order_relation& rel, const coloring_spec& coloring) {
    const relation_event event(rel, coloring);
    return exact_event_probability({event.points(), [&](std::span<const int> ranks) { return event(ranks); }});
}

// Joint distribution of (pattern of x|S, pattern of tau*(x)) for a length-k
// relation: counts[a * k! + b]. Any table coloring's measure is a sum over it.
struct window_pair_counts {
    std::size_t arity = 0;
    std::uint64_t total = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<std::uint64_t> counts;

    std::uint64_t measure(std::span<const int> table) const {
        std::uint64_t num = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (table[pairs[i].first] > table[pairs[i].second]) num += counts[i];
        return num;
    }
};

namespace detail {

inline window_pair_counts collect_pairs(std::size_t arity, std::uint64_t total,
                                        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& raw) {
    window_pair_counts out;
    out.arity = arity;
    out.total = total;
    auto sorted = raw;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        out.pairs.push_back(sorted[i]);
        out.counts.push_back(j - i);
        i = j;
    }
    return out;
}

} // namespace detail

inline window_pair_counts relation_pair_counts(const order_relation& rel) {
    const relation_event event(rel, coloring_spec::explicit_table(rel.size(), std::vector<int>(factorial(rel.size()), 0)));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
    std::vector<int> a(rel.size()), b(rel.size());
    for_each_permutation(event.points(), [&](std::span<const int> ranks) {
        for (std::size_t i = 0; i < rel.size(); ++i) {
            a[i] = ranks[event.first_window()[i]];
            b[i] = ranks[event.second_window()[i]];
        }
        raw.emplace_back(pattern_rank(a), pattern_rank(b));
    });
    return detail::collect_pairs(rel.size(), factorial(event.points()), raw);
}

// Windows (u_1..u_{k-1}) and (u_2..u_k) of k uniforms.
inline window_pair_counts shift_window_counts(std::size_t k) {
    if (k < 2) throw error(errc::bad_arity, "shift windows need k >= 2");
    if (k > 9) throw error(errc::arity_too_large, "shift window enumeration is limited to k <= 9");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
    raw.reserve(factorial(k));
    for_each_permutation(k, [&](std::span<const int> ranks) {
        raw.emplace_back(pattern_rank(ranks.first(k - 1)), pattern_rank(ranks.subspan(1)));
    });
    return detail::collect_pairs(k - 1, factorial(k), raw);
}

// Probability that argmax-mod-p colors of (u_1..u_{k-1}) and (u_2..u_k)
// strictly decrease.
inline exact_probability finite_path_construction_measure(int p, std::size_t k) {
    if (p < 1) throw error(errc::bad_arity, "p must be >= 1");
    if (k < 2) throw error(errc::bad_arity, "k must be >= 2");
    if (k > 9) throw error(errc::arity_too_large, "construction enumeration is limited to k <= 9");
    exact_probability out{0, factorial(k)};
    for_each_permutation(k, [&](std::span<const int> ranks) {
        out.num += argmax_mod_coloring(ranks.first(k - 1), p) > argmax_mod_coloring(ranks.subspan(1), p);
    });
    return out;
}

struct search_options {
    std::uint64_t seed = default_seed;
    std::uint64_t exhaustive_budget = 1ULL << 22; // tables
    std::size_t restarts = 32;
};

struct coloring_search_result {
    coloring_spec coloring;
    exact_probability value;
    bool exhaustive = false;
};

namespace detail {

inline bool advance_odometer(std::vector<int>& digits, int base) {
    for (auto& d : digits) {
        if (++d < base) return true;
        d = 0;
    }
    return false;
}

inline bool within_budget(std::uint64_t base, std::uint64_t exponent, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (std::uint64_t i = 0; i < exponent; ++i) {
        if (total > budget / base) return false;
        total *= base;
    }
    return total <= budget;
}

// First-improvement recoloring with seeded perturbation restarts. `evaluate`
// returns the numerator of the measure for a full table.
template <class Evaluate>
std::pair<std::vector<int>, std::uint64_t> local_search(std::vector<int> table, int colors, const Evaluate& evaluate,
                                                        const search_options& opt) {
    counter_rng rng(opt.seed, 0x5ea2c4);
    auto climb = [&](std::vector<int>& t) {
        std::uint64_t value = evaluate(t);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t a = 0; a < t.size(); ++a) {
                const int old = t[a];
                for (int c = 0; c < colors; ++c) {
                    if (c == old) continue;
                    t[a] = c;
                    const auto v = evaluate(t);
                    if (v > value) {
                        value = v;
                        improved = true;
                        break;
                    }
                    t[a] = old;
                }
            }
        }
        return value;
    };
    auto best = table;
    auto best_value = climb(best);
    for (std::size_t r = 0; r < opt.restarts; ++r) {
        auto t = best;
        const std::size_t flips = 1 + t.size() / 8;
        for (std::size_t f = 0; f < flips; ++f)
            t[rng.below(t.size())] = static_cast<int>(rng.below(static_cast<std::uint64_t>(colors)));
        const auto v = climb(t);
        if (v > best_value) {
            best_value = v;
            best = std::move(t);
        }
    }
    return {best, best_value};
}

} // namespace detail

// sup over pattern tables g on k-1 arguments with p colors of
// P(g(u_1..u_{k-1}) > g(u_2..u_k)). Exhaustive for (k-1)! <= 8 within the
// budget; otherwise a local search seeded with the argmax-mod-p table.
inline coloring_search_result best_pattern_coloring(std::size_t k, int p, const search_options& opt = {}) {
    if (p < 1) throw error(errc::bad_arity, "p must be >= 1");
    const auto counts = shift_window_counts(k);
    const std::size_t patterns = factorial(k - 1);
    auto evaluate = [&](const std::vector<int>& t) { return counts.measure(t); };

    coloring_search_result result;
    if (patterns <= 8 && detail::within_budget(static_cast<std::uint64_t>(p), patterns, opt.exhaustive_budget)) {
        std::vector<int> table(patterns, 0), best = table;
        std::uint64_t best_value = evaluate(table);
        while (detail::advance_odometer(table, p)) {
            const auto v = evaluate(table);
            if (v > best_value) {
                best_value = v;
                best = table;
            }
        }
        result.coloring = coloring_spec::explicit_table(k - 1, best, p);
        result.value = {best_value, counts.total};
        result.exhaustive = true;
        return result;
    }
    std::vector<int> seed_table(patterns);
    for (std::uint32_t a = 0; a < patterns; ++a) seed_table[a] = argmax_mod_coloring(pattern_ranks(a, k - 1), p);
    auto [best, best_value] = detail::local_search(std::move(seed_table), p, evaluate, opt);
    result.coloring = coloring_spec::explicit_table(k - 1, best, p);
    result.value = {best_value, counts.total};
    result.exhaustive = false;
    return result;
}

// For a relation set on k-tuples: tables f on the k-window, scored by the
// probability that f_tau(x|Sigma_tau) > f_tau(psi_tau^#(x)) for every tau,
// where f_tau maximizes f over the coordinates outside Sigma_tau.
class family_objective {
public:
    explicit family_objective(const relation_set& set) : k_(set.k()) {
        if (k_ > 8) throw error(errc::arity_too_large, "family search is limited to k <= 8");
        const std::size_t full = factorial(k_);
        for (const auto& rel : set) {
            member m;
            const auto core = core_positions(rel);
            m.sub_arity = core.size();
            m.restriction.resize(full);
            std::vector<int> sub(core.size());
            for (std::uint32_t pi = 0; pi < full; ++pi) {
                const auto ranks = pattern_ranks(pi, k_);
                for (std::size_t c = 0; c < core.size(); ++c) sub[c] = ranks[core[c].first];
                m.restriction[pi] = core.empty() ? 0 : pattern_rank(std::span<const int>(sub));
            }
            // every k-permutation of the uniforms on S
            std::vector<int> a(core.size()), b(core.size());
            for_each_permutation(k_, [&](std::span<const int> ranks) {
                for (std::size_t c = 0; c < core.size(); ++c) {
                    a[c] = ranks[core[c].first];
                    b[c] = ranks[core[c].second];
                }
                if (core.empty()) {
                    m.left.push_back(0);
                    m.right.push_back(0);
                } else {
                    m.left.push_back(pattern_rank(std::span<const int>(a)));
                    m.right.push_back(pattern_rank(std::span<const int>(b)));
                }
            });
            members_.push_back(std::move(m));
        }
    }

    std::size_t arity() const { return k_; }
    std::uint64_t total() const { return factorial(k_); }

    std::uint64_t operator()(const std::vector<int>& table) const {
        std::vector<std::vector<int>> sup(members_.size());
        for (std::size_t t = 0; t < members_.size(); ++t) {
            const auto& m = members_[t];
            sup[t].assign(factorial(m.sub_arity), -1);
            for (std::size_t pi = 0; pi < table.size(); ++pi)
                sup[t][m.restriction[pi]] = std::max(sup[t][m.restriction[pi]], table[pi]);
        }
        std::uint64_t num = 0;
        const std::size_t perms = members_.empty() ? 0 : members_.front().left.size();
        for (std::size_t x = 0; x < perms; ++x) {
            bool all = true;
            for (std::size_t t = 0; t < members_.size() && all; ++t)
                all = sup[t][members_[t].left[x]] > sup[t][members_[t].right[x]];
            num += all;
        }
        return num;
    }

private:
    struct member {
        std::size_t sub_arity = 0;
        std::vector<std::uint32_t> restriction;
        std::vector<std::uint32_t> left;
        std::vector<std::uint32_t> right;
    };
    std::size_t k_;
    std::vector<member> members_;
};

inline coloring_search_result best_family_coloring(const relation_set& set, int colors, const search_options& opt = {}) {
    if (set.empty()) throw error(errc::empty_family, "relation set is empty");
    if (colors < 1) throw error(errc::bad_arity, "need at least one color");
    const family_objective objective(set);
    const std::size_t patterns = factorial(objective.arity());
    coloring_search_result result;
    if (detail::within_budget(static_cast<std::uint64_t>(colors), patterns, opt.exhaustive_budget >> 6)) {
        std::vector<int> table(patterns, 0), best = table;
        std::uint64_t best_value = objective(table);
        while (detail::advance_odometer(table, colors)) {
            const auto v = objective(table);
            if (v > best_value) {
                best_value = v;
                best = table;
            }
        }
        result.coloring = coloring_spec::explicit_table(objective.arity(), best, colors);
        result.value = {best_value, objective.total()};
        result.exhaustive = true;
        return result;
    }
    std::vector<int> seed_table(patterns);
    for (std::uint32_t a = 0; a < patterns; ++a)
        seed_table[a] = argmax_mod_coloring(pattern_ranks(a, objective.arity()), colors);
    auto [best, best_value] = detail::local_search(std::move(seed_table), colors, objective, opt);
    result.coloring = coloring_spec::explicit_table(objective.arity(), best, colors);
    result.value = {best_value, objective.total()};
    return result;
}

// Hierarchical-uniform field on N^[k] truncated to {0..n-1}: vertex v gets
// f(u_B : B nonempty subset of v), with u_B a fixed function of (seed, B).
// Uniforms are passed indexed by position mask - 1. Values follow colex order.
using ah_function = std::function<double(std::span<const double>)>;

inline std::vector<double> ah_sample(const ah_function& f, std::size_t k, std::size_t n, std::uint64_t seed) {
    if (k == 0 || k > 16) throw error(errc::bad_arity, "k must be in [1, 16]");
    if (n < k) throw error(errc::too_small, "n must be >= k");
    if (choose(n, k) > max_truncated_vertices) throw error(errc::too_large, "too many vertices");
    const std::size_t subsets = (std::size_t{1} << k) - 1;
    std::vector<double> values;
    values.reserve(choose(n, k));
    std::vector<tuple_value> v(k), members;
    std::vector<double> uniforms(subsets);
    for (std::size_t i = 0; i < k; ++i) v[i] = static_cast<tuple_value>(i);
    while (true) {
        for (std::size_t mask = 1; mask <= subsets; ++mask) {
            members.clear();
            for (std::size_t i = 0; i < k; ++i)
                if (mask >> i & 1) members.push_back(v[i]);
            uniforms[mask - 1] = subset_uniform(seed, members);
        }
        values.push_back(f(uniforms));
        std::size_t i = 0;
        while (i + 1 < k && v[i] + 1 == v[i + 1]) ++i;
        if (v[i] + 1 >= n) break;
        ++v[i];
        for (std::size_t j = 0; j < i; ++j) v[j] = static_cast<tuple_value>(j);
    }
    return values;
}

// Level-1 argmax-mod-p indicator on the shift windows of a k-tuple: the
// percolation extremal field written as an Aldous-Hoover function.
inline ah_function level1_extremal_indicator(std::size_t k, int p) {
    return [k, p](std::span<const double> u) {
        std::vector<double> level1(k);
        for (std::size_t i = 0; i < k; ++i) level1[i] = u[(std::size_t{1} << i) - 1];
        const std::span<const double> all(level1);
        return argmax_mod_coloring(all.first(k - 1), p) > argmax_mod_coloring(all.subspan(1), p) ? 1.0 : 0.0;
    };
}

inline constexpr double z99 = 2.5758293035489004;

struct mc_estimate {
    double estimate = 0;
    double half_width = 0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    double lo() const { return estimate - half_width; }
    double hi() const { return estimate + half_width; }
    bool contains(double x) const { return x >= lo() && x <= hi(); }
};

inline mc_estimate z_measure_mc(const order_relation& rel, const coloring_spec& coloring, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads = 1) {
    if (samples < 1000) throw error(errc::too_small, "Monte Carlo needs at least 1000 samples");
    const relation_event event(rel, coloring);
    constexpr std::uint64_t block = 4096;
    const std::uint64_t blocks = (samples + block - 1) / block;
    std::vector<std::uint64_t> hits(blocks, 0);
    parallel_for(blocks, threads, [&](std::size_t b) {
        counter_rng rng(seed, b);
        std::vector<double> x(event.points());
        const std::uint64_t end = std::min<std::uint64_t>(samples, (b + 1) * block);
        for (std::uint64_t s = b * block; s < end; ++s) {
            for (auto& u : x) u = rng.uniform();
            hits[b] += event(std::span<const double>(x));
        }
    });
    mc_estimate est;
    est.samples = samples;
    est.seed = seed;
    est.hits = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
    est.half_width = z99 * std::sqrt(est.estimate * (1 - est.estimate) / static_cast<double>(samples));
    return est;
}

} // namespace shiftperc
