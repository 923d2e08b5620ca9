#pragma once

// Finite truncations of contractable graphs G_C on increasing k-tuples of
// {0,...,n-1}, shift graphs, de Bruijn graphs, and DAG heights/longest paths.
//
// Vertices are identified with their colexicographic rank. Since every edge
// (v, v') has v'_{k-1} > v_{k-1}, rank order is a topological order.

#include "shiftperc/error.hpp"
#include "shiftperc/relations.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace shiftperc {

using vertex_id = std::uint32_t;
using tuple_value = std::uint32_t;

inline constexpr std::uint64_t max_truncated_vertices = 1ULL << 24;
inline constexpr std::uint32_t max_materialized_n = 64;

// Binomial coefficients C(i, j) for i < rows, j <= cols; saturates at uint64 max.
class binomial_table {
public:
    binomial_table() = default;
    binomial_table(std::size_t rows, std::size_t cols) : cols_(cols + 1), table_(rows * (cols + 1), 0) {
        for (std::size_t i = 0; i < rows; ++i) {
            at(i, 0) = 1;
            for (std::size_t j = 1; j <= cols && j <= i; ++j) {
                const auto a = at(i - 1, j - 1);
                const auto b = j <= i - 1 ? at(i - 1, j) : 0;
                at(i, j) = a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                                               : a + b;
            }
        }
    }

    std::uint64_t operator()(std::size_t i, std::size_t j) const { return j >= cols_ ? 0 : table_[i * cols_ + j]; }

private:
    std::uint64_t& at(std::size_t i, std::size_t j) { return table_[i * cols_ + j]; }
    std::size_t cols_ = 0;
    std::vector<std::uint64_t> table_;
};

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

namespace detail {

inline void require_increasing(std::span<const tuple_value> v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) throw error(errc::not_increasing, std::string(what) + " is not strictly increasing");
}

// Set-level roles of the merged configuration (v, w).
inline edge_roles merged_roles(std::span<const tuple_value> v, std::span<const tuple_value> w) {
    edge_roles roles;
    roles.reserve(v.size() + w.size());
    std::size_t i = 0, j = 0;
    while (i < v.size() || j < w.size()) {
        if (j == w.size() || (i < v.size() && v[i] < w[j])) {
            roles.push_back(role::domain_only);
            ++i;
        } else if (i == v.size() || w[j] < v[i]) {
            roles.push_back(role::image_only);
            ++j;
        } else {
            roles.push_back(role::both);
            ++i;
            ++j;
        }
    }
    return roles;
}

// Successor template derived from one edge pattern: how many fresh image
// points sit in the gap after each domain point, and which domain points are
// themselves images.
struct successor_template {
    edge_roles roles;
    std::vector<std::size_t> fresh_after; // size k
    std::vector<bool> domain_is_image;    // size k
    bool valid = true;                    // no fresh point before a_0

    explicit successor_template(edge_roles r) : roles(std::move(r)) {
        std::size_t d = 0;
        bool seen_domain = false;
        for (auto x : roles) {
            if (x == role::image_only) {
                if (!seen_domain) {
                    valid = false;
                    continue;
                }
                ++fresh_after[d - 1];
            } else {
                seen_domain = true;
                fresh_after.push_back(0);
                domain_is_image.push_back(x == role::both);
                ++d;
            }
        }
    }
};

// Fills head with the image points of every placement of fresh points; gap
// g is the open interval (t[g], t[g+1]) or (t[k-1], n).
template <class Fn>
void enumerate_heads(const successor_template& tpl, std::span<const tuple_value> t, std::size_t n, std::size_t gap,
                     std::size_t placed_in_gap, std::size_t filled, std::vector<tuple_value>& head, Fn&& fn) {
    const std::size_t k = t.size();
    if (gap == k) {
        fn(std::span<const tuple_value>(head));
        return;
    }
    if (placed_in_gap == 0 && tpl.domain_is_image[gap]) head[filled++] = t[gap];
    if (placed_in_gap == tpl.fresh_after[gap]) {
        enumerate_heads(tpl, t, n, gap + 1, 0, filled, head, fn);
        return;
    }
    const std::size_t upper = gap + 1 < k ? t[gap + 1] : n; // exclusive
    const std::size_t remaining = tpl.fresh_after[gap] - placed_in_gap;
    const std::size_t lower = placed_in_gap == 0 ? std::size_t{t[gap]} + 1 : std::size_t{head[filled - 1]} + 1;
    for (std::size_t x = lower; x + remaining <= upper; ++x) {
        head[filled] = static_cast<tuple_value>(x);
        enumerate_heads(tpl, t, n, gap, placed_in_gap + 1, filled + 1, head, fn);
    }
}

} // namespace detail

// True iff some increasing map carries (S_tau, sorted tau(S_tau)) onto (v, w).
inline bool satisfies(std::span<const tuple_value> v, std::span<const tuple_value> w, const order_relation& rel) {
    if (v.size() != rel.size() || w.size() != rel.size())
        throw error(errc::arity_mismatch, "tuple length does not match relation length " + std::to_string(rel.size()));
    detail::require_increasing(v, "tail tuple");
    detail::require_increasing(w, "head tuple");
    return detail::merged_roles(v, w) == edge_roles_of(rel);
}

struct graph_summary {
    std::size_t k = 0;
    std::size_t n = 0;
    std::uint64_t vertices = 0;
    std::uint64_t edges = 0;
    std::string spec;
};

// Compressed adjacency, only for small truncations.
struct csr_adjacency {
    std::vector<std::uint64_t> offsets;
    std::vector<vertex_id> targets;

    std::span<const vertex_id> successors(vertex_id v) const {
        return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
    }
};

class truncated_graph {
public:
    truncated_graph(relation_set spec, std::size_t n, bool shift) : spec_(std::move(spec)), k_(spec_.k()), n_(n), shift_(shift) {
        if (n_ < k_) throw error(errc::too_small, "n = " + std::to_string(n_) + " is smaller than k = " + std::to_string(k_));
        const auto count = choose(n_, k_);
        if (count > max_truncated_vertices)
            throw error(errc::too_large, "C(" + std::to_string(n_) + "," + std::to_string(k_) + ") vertices exceeds budget");
        binom_ = binomial_table(n_ + 1, k_ + 1);
        vertex_count_ = static_cast<std::size_t>(count);
        build_tuples();
        std::set<edge_roles> distinct;
        for (const auto& rel : spec_) distinct.insert(edge_roles_of(rel));
        for (const auto& r : distinct) templates_.emplace_back(r);
        for (const auto& t : templates_) roles_.push_back(t.roles);
    }

    std::size_t k() const { return k_; }
    std::size_t n() const { return n_; }
    std::size_t vertex_count() const { return vertex_count_; }
    bool is_shift() const { return shift_; }
    const relation_set& spec() const { return spec_; }

    std::span<const tuple_value> tuple(vertex_id v) const { return {tuples_.data() + std::size_t{v} * k_, k_}; }

    vertex_id rank(std::span<const tuple_value> t) const {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < t.size(); ++i) r += binom_(t[i], i + 1);
        return static_cast<vertex_id>(r);
    }

    bool has_edge(vertex_id a, vertex_id b) const {
        const auto roles = detail::merged_roles(tuple(a), tuple(b));
        return std::find(roles_.begin(), roles_.end(), roles) != roles_.end();
    }

    template <class Fn>
    void for_each_successor(vertex_id v, Fn&& fn) const {
        const auto t = tuple(v);
        if (shift_) {
            // (v_1, ..., v_{k-1}, j) for j > v_{k-1}
            std::uint64_t base = 0;
            for (std::size_t i = 1; i < k_; ++i) base += binom_(t[i], i);
            for (std::size_t j = t[k_ - 1] + 1; j < n_; ++j) fn(static_cast<vertex_id>(base + binom_(j, k_)));
            return;
        }
        std::vector<tuple_value> head(k_);
        for (const auto& tpl : templates_) {
            if (!tpl.valid) continue;
            detail::enumerate_heads(tpl, t, n_, 0, 0, 0, head, [&](std::span<const tuple_value> w) { fn(rank(w)); });
        }
    }

    std::vector<vertex_id> successors(vertex_id v) const {
        std::vector<vertex_id> out;
        for_each_successor(v, [&](vertex_id w) { out.push_back(w); });
        std::sort(out.begin(), out.end());
        return out;
    }

    std::uint64_t edge_count() const {
        if (shift_) return choose(n_, k_ + 1);
        std::uint64_t e = 0;
        for (vertex_id v = 0; v < vertex_count_; ++v) for_each_successor(v, [&](vertex_id) { ++e; });
        return e;
    }

    csr_adjacency materialize() const {
        if (n_ > max_materialized_n)
            throw error(errc::too_large, "materialization is limited to n <= " + std::to_string(max_materialized_n));
        csr_adjacency adj;
        adj.offsets.reserve(vertex_count_ + 1);
        adj.offsets.push_back(0);
        for (vertex_id v = 0; v < vertex_count_; ++v) {
            auto s = successors(v);
            adj.targets.insert(adj.targets.end(), s.begin(), s.end());
            adj.offsets.push_back(adj.targets.size());
        }
        return adj;
    }

    std::string spec_name() const { return shift_ ? "shift" : "relations"; }

    graph_summary summary() const { return {k_, n_, vertex_count_, edge_count(), spec_name()}; }

private:
    void build_tuples() {
        tuples_.resize(vertex_count_ * k_);
        std::vector<tuple_value> cur(k_);
        for (std::size_t i = 0; i < k_; ++i) cur[i] = static_cast<tuple_value>(i);
        // colex successor: bump the lowest coordinate that can move
        for (std::size_t v = 0; v < vertex_count_; ++v) {
            std::copy(cur.begin(), cur.end(), tuples_.begin() + static_cast<std::ptrdiff_t>(v * k_));
            std::size_t i = 0;
            while (i + 1 < k_ && cur[i] + 1 == cur[i + 1]) ++i;
            ++cur[i];
            for (std::size_t j = 0; j < i; ++j) cur[j] = static_cast<tuple_value>(j);
        }
    }

    relation_set spec_;
    std::size_t k_;
    std::size_t n_;
    bool shift_;
    std::size_t vertex_count_ = 0;
    binomial_table binom_;
    std::vector<tuple_value> tuples_;
    std::vector<detail::successor_template> templates_;
    std::vector<edge_roles> roles_;
};

inline truncated_graph build_truncated(const relation_set& spec, std::size_t n) {
    const bool is_shift = spec.size() == 1 && canonical_pattern(spec.relations().front()) ==
                                                  canonical_pattern(shift_relation(spec.k()));
    return truncated_graph(spec, n, is_shift);
}

inline truncated_graph shift_graph(std::size_t k, std::size_t n) {
    if (k == 0) throw error(errc::bad_arity, "k must be positive");
    return truncated_graph(relation_set({shift_relation(k)}), n, true);
}

inline void write_tuple(std::ostream& os, std::span<const tuple_value> t) {
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
}

// One `v;v2` row per edge, tuples comma-separated.
inline void write_edges_csv(std::ostream& os, const truncated_graph& g) {
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        for (auto w : g.successors(v)) {
            write_tuple(os, g.tuple(v));
            os << ';';
            write_tuple(os, g.tuple(w));
            os << '\n';
        }
    }
}

// Relations whose graph is the line graph of G_rel: edges of G_rel become the
// merged tuples S ∪ tau(S), and two such tuples are joined iff the first
// edge's head is the second edge's tail.
inline relation_set lift_edges(const order_relation& rel) {
    const auto roles = edge_roles_of(rel);
    const std::size_t m = roles.size();
    const std::size_t k = rel.size();
    std::size_t fresh = 0;
    for (auto r : roles) fresh += r == role::image_only;

    // e1 on spaced points so that every order type of e2's fresh points
    // against e1's points is realized by some integer placement.
    const std::size_t spacing = fresh + 1;
    const std::size_t universe = spacing * (m + 1);
    std::vector<tuple_value> merged1(m), tail(k), head(k);
    std::size_t d = 0, h = 0;
    for (std::size_t i = 0; i < m; ++i) {
        merged1[i] = static_cast<tuple_value>(spacing * (i + 1));
        if (roles[i] != role::image_only) tail[d++] = merged1[i];
        if (roles[i] != role::domain_only) head[h++] = merged1[i];
    }

    const detail::successor_template tpl(roles);
    std::vector<order_relation> lifted;
    std::vector<tuple_value> next(k);
    detail::enumerate_heads(tpl, head, universe, 0, 0, 0, next, [&](std::span<const tuple_value> w) {
        std::vector<tuple_value> merged2;
        std::set_union(head.begin(), head.end(), w.begin(), w.end(), std::back_inserter(merged2));
        std::vector<point> dom(merged1.begin(), merged1.end());
        std::vector<point> img(merged2.begin(), merged2.end());
        lifted.push_back(validate_relation(std::move(dom), std::move(img)));
    });
    return relation_set(std::move(lifted));
}

inline std::vector<vertex_id> topological_order(const truncated_graph& g) {
    std::vector<vertex_id> order(g.vertex_count());
    for (vertex_id v = 0; v < order.size(); ++v) order[v] = v;
    for (vertex_id v = 0; v < order.size(); ++v)
        g.for_each_successor(v, [&](vertex_id w) {
            if (w <= v) throw error(errc::cycle_detected, "edge does not go forward in rank order");
        });
    return order;
}

struct height_field {
    std::vector<std::uint32_t> h;

    std::uint32_t max() const { return h.empty() ? 0 : *std::max_element(h.begin(), h.end()); }
    std::uint32_t operator[](vertex_id v) const { return h[v]; }
};

// h(v) = 0 if v is excluded, else 1 + max h over included successors.
template <class Included>
height_field heights(const truncated_graph& g, Included&& included) {
    height_field field;
    field.h.assign(g.vertex_count(), 0);
    for (std::size_t i = g.vertex_count(); i-- > 0;) {
        const auto v = static_cast<vertex_id>(i);
        if (!included(v)) continue;
        std::uint32_t best = 0;
        g.for_each_successor(v, [&](vertex_id w) { best = std::max(best, field.h[w]); });
        field.h[v] = best + 1;
    }
    return field;
}

struct path_result {
    std::size_t length = 0; // edges
    std::vector<vertex_id> witness;
};

inline path_result path_from_heights(const truncated_graph& g, const height_field& field) {
    path_result r;
    const auto top = field.max();
    if (top == 0) return r;
    vertex_id cur = static_cast<vertex_id>(std::find(field.h.begin(), field.h.end(), top) - field.h.begin());
    r.witness.push_back(cur);
    while (field.h[cur] > 1) {
        const auto want = field.h[cur] - 1;
        vertex_id next = cur;
        bool found = false;
        g.for_each_successor(cur, [&](vertex_id w) {
            if (!found && field.h[w] == want) {
                next = w;
                found = true;
            }
        });
        cur = next;
        r.witness.push_back(cur);
    }
    r.length = r.witness.size() - 1;
    return r;
}

// Longest directed path (in edges) through included vertices, with a witness.
template <class Included>
path_result longest_path(const truncated_graph& g, Included&& included) {
    return path_from_heights(g, heights(g, std::forward<Included>(included)));
}

inline path_result longest_path(const truncated_graph& g) {
    return longest_path(g, [](vertex_id) { return true; });
}

// B(d, k): strings of length k over {0..d-1}, encoded base d with the first
// letter most significant; x -> y iff suffix_{k-1}(x) = prefix_{k-1}(y).
class debruijn_graph {
public:
    static constexpr std::uint64_t max_vertices = 1ULL << 26;

    debruijn_graph(std::uint32_t d, std::uint32_t k) : d_(d), k_(k) {
        if (d < 2 || d > 36) throw error(errc::bad_arity, "alphabet size must be in [2, 36]");
        if (k < 1) throw error(errc::bad_arity, "string length must be >= 1");
        std::uint64_t size = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            size *= d;
            if (size > max_vertices) throw error(errc::too_large, "d^k exceeds the vertex budget");
        }
        size_ = size;
        suffix_mod_ = size / d;
    }

    std::uint32_t d() const { return d_; }
    std::uint32_t k() const { return k_; }
    std::uint64_t size() const { return size_; }
    std::uint64_t edge_count() const { return size_ * d_; }

    std::uint64_t successor(std::uint64_t x, std::uint32_t letter) const { return (x % suffix_mod_) * d_ + letter; }
    std::uint64_t predecessor(std::uint64_t x, std::uint32_t letter) const { return x / d_ + letter * suffix_mod_; }

    bool has_edge(std::uint64_t x, std::uint64_t y) const { return x % suffix_mod_ == y / d_; }
    bool is_self_loop(std::uint64_t x) const { return has_edge(x, x); }

    std::uint64_t prefix(std::uint64_t x) const { return x / d_; }
    std::uint64_t suffix(std::uint64_t x) const { return x % suffix_mod_; }

    std::string label(std::uint64_t x) const { return format_label(x, d_, k_); }

    static std::string format_label(std::uint64_t x, std::uint32_t d, std::uint32_t len) {
        static constexpr char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
        std::string s(len, '0');
        for (std::uint32_t i = len; i-- > 0;) {
            s[i] = digits[x % d];
            x /= d;
        }
        return s;
    }

    std::uint64_t parse_label(const std::string& s) const {
        if (s.size() != k_) throw error(errc::parse_error, "label '" + s + "' has wrong length");
        std::uint64_t x = 0;
        for (char c : s) {
            const std::uint32_t digit = c >= '0' && c <= '9' ? std::uint32_t(c - '0')
                                        : c >= 'a' && c <= 'z' ? std::uint32_t(c - 'a' + 10)
                                                               : d_;
            if (digit >= d_) throw error(errc::parse_error, "label '" + s + "' has an invalid letter");
            x = x * d_ + digit;
        }
        return x;
    }

private:
    std::uint32_t d_;
    std::uint32_t k_;
    std::uint64_t size_ = 0;
    std::uint64_t suffix_mod_ = 1;
};

inline debruijn_graph debruijn(std::uint32_t d, std::uint32_t k) {
    if (k < 2) throw error(errc::bad_arity, "de Bruijn graphs need k >= 2");
    return debruijn_graph(d, k);
}

} // namespace shiftperc
