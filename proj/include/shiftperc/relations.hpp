#pragma once

// Order relations on finite sets of naturals, their relabeling-invariant
// patterns, the core sub-map and the width w, and the closed-form
// thresholds built from w.

#include "shiftperc/error.hpp"
#include "shiftperc/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace shiftperc {

using point = std::int64_t;

// tau : {a_0 < ... < a_{k-1}} -> N with tau(a_i) > a_i and distinct images.
class order_relation {
public:
    order_relation() = default;

    std::size_t size() const { return domain_.size(); }
    const std::vector<point>& domain() const { return domain_; }
    const std::vector<point>& images() const { return images_; }

    std::vector<point> sorted_images() const {
        auto s = images_;
        std::sort(s.begin(), s.end());
        return s;
    }

    // image of a, if a is in the domain
    std::optional<point> operator()(point a) const {
        auto it = std::lower_bound(domain_.begin(), domain_.end(), a);
        if (it == domain_.end() || *it != a) return std::nullopt;
        return images_[static_cast<std::size_t>(it - domain_.begin())];
    }

    friend bool operator==(const order_relation&, const order_relation&) = default;

private:
    friend order_relation validate_relation(std::vector<point>, std::vector<point>);
    std::vector<point> domain_;
    std::vector<point> images_;
};

inline order_relation validate_relation(std::vector<point> domain, std::vector<point> images) {
    if (domain.size() != images.size())
        throw error(errc::length_mismatch, "domain has " + std::to_string(domain.size()) + " points, images " +
                                               std::to_string(images.size()));
    if (domain.empty()) throw error(errc::bad_arity, "order relation needs k >= 1");
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (domain[i] < 0) throw error(errc::not_increasing, "domain points must be natural numbers");
        if (i > 0 && domain[i] <= domain[i - 1])
            throw error(errc::not_increasing, "domain must be strictly increasing at index " + std::to_string(i));
    }
    auto sorted = images;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw error(errc::image_collision, "images must be pairwise distinct");
    for (std::size_t i = 0; i < domain.size(); ++i)
        if (images[i] <= domain[i])
            throw error(errc::not_progressive, "image " + std::to_string(images[i]) + " of " +
                                                   std::to_string(domain[i]) + " does not exceed it");
    order_relation rel;
    rel.domain_ = std::move(domain);
    rel.images_ = std::move(images);
    return rel;
}

// s restricted to {start, ..., start+k-1}
inline order_relation shift_relation(std::size_t k, point start = 1) {
    std::vector<point> domain(k), images(k);
    for (std::size_t i = 0; i < k; ++i) {
        domain[i] = start + static_cast<point>(i);
        images[i] = domain[i] + 1;
    }
    return validate_relation(std::move(domain), std::move(images));
}

// One merged point of S ∪ tau(S): whether it is in the domain, and which
// domain index maps onto it (-1 if it is not an image).
struct pattern_point {
    bool in_domain = false;
    int source = -1;

    bool is_image() const { return source >= 0; }
    friend auto operator<=>(const pattern_point&, const pattern_point&) = default;
};

struct pattern {
    std::size_t k = 0;
    std::vector<pattern_point> points;

    std::size_t size() const { return points.size(); }
    friend auto operator<=>(const pattern&, const pattern&) = default;
};

inline pattern canonical_pattern(const order_relation& rel) {
    std::vector<point> merged = rel.domain();
    merged.insert(merged.end(), rel.images().begin(), rel.images().end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    pattern pat;
    pat.k = rel.size();
    pat.points.resize(merged.size());
    for (std::size_t i = 0; i < rel.size(); ++i) {
        auto d = std::lower_bound(merged.begin(), merged.end(), rel.domain()[i]) - merged.begin();
        pat.points[static_cast<std::size_t>(d)].in_domain = true;
        auto t = std::lower_bound(merged.begin(), merged.end(), rel.images()[i]) - merged.begin();
        pat.points[static_cast<std::size_t>(t)].source = static_cast<int>(i);
    }
    return pat;
}

// Role of a merged point when only the vertex pair (S, sorted tau(S)) is seen.
enum class role : std::uint8_t { domain_only, image_only, both };

using edge_roles = std::vector<role>;

inline edge_roles roles_of(const pattern& pat) {
    edge_roles roles;
    roles.reserve(pat.size());
    for (const auto& p : pat.points)
        roles.push_back(p.in_domain && p.is_image() ? role::both : p.in_domain ? role::domain_only : role::image_only);
    return roles;
}

inline edge_roles edge_roles_of(const order_relation& rel) { return roles_of(canonical_pattern(rel)); }

inline bool equivalent(const order_relation& a, const order_relation& b) {
    if (a.size() != b.size())
        throw error(errc::length_mismatch, "relations of length " + std::to_string(a.size()) + " and " +
                                               std::to_string(b.size()));
    return canonical_pattern(a) == canonical_pattern(b);
}

// Concrete relation realizing a pattern on the points 1..m.
inline order_relation realize(const pattern& pat) {
    std::vector<point> domain(pat.k), images(pat.k);
    std::size_t d = 0;
    for (std::size_t pos = 0; pos < pat.size(); ++pos) {
        const point value = static_cast<point>(pos) + 1;
        if (pat.points[pos].in_domain) domain[d++] = value;
        if (pat.points[pos].is_image()) images[static_cast<std::size_t>(pat.points[pos].source)] = value;
    }
    return validate_relation(std::move(domain), std::move(images));
}

class relation_set {
public:
    relation_set() = default;

    // Members must share k; members with equal patterns are merged.
    explicit relation_set(std::vector<order_relation> relations) {
        if (relations.empty()) throw error(errc::empty_family, "relation set is empty");
        k_ = relations.front().size();
        std::set<pattern> seen;
        for (auto& r : relations) {
            if (r.size() != k_)
                throw error(errc::length_mismatch, "relation set mixes lengths " + std::to_string(k_) + " and " +
                                                       std::to_string(r.size()));
            if (seen.insert(canonical_pattern(r)).second) relations_.push_back(std::move(r));
        }
    }

    std::size_t k() const { return k_; }
    std::size_t size() const { return relations_.size(); }
    bool empty() const { return relations_.empty(); }
    const std::vector<order_relation>& relations() const { return relations_; }
    auto begin() const { return relations_.begin(); }
    auto end() const { return relations_.end(); }

    bool normalized() const {
        return std::all_of(relations_.begin(), relations_.end(),
                           [&](const order_relation& r) { return r.domain() == relations_.front().domain(); });
    }

    // Index of the member whose pattern equals rel's, if any.
    std::optional<std::size_t> find(const order_relation& rel) const {
        const auto target = canonical_pattern(rel);
        for (std::size_t i = 0; i < relations_.size(); ++i)
            if (relations_[i].size() == rel.size() && canonical_pattern(relations_[i]) == target) return i;
        return std::nullopt;
    }

private:
    std::size_t k_ = 0;
    std::vector<order_relation> relations_;
};

inline constexpr std::size_t max_enumerated_k = 6;

namespace detail {

// Each domain index i picks either an existing domain point a_j (j > i) or a
// fresh point in gap g >= i (gap g lies right after a_g). Fresh points that
// share a gap are then ordered in every possible way.
inline void enumerate_choices(std::size_t k, std::size_t i, std::vector<int>& choice, std::vector<bool>& used,
                              std::vector<pattern>& out) {
    if (i == k) {
        // choice >= 0: maps to a_choice; choice < 0: fresh in gap -(choice+1)
        std::vector<std::vector<std::size_t>> in_gap(k);
        for (std::size_t s = 0; s < k; ++s)
            if (choice[s] < 0) in_gap[static_cast<std::size_t>(-(choice[s] + 1))].push_back(s);
        for (auto& g : in_gap) std::sort(g.begin(), g.end());
        // iterate over the product of permutations of every gap
        std::vector<std::vector<std::size_t>> orders = in_gap;
        while (true) {
            pattern pat;
            pat.k = k;
            std::vector<std::size_t> domain_pos(k);
            for (std::size_t a = 0; a < k; ++a) {
                domain_pos[a] = pat.points.size();
                pat.points.push_back({true, -1});
                for (auto s : orders[a]) pat.points.push_back({false, static_cast<int>(s)});
            }
            for (std::size_t s = 0; s < k; ++s)
                if (choice[s] >= 0) pat.points[domain_pos[static_cast<std::size_t>(choice[s])]].source = static_cast<int>(s);
            out.push_back(std::move(pat));

            std::size_t g = 0;
            for (; g < k; ++g)
                if (std::next_permutation(orders[g].begin(), orders[g].end())) break;
            if (g == k) break;
        }
        return;
    }
    for (std::size_t j = i + 1; j < k; ++j) {
        if (used[j]) continue;
        used[j] = true;
        choice[i] = static_cast<int>(j);
        enumerate_choices(k, i + 1, choice, used, out);
        used[j] = false;
    }
    for (std::size_t g = i; g < k; ++g) {
        choice[i] = -static_cast<int>(g) - 1;
        enumerate_choices(k, i + 1, choice, used, out);
    }
}

} // namespace detail

// All patterns of length-k order relations, one per equivalence class.
inline std::vector<pattern> enumerate_patterns(std::size_t k) {
    if (k == 0) throw error(errc::bad_arity, "k must be positive");
    if (k > max_enumerated_k)
        throw error(errc::too_large, "class enumeration is limited to k <= " + std::to_string(max_enumerated_k));
    std::vector<pattern> out;
    std::vector<int> choice(k, 0);
    std::vector<bool> used(k, false);
    detail::enumerate_choices(k, 0, choice, used, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Representatives on a common domain {c, 2c, ..., kc}, c = k+1, with fresh
// image points packed into the gaps.
inline relation_set enumerate_classes(std::size_t k) {
    const auto patterns = enumerate_patterns(k);
    const point spacing = static_cast<point>(k) + 1;
    std::vector<order_relation> reps;
    reps.reserve(patterns.size());
    for (const auto& pat : patterns) {
        std::vector<point> domain(k), images(k);
        std::size_t d = 0;
        point offset = 0;
        point base = 0;
        for (const auto& p : pat.points) {
            point value;
            if (p.in_domain) {
                base = spacing * static_cast<point>(++d);
                offset = 0;
                value = base;
                domain[d - 1] = value;
            } else {
                value = base + ++offset;
            }
            if (p.is_image()) images[static_cast<std::size_t>(p.source)] = value;
        }
        reps.push_back(validate_relation(std::move(domain), std::move(images)));
    }
    return relation_set(std::move(reps));
}

// A partial self-map with finite domain; images may leave the domain.
struct partial_map {
    std::vector<point> domain;
    std::vector<point> images;

    std::size_t size() const { return domain.size(); }
    bool empty() const { return domain.empty(); }

    std::optional<point> operator()(point a) const {
        for (std::size_t i = 0; i < domain.size(); ++i)
            if (domain[i] == a) return images[i];
        return std::nullopt;
    }

    friend bool operator==(const partial_map&, const partial_map&) = default;
};

using core_map = partial_map;

inline partial_map as_map(const order_relation& rel) { return {rel.domain(), rel.images()}; }

// Sigma = {a in S : tau(a) in S}, psi = tau restricted to Sigma.
inline core_map core(const order_relation& rel) {
    core_map c;
    for (std::size_t i = 0; i < rel.size(); ++i) {
        if (std::binary_search(rel.domain().begin(), rel.domain().end(), rel.images()[i])) {
            c.domain.push_back(rel.domain()[i]);
            c.images.push_back(rel.images()[i]);
        }
    }
    return c;
}

// w = 1 + max{n : exists s with tau^j(s) in S_0 for 1 <= j <= n-1}; w(empty) = 1.
inline std::int64_t compute_w(const partial_map& map) {
    if (map.empty()) return 1;
    std::map<point, point> next;
    for (std::size_t i = 0; i < map.size(); ++i) next.emplace(map.domain[i], map.images[i]);

    // stay[s] = number of consecutive iterates tau(s), tau^2(s), ... inside S_0
    std::map<point, std::int64_t> stay;
    std::int64_t best = 0;
    for (const auto& [start, unused] : next) {
        std::vector<point> chain{start};
        std::set<point> on_chain{start};
        point cur = start;
        std::int64_t tail = 0;
        while (true) {
            auto it = next.find(cur);
            const point img = it->second;
            if (!next.count(img)) break;
            if (auto known = stay.find(img); known != stay.end()) {
                tail = known->second + 1;
                break;
            }
            if (!on_chain.insert(img).second) throw error(errc::cycle_detected, "map has a cycle through " + std::to_string(img));
            chain.push_back(img);
            cur = img;
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            stay[*it] = tail;
            ++tail;
        }
        best = std::max(best, stay[start]);
    }
    return 2 + best;
}

inline std::int64_t compute_w(const order_relation& rel) { return compute_w(as_map(rel)); }

enum class threshold_kind { vertex, edge, family, finite_path };

inline std::string_view to_string(threshold_kind k) {
    switch (k) {
    case threshold_kind::vertex: return "vertex";
    case threshold_kind::edge: return "edge";
    case threshold_kind::family: return "family";
    case threshold_kind::finite_path: return "finite-path";
    }
    return "?";
}

struct threshold_report {
    threshold_kind kind = threshold_kind::vertex;
    rational lo;
    rational hi;
    std::optional<std::int64_t> width;
    std::string provenance;
    // set when the lower end comes from a restricted (pattern-coloring) search
    bool restricted_search = false;

    bool exact() const { return lo == hi; }
    rational value() const { return lo; }
};

inline rational width_value(std::int64_t w) { return rational(1) - rational(1, w); }

inline threshold_report vertex_threshold(const order_relation& rel) {
    const auto w = compute_w(core(rel));
    const auto v = width_value(w);
    return {threshold_kind::vertex, v, v, w, "1 - 1/w(psi)", false};
}

inline threshold_report edge_threshold(const order_relation& rel) {
    const auto w = compute_w(rel);
    const auto v = width_value(w);
    return {threshold_kind::edge, v, v, w, "1 - 1/w(tau)", false};
}

inline threshold_report finite_path_bounds(std::int64_t p, std::int64_t k) {
    if (p < 1) throw error(errc::bad_arity, "p must be >= 1");
    if (k < 2) throw error(errc::bad_arity, "finite-path bounds need k >= 2");
    const std::int64_t m = k - 1;
    const std::int64_t ceil_q = (m + p - 1) / p;
    const std::int64_t floor_q = m / p;
    const rational tail = rational(1) - rational(1, k);
    threshold_report r;
    r.kind = threshold_kind::finite_path;
    r.lo = (rational(1) - rational(ceil_q, m)) * tail;
    r.hi = (rational(1) - rational(floor_q, m)) * tail;
    r.provenance = m % p == 0 ? "(1 - 1/p)(1 - 1/k)" : "ceil/floor bounds on (k-1)/p";
    return r;
}

// Lower bound on the probability of an infinite path when every vertex
// probability is at least lambda.
inline rational infinite_path_probability_bound(const rational& lambda, const rational& lambda_g) {
    if (lambda_g == rational(1)) throw error(errc::degenerate_threshold, "threshold equals 1");
    if (lambda_g < rational(0) || lambda_g > rational(1))
        throw error(errc::parse_error, "threshold must lie in [0,1)");
    if (lambda < rational(0) || lambda > rational(1)) throw error(errc::parse_error, "lambda must lie in [0,1]");
    const auto v = (lambda - lambda_g) / (rational(1) - lambda_g);
    return v < rational(0) ? rational(0) : v;
}

// Core of a relation expressed through domain positions: (i, j) whenever
// tau(a_i) = a_j.
inline std::vector<std::pair<std::size_t, std::size_t>> core_positions(const order_relation& rel) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < rel.size(); ++i) {
        auto it = std::lower_bound(rel.domain().begin(), rel.domain().end(), rel.images()[i]);
        if (it != rel.domain().end() && *it == rel.images()[i])
            out.emplace_back(i, static_cast<std::size_t>(it - rel.domain().begin()));
    }
    return out;
}

} // namespace shiftperc
