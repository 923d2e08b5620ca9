#pragma once

#include "shiftperc/error.hpp"
#include "shiftperc/pattern_oracle.hpp"
#include "shiftperc/relations.hpp"

#include <algorithm>

namespace shiftperc {

// Interval for the vertex threshold of G_C. The upper end is the smallest
// member threshold (G_C contains every G_tau). The lower end is the best
// pattern table found on the k-window, a certified value of the variational
// problem restricted to level-1 colorings. A single relation gets its closed
// form at both ends.
inline threshold_report family_threshold_bounds(const relation_set& set, int colors = 3, const search_options& opt = {}) {
    if (set.empty()) throw error(errc::empty_family, "relation set is empty");
    threshold_report r;
    r.kind = threshold_kind::family;
    if (set.size() == 1) {
        const auto single = vertex_threshold(set.relations().front());
        r.lo = r.hi = single.value();
        r.width = single.width;
        r.provenance = "single relation: 1 - 1/w(psi)";
        return r;
    }
    r.hi = rational(1);
    for (const auto& rel : set) r.hi = std::min(r.hi, vertex_threshold(rel).value());
    const auto search = best_family_coloring(set, colors, opt);
    r.lo = search.value.value();
    r.restricted_search = true;
    r.provenance = search.exhaustive ? "exhaustive pattern-table search (lower), min member threshold (upper)"
                                     : "local pattern-table search (lower), min member threshold (upper)";
    return r;
}

} // namespace shiftperc
