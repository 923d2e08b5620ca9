#pragma once

// Hand-rolled generators for the property tests.

#include "shiftperc/relations.hpp"
#include "shiftperc/rng.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace shiftperc::testing {

// A valid relation of length k with all points below `range`.
inline order_relation random_relation(counter_rng& rng, std::size_t k, point range) {
    while (true) {
        std::set<point> dom;
        while (dom.size() < k) dom.insert(static_cast<point>(rng.below(static_cast<std::uint64_t>(range))));
        std::vector<point> domain(dom.begin(), dom.end()), images(k);
        std::set<point> used;
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            const point lo = domain[i] + 1;
            if (lo >= range + static_cast<point>(k)) {
                ok = false;
                break;
            }
            point img;
            int tries = 0;
            do img = lo + static_cast<point>(rng.below(static_cast<std::uint64_t>(range + static_cast<point>(k) - lo)));
            while (used.count(img) && ++tries < 64);
            if (used.count(img)) ok = false;
            used.insert(img);
            images[i] = img;
        }
        if (ok) return validate_relation(std::move(domain), std::move(images));
    }
}

// A random strictly increasing map applied to every point of rel.
inline order_relation relabel(counter_rng& rng, const order_relation& rel) {
    std::vector<point> pts = rel.domain();
    pts.insert(pts.end(), rel.images().begin(), rel.images().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<point> target(pts.size());
    point cur = static_cast<point>(rng.below(5));
    for (auto& t : target) {
        t = cur;
        cur += 1 + static_cast<point>(rng.below(6));
    }
    auto map = [&](point x) { return target[static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), x) - pts.begin())]; };
    std::vector<point> d, im;
    for (auto x : rel.domain()) d.push_back(map(x));
    for (auto x : rel.images()) im.push_back(map(x));
    return validate_relation(std::move(d), std::move(im));
}

} // namespace shiftperc::testing
