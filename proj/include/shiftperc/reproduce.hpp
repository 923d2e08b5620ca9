#pragma once

// The acceptance table: ten checks, each timed, with pass/fail/skip status.

#include "shiftperc/debruijn.hpp"
#include "shiftperc/graphs.hpp"
#include "shiftperc/json_io.hpp"
#include "shiftperc/pattern_oracle.hpp"
#include "shiftperc/percolation.hpp"
#include "shiftperc/relations.hpp"
#include "shiftperc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace shiftperc {

enum class check_status { pass, fail, skip };

inline std::string_view to_string(check_status s) {
    switch (s) {
    case check_status::pass: return "pass";
    case check_status::fail: return "fail";
    case check_status::skip: return "skip";
    }
    return "?";
}

enum class budget_level { tiny, standard };

inline constexpr const char* budget_env = "SHIFTPERC_BUDGET";

inline budget_level parse_budget(std::string_view s) {
    if (s == "tiny") return budget_level::tiny;
    if (s == "standard") return budget_level::standard;
    throw error(errc::parse_error, "budget must be 'tiny' or 'standard', got '" + std::string(s) + "'");
}

inline budget_level budget_from_env() {
    const char* v = std::getenv(budget_env);
    return v && *v ? parse_budget(v) : budget_level::standard;
}

inline std::string_view to_string(budget_level b) { return b == budget_level::tiny ? "tiny" : "standard"; }

struct reproduce_options {
    budget_level budget = budget_level::standard;
    std::uint64_t seed = default_seed;
    unsigned threads = 1;
    // Closed-form vertex threshold used by checks 1 and 10; replaced in mutation tests.
    std::function<rational(const order_relation&)> vertex_formula = [](const order_relation& r) {
        return vertex_threshold(r).value();
    };
};

struct check_result {
    int id = 0;
    std::string name;
    check_status status = check_status::pass;
    std::string detail;
    double seconds = 0;
    double limit_seconds = 0;
};

struct reproduce_report {
    std::uint64_t seed = 0;
    budget_level budget = budget_level::standard;
    std::vector<check_result> checks;

    std::size_t count(check_status s) const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [s](const check_result& c) { return c.status == s; }));
    }
    bool ok() const { return count(check_status::fail) == 0; }
};

namespace detail {

struct outcome {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && pass) {
            pass = false;
            detail.str("");
            detail << "failed: " << what;
        }
    }
};

inline order_relation random_small_relation(counter_rng& rng, std::size_t k) {
    const point range = static_cast<point>(2 * k + 2);
    while (true) {
        std::set<point> dom;
        while (dom.size() < k) dom.insert(static_cast<point>(rng.below(static_cast<std::uint64_t>(range))));
        std::vector<point> domain(dom.begin(), dom.end()), images;
        for (auto a : domain) images.push_back(a + 1 + static_cast<point>(rng.below(static_cast<std::uint64_t>(range))));
        try {
            return validate_relation(std::move(domain), std::move(images));
        } catch (const error&) {
        }
    }
}

inline void check_shift_thresholds(outcome& o, const reproduce_options& opt) {
    for (std::int64_t k = 1; k <= 10; ++k) {
        const auto rel = shift_relation(static_cast<std::size_t>(k));
        const auto v = opt.vertex_formula(rel);
        const auto e = edge_threshold(rel).value();
        o.expect(v == rational(k - 1, k), "vertex threshold at K=" + std::to_string(k) + " is " + to_string(v));
        o.expect(e == rational(k, k + 1), "edge threshold at K=" + std::to_string(k) + " is " + to_string(e));
    }
    o.expect(opt.vertex_formula(shift_relation(2)) == rational(1, 2), "K=2 vertex threshold differs from 1/2");
    if (o.pass) o.detail << "K=1..10 exact; K=2 vertex 1/2";
}

inline void check_finite_path_bounds(outcome& o, const reproduce_options&) {
    const auto b25 = finite_path_bounds(2, 5), b23 = finite_path_bounds(2, 3), b26 = finite_path_bounds(2, 6);
    o.expect(b25.lo == rational(2, 5) && b25.hi == rational(2, 5), "(2,5) is not [2/5, 2/5]");
    o.expect(b23.lo == rational(1, 3) && b23.hi == rational(1, 3), "(2,3) is not [1/3, 1/3]");
    o.expect(b26.lo == rational(1, 3) && b26.hi == rational(1, 2), "(2,6) is not [1/3, 1/2]");
    o.expect(b26.lo <= rational(5, 12) && rational(5, 12) < b26.hi, "5/12 is not strictly below the (2,6) upper end");
    int cases = 0;
    for (std::int64_t p = 1; p <= 9; ++p) {
        for (std::int64_t k = 2; k <= 9; ++k) {
            if ((k - 1) % p != 0) continue;
            const auto b = finite_path_bounds(p, k);
            const auto eq = (rational(1) - rational(1, p)) * (rational(1) - rational(1, k));
            o.expect(b.lo == eq && b.hi == eq, "equality case fails at p=" + std::to_string(p) + ", k=" + std::to_string(k));
            ++cases;
        }
    }
    if (o.pass) o.detail << "named values exact; equality case on " << cases << " pairs";
}

inline void check_oracle_attainment(outcome& o, const reproduce_options&) {
    for (std::int64_t w = 2; w <= 7; ++w) {
        const auto z = z_measure_exact(shift_relation(static_cast<std::size_t>(w - 1)),
                                       coloring_spec::f_eps_limit(static_cast<std::size_t>(w - 1)));
        o.expect(z.value() == rational(1) - rational(1, w), "f_eps measure at w=" + std::to_string(w) + " is " + to_string(z.value()));
    }
    std::uint64_t tables = 0;
    for (std::size_t k = 1; k <= 3; ++k) {
        for (const auto& rel : enumerate_classes(k)) {
            const auto counts = relation_pair_counts(rel);
            const rational bound = rational(1) - rational(1, compute_w(rel));
            for (int p = 1; p <= 3; ++p) {
                std::vector<int> table(factorial(k), 0);
                do {
                    ++tables;
                    const rational z(static_cast<std::int64_t>(counts.measure(table)), static_cast<std::int64_t>(counts.total));
                    if (z > bound) o.expect(false, "upper-bound law broken by a table of arity " + std::to_string(k));
                } while (advance_odometer(table, p));
            }
        }
    }
    if (o.pass) o.detail << "w=2..7 attain 1-1/w; " << tables << " tables obey the upper bound";
}

inline void check_construction(outcome& o, const reproduce_options&) {
    const std::vector<std::tuple<int, std::size_t, rational>> named{
        {2, 3, rational(1, 3)}, {2, 5, rational(2, 5)}, {2, 7, rational(3, 7)}, {3, 7, rational(4, 7)}};
    for (const auto& [p, k, want] : named) {
        const auto got = finite_path_construction_measure(p, k).value();
        const auto tag = "(" + std::to_string(p) + "," + std::to_string(k) + ")";
        o.expect(got == want, "construction " + tag + " is " + to_string(got));
        o.expect(got == finite_path_bounds(p, static_cast<std::int64_t>(k)).lo, "construction " + tag + " misses the lower bound");
    }
    for (std::size_t k = 3; k <= 9; k += 2) {
        const auto got = finite_path_construction_measure(2, k).value();
        o.expect(got == rational(static_cast<std::int64_t>(k) - 1, 2 * static_cast<std::int64_t>(k)),
                 "(2," + std::to_string(k) + ") is " + to_string(got));
    }
    if (o.pass) o.detail << "named values and (2,k)=(k-1)/(2k) for k=3,5,7,9";
}

inline void check_pattern_search(outcome& o, const reproduce_options& opt) {
    search_options so;
    so.seed = opt.seed;
    const auto a = best_pattern_coloring(3, 2, so);
    const auto b = best_pattern_coloring(4, 2, so);
    o.expect(a.exhaustive && a.value.value() == rational(1, 3), "(3,2) search gives " + to_string(a.value.value()));
    o.expect(b.exhaustive && b.value.value() >= rational(1, 4) && b.value.value() <= rational(1, 2),
             "(4,2) search gives " + to_string(b.value.value()));
    if (o.pass) o.detail << "(3,2) = 1/3; (4,2) = " << to_string(b.value.value());
}

inline void check_extremal(outcome& o, const reproduce_options& opt) {
    const auto g = shift_graph(3, 30);
    const auto rep = run_extremal(g, 2, 10000, opt.seed, opt.threads);
    o.expect(rep.samples_with_path == 0, std::to_string(rep.samples_with_path) + " samples contain a path of length 2");
    const double dev = std::abs(rep.mean_inclusion - 1.0 / 3.0);
    o.expect(dev <= 3 * rep.inclusion_std_error, "inclusion rate " + format_decimal(rep.mean_inclusion) + " is " +
                                                     format_decimal(dev / rep.inclusion_std_error, 2) + " SE from 1/3");
    if (o.pass)
        o.detail << "0 paths in 10000 samples; inclusion " << format_decimal(rep.mean_inclusion) << " +- "
                 << format_decimal(rep.inclusion_std_error);
}

inline void check_monotonicity(outcome& o, const reproduce_options& opt) {
    const auto g = shift_graph(2, 100);
    std::vector<rational> grid;
    for (int i = 1; i <= 9; ++i) grid.emplace_back(i, 10);
    std::atomic<std::uint64_t> violations = 0;
    parallel_for(1000, opt.threads, [&](std::size_t r) {
        const auto seed = derive_seed(opt.seed, r);
        auto prev = sample_iid(g, grid.front(), seed);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            auto cur = sample_iid(g, grid[i], seed);
            for (vertex_id v = 0; v < g.vertex_count(); ++v) violations += prev.included[v] > cur.included[v];
            prev = std::move(cur);
        }
    });
    o.expect(violations == 0, std::to_string(violations.load()) + " vertices leave the sample as lambda grows");
    if (o.pass) o.detail << "1000 replicas x 9 lambdas nested";
}

inline void check_debruijn(outcome& o, const reproduce_options& opt) {
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> cases{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 3}};
    std::ostringstream values;
    for (auto [d, k] : cases) {
        const auto s = alpha_subset_exact(d, k, opt.threads);
        const auto m = alpha_mis_exact(d, k);
        const auto tag = "(" + std::to_string(d) + "," + std::to_string(k) + ")";
        o.expect(s.value == m.value, "methods disagree at " + tag + ": " + std::to_string(s.value) + " vs " + std::to_string(m.value));
        o.expect(verify_witness(s) && verify_witness(m), "witness check fails at " + tag);
        values << tag << "=" << s.value << " ";
    }
    o.expect(alpha_subset_exact(2, 2).value == 1, "alpha(2,2) != 1");
    o.expect(alpha_subset_exact(2, 3).value == 2, "alpha(2,3) != 2");
    ratio_options ro;
    ro.seed = opt.seed;
    ro.threads = opt.threads;
    const auto rows = alpha_ratio_report(2, 4, 3, ro);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        o.expect(rows[i].ratio < rows[i + 1].ratio, "ratio table is not increasing at d=" + std::to_string(rows[i].d));
    for (const auto& r : rows) o.expect(r.ratio < 1.0 / 3.0, "ratio at d=" + std::to_string(r.d) + " exceeds 1/3");
    if (o.pass) {
        o.detail << values.str() << "ratios";
        for (const auto& r : rows) o.detail << ' ' << format_decimal(r.ratio, 4);
    }
}

inline void check_classes(outcome& o, const reproduce_options& opt) {
    const auto e1 = enumerate_classes(1), e2 = enumerate_classes(2), e3 = enumerate_classes(3);
    o.expect(e1.size() == 1, "|E_1| = " + std::to_string(e1.size()));
    o.expect(e2.size() == 4, "|E_2| = " + std::to_string(e2.size()));
    o.expect(e2.find(shift_relation(2)).has_value(), "shift pattern missing from E_2");
    const std::vector<const relation_set*> classes{&e1, &e2, &e3};
    counter_rng rng(opt.seed, 9);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto k = 1 + rng.below(3);
        const auto rel = random_small_relation(rng, k);
        int matches = 0;
        for (const auto& c : *classes[k - 1]) matches += equivalent(c, rel);
        if (matches != 1) o.expect(false, "a relation of length " + std::to_string(k) + " matches " + std::to_string(matches) + " classes");
    }
    if (o.pass) o.detail << "|E_1|=1, |E_2|=4, |E_3|=" << e3.size() << "; 2000 random relations classified";
}

inline void check_lifting(outcome& o, const reproduce_options& opt) {
    for (std::size_t k = 1; k <= 8; ++k) {
        const auto lifted = lift_edges(shift_relation(k));
        o.expect(lifted.size() == 1, "lift of shift " + std::to_string(k) + " has " + std::to_string(lifted.size()) + " members");
        if (lifted.size() != 1) continue;
        const auto v = opt.vertex_formula(lifted.relations().front());
        const auto e = edge_threshold(shift_relation(k)).value();
        o.expect(v == e, "k=" + std::to_string(k) + ": lifted vertex " + to_string(v) + " vs edge " + to_string(e));
    }
    if (o.pass) o.detail << "k=1..8 lifted vertex threshold = edge threshold";
}

struct check_entry {
    int id;
    const char* name;
    double limit_seconds;
    bool heavy;
    void (*run)(outcome&, const reproduce_options&);
};

inline const std::vector<check_entry>& check_table() {
    static const std::vector<check_entry> table{
        {1, "shift thresholds", 1, false, check_shift_thresholds},
        {2, "finite-path bounds", 1, false, check_finite_path_bounds},
        {3, "oracle attainment and upper-bound law", 10, false, check_oracle_attainment},
        {4, "construction measures", 30, false, check_construction},
        {5, "exhaustive pattern search", 30, false, check_pattern_search},
        {6, "extremal sampler has no length-p path", 60, true, check_extremal},
        {7, "coupled monotonicity", 60, true, check_monotonicity},
        {8, "de Bruijn independence numbers", 120, true, check_debruijn},
        {9, "equivalence classes", 10, false, check_classes},
        {10, "lifting consistency", 10, false, check_lifting},
    };
    return table;
}

} // namespace detail

// Runs one check; exceptions and time-limit overruns count as failures.
inline check_result run_check(int id, const reproduce_options& opt) {
    const auto& table = detail::check_table();
    const auto it = std::find_if(table.begin(), table.end(), [id](const detail::check_entry& e) { return e.id == id; });
    if (it == table.end()) throw error(errc::parse_error, "no acceptance check " + std::to_string(id));
    check_result res;
    res.id = it->id;
    res.name = it->name;
    res.limit_seconds = it->limit_seconds;
    if (it->heavy && opt.budget == budget_level::tiny) {
        res.status = check_status::skip;
        res.detail = "skipped under the tiny budget";
        return res;
    }
    detail::outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        it->run(o, opt);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail.str("");
        o.detail << "error: " << e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.status = o.pass ? check_status::pass : check_status::fail;
    res.detail = o.detail.str();
    if (o.pass && res.seconds > res.limit_seconds) {
        res.status = check_status::fail;
        res.detail = "took " + format_decimal(res.seconds, 2) + " s, limit " + format_decimal(res.limit_seconds, 0) + " s";
    }
    return res;
}

inline reproduce_report reproduce(const reproduce_options& opt = {}) {
    reproduce_report report;
    report.seed = opt.seed;
    report.budget = opt.budget;
    for (const auto& e : detail::check_table()) report.checks.push_back(run_check(e.id, opt));
    return report;
}

inline json to_json(const reproduce_report& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back(json{{"id", c.id},
                              {"name", c.name},
                              {"status", std::string(to_string(c.status))},
                              {"seconds", std::round(c.seconds * 1000) / 1000},
                              {"detail", c.detail}});
    return json{{"seed", r.seed},
                {"budget", std::string(to_string(r.budget))},
                {"passed", r.count(check_status::pass)},
                {"failed", r.count(check_status::fail)},
                {"skipped", r.count(check_status::skip)},
                {"checks", checks}};
}

inline void write_reproduce_csv(std::ostream& os, const reproduce_report& r) {
    os << "id,name,status,seconds,detail\n";
    for (const auto& c : r.checks) {
        std::string detail = c.detail;
        std::replace(detail.begin(), detail.end(), '"', '\'');
        os << c.id << ',' << c.name << ',' << to_string(c.status) << ',' << format_decimal(c.seconds, 3) << ",\"" << detail
           << "\"\n";
    }
}

inline void write_reproduce_table(std::ostream& os, const reproduce_report& r) {
    for (const auto& c : r.checks) {
        std::string status(to_string(c.status));
        std::transform(status.begin(), status.end(), status.begin(), [](unsigned char ch) { return std::toupper(ch); });
        os << status << "  [" << (c.id < 10 ? " " : "") << c.id << "] " << c.name << " (" << format_decimal(c.seconds, 2)
           << " s)";
        if (!c.detail.empty()) os << ": " << c.detail;
        os << '\n';
    }
    os << r.count(check_status::pass) << " passed, " << r.count(check_status::fail) << " failed, "
       << r.count(check_status::skip) << " skipped\n";
}

} // namespace shiftperc
