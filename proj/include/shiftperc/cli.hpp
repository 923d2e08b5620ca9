#pragma once

// The `shiftperc` command line. run() never calls exit(); it returns the
// process exit code: 0 success, 1 reproduce failure, 2 validation error or
// unknown command, 3 budget exceeded.

#include "shiftperc/debruijn.hpp"
#include "shiftperc/error.hpp"
#include "shiftperc/family_bounds.hpp"
#include "shiftperc/graphs.hpp"
#include "shiftperc/json_io.hpp"
#include "shiftperc/pattern_oracle.hpp"
#include "shiftperc/percolation.hpp"
#include "shiftperc/rational.hpp"
#include "shiftperc/relations.hpp"
#include "shiftperc/reproduce.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace shiftperc::cli {

enum class format { table, json, csv };

struct config {
    std::uint64_t seed = default_seed;
    std::string format_name = "table";
    format fmt = format::table;
    std::string out_path;
    unsigned threads = 1;

    std::size_t k = 0;
    std::size_t shift_k = 0;
    std::size_t n = 0;
    int p = 0;
    std::uint32_t d = 0;
    std::uint32_t d_lo = 2;
    std::uint32_t d_hi = 4;
    std::string spec_file;
    std::string coloring_file;
    std::string lambdas;
    std::string lambda;
    std::string lambda_g;
    std::uint64_t replicas = 100;
    std::uint64_t samples = 0;
    std::uint64_t iterations = 100000;
    std::size_t restarts = 32;
    int colors = 3;
    int argmax_p = 0;
    bool f_eps = false;
    std::string method = "auto";
    std::string budget;
    bool tamper = false;
};

inline constexpr const char* exit_codes_footer =
    "Exit codes: 0 success, 1 reproduce check failed, 2 validation error or unknown command, 3 budget exceeded.";

namespace detail {

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::parse_error, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, "'" + path + "' is not valid JSON: " + e.what());
    }
}

inline relation_set read_spec(const std::string& path) { return relation_set_from_json(read_json_file(path)); }

inline std::vector<rational> parse_grid(const std::string& text) {
    std::vector<rational> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) grid.push_back(parse_rational(item));
    if (grid.empty()) throw error(errc::parse_error, "empty lambda grid");
    return grid;
}

inline std::string tuple_text(std::span<const point> pts) {
    std::string s = "(";
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? "," : "") + std::to_string(pts[i]);
    return s + ")";
}

inline std::string relation_text(const order_relation& r) { return tuple_text(r.domain()) + " -> " + tuple_text(r.images()); }

inline std::string interval_text(const rational& lo, const rational& hi) {
    return lo == hi ? to_string(lo) : "[" + to_string(lo) + ", " + to_string(hi) + "]";
}

inline void seed_header(std::ostream& os, const config& c) {
    if (c.fmt != format::json) os << "# seed " << c.seed << '\n';
}

// Graph from --shift-k or --spec.
inline truncated_graph graph_from(const config& c) {
    if (c.n == 0) throw error(errc::parse_error, "-n is required");
    if (c.shift_k) return shift_graph(c.shift_k, c.n);
    if (!c.spec_file.empty()) return build_truncated(read_spec(c.spec_file), c.n);
    throw error(errc::parse_error, "give --shift-k or --spec");
}

inline relation_set spec_from(const config& c) {
    if (c.shift_k) return relation_set({shift_relation(c.shift_k)});
    if (!c.spec_file.empty()) return read_spec(c.spec_file);
    throw error(errc::parse_error, "give --shift-k or --spec");
}

inline void cmd_thresholds(const config& c, std::ostream& os) {
    const auto set = spec_from(c);
    if (c.fmt == format::json) {
        json rows = json::array();
        for (const auto& rel : set)
            rows.push_back(json{{"relation", to_json(rel)}, {"vertex", to_json(vertex_threshold(rel))}, {"edge", to_json(edge_threshold(rel))}});
        json j;
        if (set.size() == 1) {
            j = json{{"vertex", rows[0]["vertex"]}, {"edge", rows[0]["edge"]}};
        } else {
            j = json{{"relations", rows}, {"family", to_json(family_threshold_bounds(set, c.colors))}};
        }
        os << j.dump() << '\n';
        return;
    }
    if (c.fmt == format::csv) {
        os << "relation,vertex,vertex_w,edge,edge_w\n";
        for (const auto& rel : set) {
            const auto v = vertex_threshold(rel), e = edge_threshold(rel);
            os << '"' << relation_text(rel) << "\"," << to_string(v.value()) << ',' << *v.width << ',' << to_string(e.value())
               << ',' << *e.width << '\n';
        }
        return;
    }
    for (const auto& rel : set) {
        const auto v = vertex_threshold(rel), e = edge_threshold(rel);
        if (set.size() > 1) os << relation_text(rel) << '\n' << "  ";
        os << "vertex " << to_string(v.value()) << " (w=" << *v.width << ")\n";
        if (set.size() > 1) os << "  ";
        os << "edge " << to_string(e.value()) << " (w=" << *e.width << ")\n";
    }
    if (set.size() > 1) {
        const auto f = family_threshold_bounds(set, c.colors);
        os << "family " << interval_text(f.lo, f.hi) << " (" << f.provenance << ")\n";
    }
}

inline void cmd_relations_enumerate(const config& c, std::ostream& os) {
    const auto set = enumerate_classes(c.k);
    if (c.fmt == format::json) {
        os << to_json(set).dump() << '\n';
        return;
    }
    if (c.fmt == format::csv) os << "index,domain,images,w,vertex_threshold\n";
    std::size_t i = 0;
    for (const auto& rel : set) {
        const auto w = compute_w(rel);
        const auto v = vertex_threshold(rel).value();
        if (c.fmt == format::csv) {
            os << i << ",\"" << tuple_text(rel.domain()) << "\",\"" << tuple_text(rel.images()) << "\"," << w << ',' << to_string(v) << '\n';
        } else {
            os << relation_text(rel) << "  w=" << w << "  vertex=" << to_string(v) << '\n';
        }
        ++i;
    }
    if (c.fmt == format::table) os << set.size() << " classes\n";
}

inline void cmd_relations_w(const config& c, std::ostream& os) {
    const auto set = read_spec(c.spec_file);
    json rows = json::array();
    if (c.fmt == format::csv) os << "relation,w_tau,w_psi,core_size\n";
    for (const auto& rel : set) {
        const auto psi = core(rel);
        const auto w_tau = compute_w(rel), w_psi = compute_w(psi);
        if (c.fmt == format::json) {
            rows.push_back(json{{"relation", to_json(rel)},
                                {"w_tau", w_tau},
                                {"w_psi", w_psi},
                                {"core", json{{"domain", psi.domain}, {"images", psi.images}}}});
        } else if (c.fmt == format::csv) {
            os << '"' << relation_text(rel) << "\"," << w_tau << ',' << w_psi << ',' << psi.size() << '\n';
        } else {
            os << relation_text(rel) << "  w(tau)=" << w_tau << "  w(psi)=" << w_psi << "  core="
               << tuple_text(psi.domain) << " -> " << tuple_text(psi.images) << '\n';
        }
    }
    if (c.fmt == format::json) os << (rows.size() == 1 ? rows[0] : rows).dump() << '\n';
}

inline void print_report(const config& c, std::ostream& os, const threshold_report& r) {
    if (c.fmt == format::json) {
        os << to_json(r).dump() << '\n';
    } else if (c.fmt == format::csv) {
        os << "lo,hi\n" << to_string(r.lo) << ',' << to_string(r.hi) << '\n';
    } else {
        os << "lo " << to_string(r.lo) << "\nhi " << to_string(r.hi) << '\n';
        if (!r.provenance.empty()) os << "# " << r.provenance << '\n';
    }
}

inline void cmd_bounds_finite_path(const config& c, std::ostream& os) { print_report(c, os, finite_path_bounds(c.p, static_cast<std::int64_t>(c.k))); }

inline void cmd_bounds_family(const config& c, std::ostream& os) {
    search_options so;
    so.seed = c.seed;
    print_report(c, os, family_threshold_bounds(read_spec(c.spec_file), c.colors, so));
}

inline void cmd_bounds_corollary(const config& c, std::ostream& os) {
    const auto b = infinite_path_probability_bound(parse_rational(c.lambda), parse_rational(c.lambda_g));
    if (c.fmt == format::json) os << rational_json(b).dump() << '\n';
    else os << to_string(b) << '\n';
}

inline coloring_spec coloring_from(const config& c, const order_relation& rel) {
    if (!c.coloring_file.empty()) return coloring_from_json(read_json_file(c.coloring_file));
    if (c.f_eps) {
        const auto w = compute_w(rel);
        if (w < 2) throw error(errc::incompatible_coloring, "the relation has no orbit for the f_eps limit");
        return coloring_spec::f_eps_limit(static_cast<std::size_t>(w - 1));
    }
    if (c.argmax_p) return coloring_spec::argmax_mod(rel.size(), c.argmax_p);
    throw error(errc::parse_error, "give --coloring FILE, --argmax-p P or --f-eps");
}

inline void cmd_oracle_z(const config& c, std::ostream& os) {
    const auto set = spec_from(c);
    if (set.size() != 1) throw error(errc::parse_error, "z-measure needs a single relation");
    const auto& rel = set.relations().front();
    const auto coloring = coloring_from(c, rel);
    const auto exact = z_measure_exact(rel, coloring);
    const rational bound = rational(1) - rational(1, compute_w(rel));
    std::optional<mc_estimate> mc;
    if (c.samples) mc = z_measure_mc(rel, coloring, c.samples, c.seed, c.threads);
    if (c.fmt == format::json) {
        json j{{"exact", to_json(exact)}, {"upper_bound", rational_json(bound)}, {"coloring", to_json(coloring)}};
        if (mc)
            j["monte_carlo"] = json{{"seed", mc->seed}, {"samples", mc->samples}, {"estimate", mc->estimate}, {"ci_halfwidth", mc->half_width}};
        os << j.dump() << '\n';
        return;
    }
    if (mc) seed_header(os, c);
    if (c.fmt == format::csv) {
        os << "exact,upper_bound" << (mc ? ",mc_estimate,ci_halfwidth" : "") << '\n'
           << to_string(exact.value()) << ',' << to_string(bound);
        if (mc) os << ',' << format_decimal(mc->estimate) << ',' << format_decimal(mc->half_width);
        os << '\n';
        return;
    }
    os << "exact " << exact.num << '/' << exact.den << " = " << to_string(exact.value()) << "\nupper bound " << to_string(bound) << '\n';
    if (mc) os << "monte carlo " << format_decimal(mc->estimate) << " +- " << format_decimal(mc->half_width) << " (99%, " << mc->samples << " samples)\n";
}

inline void cmd_oracle_construction(const config& c, std::ostream& os) {
    const auto m = finite_path_construction_measure(c.p, c.k);
    const auto b = finite_path_bounds(c.p, static_cast<std::int64_t>(c.k));
    if (c.fmt == format::json) {
        os << json{{"measure", to_json(m)}, {"lo", rational_json(b.lo)}, {"hi", rational_json(b.hi)}}.dump() << '\n';
    } else if (c.fmt == format::csv) {
        os << "p,k,measure,lo,hi\n" << c.p << ',' << c.k << ',' << to_string(m.value()) << ',' << to_string(b.lo) << ',' << to_string(b.hi) << '\n';
    } else {
        os << "measure " << m.num << '/' << m.den << " = " << to_string(m.value()) << "\nbounds " << interval_text(b.lo, b.hi) << '\n';
    }
}

inline void cmd_oracle_search(const config& c, std::ostream& os) {
    search_options so;
    so.seed = c.seed;
    so.restarts = c.restarts;
    const auto r = best_pattern_coloring(c.k, c.p, so);
    const auto b = finite_path_bounds(c.p, static_cast<std::int64_t>(c.k));
    if (c.fmt == format::json) {
        os << json{{"seed", c.seed},
                   {"value", to_json(r.value)},
                   {"exhaustive", r.exhaustive},
                   {"lo", rational_json(b.lo)},
                   {"hi", rational_json(b.hi)},
                   {"coloring", to_json(r.coloring)}}
                  .dump()
           << '\n';
        return;
    }
    if (!r.exhaustive) seed_header(os, c);
    if (c.fmt == format::csv) {
        os << "pattern,color\n";
        for (std::uint32_t i = 0; i < r.coloring.table().size(); ++i) os << pattern_word(i, r.coloring.arity()) << ',' << r.coloring.table()[i] << '\n';
        return;
    }
    os << "value " << to_string(r.value.value()) << (r.exhaustive ? " (exhaustive)" : " (best found, local search)") << '\n'
       << "bounds " << interval_text(b.lo, b.hi) << '\n';
    for (std::uint32_t i = 0; i < r.coloring.table().size(); ++i) os << "  " << pattern_word(i, r.coloring.arity()) << " -> " << r.coloring.table()[i] << '\n';
}

inline void cmd_percolate_sweep(const config& c, std::ostream& os) {
    const auto g = graph_from(c);
    const auto report = sweep(g, parse_grid(c.lambdas), static_cast<std::size_t>(c.p), c.replicas, c.seed, c.threads);
    if (c.fmt == format::json) {
        os << to_json(report).dump() << '\n';
        return;
    }
    seed_header(os, c);
    if (c.fmt == format::csv) {
        write_sweep_csv(os, report);
        return;
    }
    os << "lambda_G " << to_string(report.lambda_g) << ", p " << report.p << ", " << c.replicas << " replicas\n";
    for (const auto& row : report.rows)
        os << to_string(row.lambda) << "  freq " << format_decimal(row.frequency, 4) << " +- " << format_decimal(row.ci_half_width, 4)
           << "  inclusion " << format_decimal(row.mean_inclusion, 4) << "  bound " << to_string(row.corollary_bound) << '\n';
}

inline void cmd_percolate_extremal(const config& c, std::ostream& os) {
    const auto g = graph_from(c);
    const auto rep = run_extremal(g, c.p, c.replicas, c.seed, c.threads);
    const auto target = finite_path_construction_measure(c.p, g.k());
    if (c.fmt == format::json) {
        os << json{{"seed", rep.seed},
                   {"p", rep.p},
                   {"replicas", rep.replicas},
                   {"samples_with_path", rep.samples_with_path},
                   {"max_longest", rep.max_longest},
                   {"mean_inclusion", rep.mean_inclusion},
                   {"inclusion_std_error", rep.inclusion_std_error},
                   {"construction_measure", rational_json(target.value())}}
                  .dump()
           << '\n';
        return;
    }
    seed_header(os, c);
    if (c.fmt == format::csv) {
        os << "p,replicas,samples_with_path,max_longest,mean_inclusion,inclusion_std_error,construction_measure\n"
           << rep.p << ',' << rep.replicas << ',' << rep.samples_with_path << ',' << rep.max_longest << ','
           << format_decimal(rep.mean_inclusion) << ',' << format_decimal(rep.inclusion_std_error) << ',' << to_string(target.value()) << '\n';
        return;
    }
    os << "samples with a path of length " << rep.p << ": " << rep.samples_with_path << " of " << rep.replicas << '\n'
       << "longest path seen " << rep.max_longest << '\n'
       << "inclusion " << format_decimal(rep.mean_inclusion) << " +- " << format_decimal(rep.inclusion_std_error)
       << " (construction " << to_string(target.value()) << ")\n";
}

inline void cmd_graph(const config& c, std::ostream& os, bool edges) {
    const auto g = graph_from(c);
    if (edges) {
        write_edges_csv(os, g);
        return;
    }
    const auto s = g.summary();
    if (c.fmt == format::json) os << to_json(s).dump() << '\n';
    else if (c.fmt == format::csv) os << "k,n,vertices,edges,spec\n" << s.k << ',' << s.n << ',' << s.vertices << ',' << s.edges << ',' << s.spec << '\n';
    else os << s.spec << " k=" << s.k << " n=" << s.n << ": " << s.vertices << " vertices, " << s.edges << " edges\n";
}

inline void cmd_debruijn_alpha(const config& c, std::ostream& os) {
    alpha_result r;
    std::string method = c.method;
    if (method == "auto") {
        if (c.k < 2) throw error(errc::bad_arity, "need k >= 2");
        method = debruijn_graph(c.d, static_cast<std::uint32_t>(c.k - 1)).size() <= max_subset_ground ? "subset" : "local";
    }
    const auto k = static_cast<std::uint32_t>(c.k);
    if (method == "subset") r = alpha_subset_exact(c.d, k, c.threads);
    else if (method == "mis") r = alpha_mis_exact(c.d, k);
    else if (method == "local") r = alpha_local_search(c.d, k, c.seed, c.iterations);
    else throw error(errc::parse_error, "unknown method '" + method + "'");
    if (c.fmt == format::json) {
        auto j = to_json(r);
        if (!r.exact) j["seed"] = c.seed;
        os << j.dump() << '\n';
        return;
    }
    if (!r.exact) seed_header(os, c);
    std::string witness;
    for (auto x : r.witness) witness += (witness.empty() ? "" : " ") + debruijn_graph::format_label(x, r.d, r.witness_length());
    if (c.fmt == format::csv) {
        os << "d,k,alpha,method,exact,witness\n"
           << r.d << ',' << r.k << ',' << r.value << ',' << to_string(r.method) << ',' << (r.exact ? "true" : "false") << ','
           << witness << '\n';
        return;
    }
    os << "alpha=" << r.value << " (" << to_string(r.method) << (r.exact ? ", exact" : ", lower bound") << ")\n"
       << (r.witness_is_subset() ? "A = {" : "set = {") << witness << "}\n";
}

inline void cmd_debruijn_ratios(const config& c, std::ostream& os) {
    ratio_options ro;
    ro.seed = c.seed;
    ro.iterations = c.iterations;
    ro.threads = c.threads;
    const auto rows = alpha_ratio_report(c.d_lo, c.d_hi, static_cast<std::uint32_t>(c.k), ro);
    const bool heuristic = std::any_of(rows.begin(), rows.end(), [](const ratio_row& r) { return !r.exact; });
    if (c.fmt == format::json) {
        json j{{"rows", to_json(rows)}};
        if (heuristic) j["seed"] = c.seed;
        os << j.dump() << '\n';
        return;
    }
    if (heuristic) seed_header(os, c);
    if (c.fmt == format::csv) {
        write_ratio_csv(os, rows);
        return;
    }
    for (const auto& r : rows)
        os << "d=" << r.d << " k=" << r.k << "  alpha=" << r.alpha << (r.exact ? "" : " (lower bound)") << "  ratio "
           << format_decimal(r.ratio, 4) << "  lambda " << interval_text(r.lambda_lo, r.lambda_hi) << "  gap "
           << format_decimal(r.gap, 4) << '\n';
}

inline int cmd_reproduce(const config& c, std::ostream& os) {
    reproduce_options opt;
    opt.budget = c.budget.empty() ? budget_from_env() : parse_budget(c.budget);
    opt.seed = c.seed;
    opt.threads = c.threads;
    if (c.tamper) opt.vertex_formula = [](const order_relation& r) { return edge_threshold(r).value(); };
    const auto report = reproduce(opt);
    if (c.fmt == format::json) {
        os << to_json(report).dump(2) << '\n';
    } else {
        seed_header(os, c);
        if (c.fmt == format::csv) write_reproduce_csv(os, report);
        else write_reproduce_table(os, report);
    }
    return report.ok() ? 0 : 1;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    config c;
    CLI::App app{"Thresholds, pattern oracles, percolation and de Bruijn independence numbers.", "shiftperc"};
    app.footer(exit_codes_footer);
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", c.seed, "Master seed for stochastic commands")->capture_default_str();
    app.add_option("--format", c.format_name, "Output format")->check(CLI::IsMember({"table", "json", "csv"}))->capture_default_str();
    app.add_option("--out", c.out_path, "Write output to this file instead of stdout");
    app.add_option("--threads", c.threads, "Worker threads (0 = hardware)")->capture_default_str();

    auto footer = [](CLI::App* sub) { sub->footer(exit_codes_footer); return sub; };

    auto* thresholds = footer(app.add_subcommand("thresholds", "Vertex and edge thresholds of G_tau"));
    auto* th_src = thresholds->add_option_group("source");
    th_src->add_option("--shift-k", c.shift_k, "Shift relation of length K")->check(CLI::Range(1, 64));
    th_src->add_option("--spec", c.spec_file, "Relation or relation-set JSON file")->check(CLI::ExistingFile);
    th_src->require_option(1);
    thresholds->add_option("--colors", c.colors, "Colors for the family lower-bound search")->capture_default_str();

    auto* relations = footer(app.add_subcommand("relations", "Order-relation classes and widths"));
    relations->require_subcommand(1);
    auto* enumerate = footer(relations->add_subcommand("enumerate", "List the classes E_k"));
    enumerate->add_option("-k", c.k, "Relation length")->required();
    auto* width = footer(relations->add_subcommand("w", "w(tau), w(psi) and the core"));
    width->add_option("--spec", c.spec_file, "Relation or relation-set JSON file")->required()->check(CLI::ExistingFile);

    auto* bounds = footer(app.add_subcommand("bounds", "Threshold bounds"));
    bounds->require_subcommand(1);
    auto* finite = footer(bounds->add_subcommand("finite-path", "Bounds on the finite-path threshold for p colors"));
    finite->add_option("-p", c.p, "Path length")->required();
    finite->add_option("-k", c.k, "Tuple length")->required();
    auto* family = footer(bounds->add_subcommand("family", "Threshold interval for a relation set"));
    family->add_option("--spec", c.spec_file, "Relation-set JSON file")->required()->check(CLI::ExistingFile);
    family->add_option("--colors", c.colors, "Colors for the lower-bound search")->capture_default_str();
    auto* corollary = footer(bounds->add_subcommand("corollary", "Lower bound on the infinite-path probability"));
    corollary->add_option("--lambda", c.lambda, "Inclusion probability")->required();
    corollary->add_option("--lambda-g", c.lambda_g, "Threshold of the graph")->required();

    auto* oracle = footer(app.add_subcommand("oracle", "Exact pattern probabilities"));
    oracle->require_subcommand(1);
    auto* zm = footer(oracle->add_subcommand("z-measure", "Measure of f(x|S) > f(tau*(x))"));
    auto* zm_src = zm->add_option_group("source");
    zm_src->add_option("--shift-k", c.shift_k, "Shift relation of length K");
    zm_src->add_option("--spec", c.spec_file, "Relation JSON file")->check(CLI::ExistingFile);
    zm_src->require_option(1);
    zm->add_option("--coloring", c.coloring_file, "Coloring JSON file")->check(CLI::ExistingFile);
    zm->add_option("--argmax-p", c.argmax_p, "Use argmax-mod-P on the domain window");
    zm->add_flag("--f-eps", c.f_eps, "Use the f_eps limit on the longest orbit");
    zm->add_option("--mc", c.samples, "Also estimate by Monte Carlo with this many samples");
    auto* construction = footer(oracle->add_subcommand("construction", "Argmax-mod-p construction measure"));
    construction->add_option("-p", c.p, "Colors")->required();
    construction->add_option("-k", c.k, "Tuple length")->required();
    auto* search = footer(oracle->add_subcommand("search", "Best pattern table on k-1 arguments with p colors"));
    search->add_option("-p", c.p, "Colors")->required();
    search->add_option("-k", c.k, "Tuple length")->required();
    search->add_option("--restarts", c.restarts, "Local-search restarts")->capture_default_str();

    auto* percolate = footer(app.add_subcommand("percolate", "Monte Carlo percolation on truncated graphs"));
    percolate->require_subcommand(1);
    auto add_graph_opts = [&](CLI::App* sub) {
        auto* src = sub->add_option_group("source");
        src->add_option("--shift-k", c.shift_k, "Shift graph of tuple length K");
        src->add_option("--spec", c.spec_file, "Relation-set JSON file")->check(CLI::ExistingFile);
        src->require_option(1);
        sub->add_option("-n", c.n, "Truncation: vertices are K-subsets of {0..n-1}")->required();
    };
    auto* sw = footer(percolate->add_subcommand("sweep", "Frequency of a path with >= p edges across a lambda grid"));
    add_graph_opts(sw);
    sw->add_option("-p", c.p, "Path length in edges")->required();
    sw->add_option("--lambdas", c.lambdas, "Comma-separated rationals or decimals")->required();
    sw->add_option("--replicas", c.replicas, "Replicas per lambda")->capture_default_str();
    auto* ex = footer(percolate->add_subcommand("extremal", "Extremal correlated sampler on a shift graph"));
    add_graph_opts(ex);
    ex->add_option("-p", c.p, "Colors (forbidden path length)")->required();
    ex->add_option("--replicas", c.replicas, "Samples")->capture_default_str();

    auto* graph = footer(app.add_subcommand("graph", "Truncated graph summaries and edge dumps"));
    graph->require_subcommand(1);
    auto* summary = footer(graph->add_subcommand("summary", "Vertex and edge counts"));
    add_graph_opts(summary);
    auto* edges = footer(graph->add_subcommand("edges", "Edge list as v;v2 rows"));
    add_graph_opts(edges);

    auto* db = footer(app.add_subcommand("debruijn", "Independence numbers of de Bruijn graphs"));
    db->require_subcommand(1);
    auto* alpha = footer(db->add_subcommand("alpha", "alpha(d,k)"));
    alpha->add_option("-d", c.d, "Alphabet size")->required();
    alpha->add_option("-k", c.k, "String length")->required();
    alpha->add_option("--method", c.method, "auto, subset, mis or local")
        ->check(CLI::IsMember({"auto", "subset", "mis", "local"}))
        ->capture_default_str();
    alpha->add_option("--iterations", c.iterations, "Annealing iterations for the local method")->capture_default_str();
    auto* ratios = footer(db->add_subcommand("ratios", "alpha(d,k)/d^k against the p=2 threshold"));
    ratios->add_option("--d-lo", c.d_lo, "Smallest alphabet")->capture_default_str();
    ratios->add_option("--d-hi", c.d_hi, "Largest alphabet")->capture_default_str();
    ratios->add_option("-k", c.k, "String length")->required();
    ratios->add_option("--iterations", c.iterations, "Annealing iterations where exact search is out of budget")->capture_default_str();

    auto* repro = footer(app.add_subcommand("reproduce", "Run the acceptance checks"));
    repro->add_option("--budget", c.budget, std::string("tiny or standard (default from ") + budget_env + ")")
        ->check(CLI::IsMember({"tiny", "standard"}));
    repro->add_flag("--tamper", c.tamper, "Swap in a wrong vertex-threshold formula")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 2;
    }

    c.fmt = c.format_name == "json" ? format::json : c.format_name == "csv" ? format::csv : format::table;
    c.threads = resolve_threads(c.threads);

    std::ostringstream buf;
    int code = 0;
    try {
        if (thresholds->parsed()) detail::cmd_thresholds(c, buf);
        else if (enumerate->parsed()) detail::cmd_relations_enumerate(c, buf);
        else if (width->parsed()) detail::cmd_relations_w(c, buf);
        else if (finite->parsed()) detail::cmd_bounds_finite_path(c, buf);
        else if (family->parsed()) detail::cmd_bounds_family(c, buf);
        else if (corollary->parsed()) detail::cmd_bounds_corollary(c, buf);
        else if (zm->parsed()) detail::cmd_oracle_z(c, buf);
        else if (construction->parsed()) detail::cmd_oracle_construction(c, buf);
        else if (search->parsed()) detail::cmd_oracle_search(c, buf);
        else if (sw->parsed()) detail::cmd_percolate_sweep(c, buf);
        else if (ex->parsed()) detail::cmd_percolate_extremal(c, buf);
        else if (summary->parsed()) detail::cmd_graph(c, buf, false);
        else if (edges->parsed()) detail::cmd_graph(c, buf, true);
        else if (alpha->parsed()) detail::cmd_debruijn_alpha(c, buf);
        else if (ratios->parsed()) detail::cmd_debruijn_ratios(c, buf);
        else if (repro->parsed()) code = detail::cmd_reproduce(c, buf);
        else throw error(errc::unknown_command, "no command given");
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return is_budget_error(e.code()) ? 3 : 2;
    }

    if (c.out_path.empty()) {
        out << buf.str();
    } else {
        std::ofstream file(c.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot write '" << c.out_path << "'\n";
            return 2;
        }
        file << buf.str();
    }
    return code;
}

} // namespace shiftperc::cli
