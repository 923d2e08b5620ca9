#pragma once

// JSON and CSV forms of the library's value types. Rationals are always
// {"num":..,"den":..} in JSON and "num/den" in CSV.

#include "shiftperc/debruijn.hpp"
#include "shiftperc/error.hpp"
#include "shiftperc/graphs.hpp"
#include "shiftperc/pattern_oracle.hpp"
#include "shiftperc/percolation.hpp"
#include "shiftperc/rational.hpp"
#include "shiftperc/relations.hpp"

#include <json.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace shiftperc {

using json = nlohmann::ordered_json;

inline json rational_json(const rational& r) { return json{{"num", r.numerator()}, {"den", r.denominator()}}; }

inline rational rational_from_json(const json& j) {
    if (j.is_object()) return rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return rational(j.get<std::int64_t>());
    throw error(errc::parse_error, "expected a rational");
}

inline json to_json(const order_relation& rel) { return json{{"domain", rel.domain()}, {"images", rel.images()}}; }

inline order_relation relation_from_json(const json& j) {
    try {
        return validate_relation(j.at("domain").get<std::vector<point>>(), j.at("images").get<std::vector<point>>());
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, std::string("order relation JSON: ") + e.what());
    }
}

inline json to_json(const relation_set& set) {
    json rels = json::array();
    for (const auto& r : set) rels.push_back(to_json(r));
    return json{{"k", set.k()}, {"relations", rels}};
}

// Accepts a RelationSet object or a single order relation.
inline relation_set relation_set_from_json(const json& j) {
    if (j.contains("domain")) return relation_set({relation_from_json(j)});
    std::vector<order_relation> rels;
    try {
        for (const auto& r : j.at("relations")) rels.push_back(relation_from_json(r));
        if (j.contains("k") && !rels.empty() && j.at("k").get<std::size_t>() != rels.front().size())
            throw error(errc::length_mismatch, "declared k differs from the relation length");
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, std::string("relation set JSON: ") + e.what());
    }
    return relation_set(std::move(rels));
}

// Exact reports: {"kind","num","den","w"}; intervals: {"lo","hi"}.
inline json to_json(const threshold_report& r) {
    if (r.kind == threshold_kind::vertex || r.kind == threshold_kind::edge) {
        json j{{"kind", std::string(to_string(r.kind))}, {"num", r.lo.numerator()}, {"den", r.lo.denominator()}};
        if (r.width) j["w"] = *r.width;
        return j;
    }
    return json{{"lo", rational_json(r.lo)}, {"hi", rational_json(r.hi)}};
}

inline json to_json(const exact_probability& p) { return json{{"num", p.num}, {"den", p.den}}; }

inline json to_json(const coloring_spec& c) {
    json j{{"kind", std::string(to_string(c.kind()))}, {"arity", c.arity()}};
    if (c.kind() != coloring_kind::f_eps_limit) j["p"] = c.colors();
    if (c.kind() == coloring_kind::table) {
        json table = json::object();
        for (std::uint32_t i = 0; i < c.table().size(); ++i) table[pattern_word(i, c.arity())] = c.table()[i];
        j["table"] = table;
    }
    return j;
}

inline coloring_spec coloring_from_json(const json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        const auto arity = j.at("arity").get<std::size_t>();
        if (kind == "argmax_mod") return coloring_spec::argmax_mod(arity, j.at("p").get<int>());
        if (kind == "f_eps_limit") return coloring_spec::f_eps_limit(arity);
        if (kind == "table") {
            if (arity == 0 || arity > max_exact_arity) throw error(errc::arity_too_large, "table arity must be in [1, 10]");
            std::vector<int> table(factorial(arity), -1);
            for (const auto& [word, color] : j.at("table").items()) {
                if (word.size() != arity) throw error(errc::incompatible_coloring, "pattern word '" + word + "' has wrong length");
                table[pattern_from_word(word)] = color.get<int>();
            }
            if (std::find(table.begin(), table.end(), -1) != table.end())
                throw error(errc::incompatible_coloring, "table is not total over all patterns");
            return coloring_spec::explicit_table(arity, std::move(table), j.value("p", 0));
        }
        throw error(errc::parse_error, "unknown coloring kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, std::string("coloring JSON: ") + e.what());
    }
}

inline json to_json(const graph_summary& s) {
    return json{{"k", s.k}, {"n", s.n}, {"vertices", s.vertices}, {"edges", s.edges}, {"spec", s.spec}};
}

inline json to_json(const alpha_result& r) {
    json witness = json::array();
    for (auto x : r.witness) witness.push_back(debruijn_graph::format_label(x, r.d, r.witness_length()));
    return json{{"d", r.d},     {"k", r.k},      {"alpha", r.value}, {"method", std::string(to_string(r.method))},
                {"exact", r.exact}, {"witness", witness}};
}

inline std::string format_decimal(double x, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

inline void write_sweep_csv(std::ostream& os, const sweep_report& r) {
    os << "lambda,replicas,freq_path_ge_p,ci_halfwidth,mean_inclusion,corollary_bound\n";
    for (const auto& row : r.rows)
        os << to_string(row.lambda) << ',' << row.replicas << ',' << format_decimal(row.frequency) << ','
           << format_decimal(row.ci_half_width) << ',' << format_decimal(row.mean_inclusion) << ','
           << to_string(row.corollary_bound) << '\n';
}

inline json to_json(const sweep_report& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back(json{{"lambda", rational_json(row.lambda)},
                            {"replicas", row.replicas},
                            {"freq_path_ge_p", row.frequency},
                            {"ci_halfwidth", row.ci_half_width},
                            {"mean_inclusion", row.mean_inclusion},
                            {"corollary_bound", rational_json(row.corollary_bound)}});
    return json{{"p", r.p}, {"seed", r.seed}, {"lambda_g", rational_json(r.lambda_g)}, {"rows", rows}};
}

inline void write_ratio_csv(std::ostream& os, const std::vector<ratio_row>& rows) {
    os << "d,k,alpha,exact,ratio,lambda_lo,lambda_hi,gap\n";
    for (const auto& r : rows)
        os << r.d << ',' << r.k << ',' << r.alpha << ',' << (r.exact ? "true" : "false") << ',' << format_decimal(r.ratio)
           << ',' << to_string(r.lambda_lo) << ',' << to_string(r.lambda_hi) << ',' << format_decimal(r.gap) << '\n';
}

inline json to_json(const std::vector<ratio_row>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back(json{{"d", r.d},
                           {"k", r.k},
                           {"alpha", r.alpha},
                           {"exact", r.exact},
                           {"method", std::string(to_string(r.method))},
                           {"ratio", r.ratio},
                           {"lambda_lo", rational_json(r.lambda_lo)},
                           {"lambda_hi", rational_json(r.lambda_hi)},
                           {"gap", r.gap}});
    return out;
}

} // namespace shiftperc
