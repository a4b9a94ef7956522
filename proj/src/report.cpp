#include "qmono/report.hpp"

#include <array>
#include <charconv>

namespace qmono {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

json interval_json(const Interval& i) { return json::array({i.lower, i.upper}); }

} // namespace

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

json to_json(const MeasureValue& v) {
    json j{{"value", v.value}, {"method", std::string(to_string(v.method))}};
    if (v.interval) {
        j["interval"] = interval_json(*v.interval);
        j["converged"] = v.converged;
    }
    return j;
}

json to_json(const AuditReport& report) {
    const auto& ing = report.ingredients;
    json pairwise = json::array();
    for (const auto& p : ing.pairwise) pairwise.push_back(to_json(p));
    json residual{{"value", ing.residual.value}};
    if (ing.residual.uncertainty) residual["interval"] = interval_json(*ing.residual.uncertainty);

    json rows = json::array();
    for (const auto& row : report.rows) {
        json bounds = json::array();
        for (const auto& b : row.bounds) {
            bounds.push_back({{"id", std::string(to_string(b.id))},
                              {"rhs", b.rhs},
                              {"rhs_low", b.rhs_range.lower},
                              {"rhs_high", b.rhs_range.upper},
                              {"margin", b.margin},
                              {"worst_margin", b.worst_margin},
                              {"verdict", std::string(to_string(b.verdict))}});
        }
        json r{{"nu", row.nu}, {"lhs", row.lhs}, {"bounds", std::move(bounds)}};
        r["tightest"] = row.tightest ? json(std::string(to_string(*row.tightest))) : json(nullptr);
        rows.push_back(std::move(r));
    }
    return json{{"label", report.label},
                {"measure", std::string(to_string(report.kind))},
                {"first", report.first},
                {"tolerance", {{"relative", report.tolerance.relative}, {"absolute_floor", report.tolerance.absolute_floor}}},
                {"ingredients", {{"total", ing.total}, {"pairwise", std::move(pairwise)}, {"residual", std::move(residual)}}},
                {"rows", std::move(rows)}};
}

json to_json(const FigureData& fig) {
    json rows = json::array();
    for (const auto& r : fig.rows) {
        rows.push_back({{"nu", r.nu},
                        {"lhs", r.lhs},
                        {"lemma_bound", r.lemma_bound},
                        {"zhang2021_bound", r.zhang2021_bound},
                        {"sum_bound", r.sum_bound}});
    }
    json diags = json::array();
    for (const auto& d : fig.diagnostics) {
        diags.push_back({{"quantity", d.quantity},
                         {"state_value", d.state_value},
                         {"quoted_value", d.quoted_value},
                         {"closed_form_value", d.closed_form_value},
                         {"quoted_matches", d.quoted_matches},
                         {"closed_form_matches", d.closed_form_matches}});
    }
    const auto& i = fig.ingredients;
    return json{{"figure", fig.which},
                {"paper_values", fig.paper_values},
                {"measure", std::string(to_string(fig.kind))},
                {"ingredients", {{"total", i.total}, {"ab", i.ab}, {"ac", i.ac}, {"residual", i.residual}}},
                {"rows", std::move(rows)},
                {"diagnostics", std::move(diags)}};
}

json to_json(const std::vector<CounterexampleCheck>& checks) {
    json out = json::array();
    for (const auto& c : checks) {
        json rows = json::array();
        for (const auto& r : c.rows) {
            rows.push_back({{"nu", r.nu}, {"lhs", r.lhs}, {"lemma3", r.lemma3}, {"difference", r.difference}});
        }
        out.push_back({{"state", c.name},
                       {"negativity_A|BC", c.negativity_total},
                       {"concurrence_sq_A|BC", c.concurrence_sq_total},
                       {"quoted", {{"N_cA|BC", c.quoted_total},
                                   {"N_cAB_sq", c.quoted_ab_sq},
                                   {"N_cAC_sq", c.quoted_ac_sq},
                                   {"epsilon", c.quoted_residual}}},
                       {"roof_upper_AB", to_json(c.roof_ab)},
                       {"roof_upper_AC", to_json(c.roof_ac)},
                       {"ckw_pairwise_sum", c.ckw_pairwise_sum},
                       {"ckw_violated", c.ckw_violated},
                       {"lemma3_equality", c.equality_holds},
                       {"rows", std::move(rows)}});
    }
    return out;
}

void write_csv(std::ostream& os, const AuditReport& report, bool with_header) {
    if (with_header) os << kAuditCsvHeader << '\n';
    const std::string label = csv_field(report.label);
    for (const auto& row : report.rows) {
        for (const auto& b : row.bounds) {
            os << label << ',' << format_number(row.nu) << ',' << to_string(b.id) << ',' << format_number(row.lhs)
               << ',' << format_number(b.rhs_range.lower) << ',' << format_number(b.rhs_range.upper) << ','
               << format_number(b.margin) << ',' << to_string(b.verdict) << '\n';
        }
    }
}

void write_csv(std::ostream& os, const FigureData& fig) {
    os << "nu,lhs,lemma_bound,zhang2021_bound,sum_bound\n";
    for (const auto& r : fig.rows) {
        os << format_number(r.nu) << ',' << format_number(r.lhs) << ',' << format_number(r.lemma_bound) << ','
           << format_number(r.zhang2021_bound) << ',' << format_number(r.sum_bound) << '\n';
    }
}

} // namespace qmono
