#include "qmono/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

#include "qmono/errors.hpp"
#include "qmono/figures.hpp"
#include "qmono/report.hpp"
#include "qmono/state_io.hpp"
#include "qmono/states.hpp"

namespace qmono {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string state;
    std::string ingredients;
    std::string keep;
    std::string partition;
    std::string measure = "concurrence";
    std::string objective = "negativity";
    std::string which;
    int first = 0;
    double nu_min = 2.0;
    double nu_max = 10.0;
    double nu_step = 0.25;
    std::vector<double> nus;
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
    int samples = 1000;
    std::vector<int> dims{2, 2, 2};
    std::string format;
    std::string out;
    bool paper_values = false;
    int restarts = 16;
    int max_iterations = 2000;
    int ensemble_size = 0;
    int threads = 1;
};

struct Resolved {
    std::string label;
    AnyState state;
};

Resolved resolve_state(const RunConfig& cfg) {
    if (cfg.state.empty()) throw InputError("--state is required");
    if (auto builtin = builtin_state(cfg.state)) return {cfg.state, *builtin};
    return {cfg.state, load_state(cfg.state)};
}

IndexSet parse_index_list(const std::string& text) {
    IndexSet out;
    for (char c : text) {
        if (c < '0' || c > '9') throw InputError("subsystem list '" + text + "' contains a non-digit character");
        out.push_back(c - '0');
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
        throw InputError("subsystem list '" + text + "' repeats an index");
    }
    return out;
}

const Dims& dims_of(const AnyState& s) {
    return std::visit([](const auto& v) -> const Dims& { return v.dims(); }, s);
}

// Applies --keep: the state becomes the reduced density operator on the kept
// subsystems, renumbered from 0.
AnyState apply_keep(const AnyState& s, const std::string& keep) {
    if (keep.empty()) return s;
    const DensityOperator rho = std::holds_alternative<PureState>(s) ? to_density(std::get<PureState>(s))
                                                                      : std::get<DensityOperator>(s);
    return partial_trace(rho, parse_index_list(keep));
}

Partition partition_for(const RunConfig& cfg, const Dims& dims) {
    Partition p = cfg.partition.empty() ? Partition::one_vs_rest(cfg.first, dims.size())
                                        : Partition::parse(cfg.partition);
    p.require_covers(dims.size());
    return p;
}

MeasureKind measure_kind(const std::string& s) {
    if (auto k = measure_kind_from_string(s)) return *k;
    throw InputError("unknown measure '" + s + "' (expected concurrence or cren)");
}

std::vector<double> nu_values(const RunConfig& cfg) {
    if (!cfg.nus.empty()) {
        for (double nu : cfg.nus) {
            if (!(nu >= 2.0)) throw ValidationError("every nu must be >= 2");
        }
        return cfg.nus;
    }
    return nu_grid(cfg.nu_min, cfg.nu_max, cfg.nu_step);
}

RoofConfig roof_config(const RunConfig& cfg) {
    RoofConfig r;
    r.restarts = cfg.restarts;
    r.max_iterations = cfg.max_iterations;
    r.seed = cfg.seed;
    r.threads = cfg.threads;
    if (cfg.ensemble_size > 0) r.ensemble_size = cfg.ensemble_size;
    return r;
}

AuditOptions audit_options(const RunConfig& cfg) {
    AuditOptions o;
    o.tolerance.relative = cfg.tolerance;
    o.roof = roof_config(cfg);
    return o;
}

std::string format_or(const RunConfig& cfg, const std::string& fallback) {
    return cfg.format.empty() ? fallback : cfg.format;
}

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("cannot open output file '" + path + "'");
            os_ = &file_;
        }
    }
    std::ostream& get() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

std::string describe(const MeasureValue& v) {
    std::string s = format_number(v.value) + " (" + std::string(to_string(v.method));
    if (v.interval) {
        s += ", interval [" + format_number(v.interval->lower) + ", " + format_number(v.interval->upper) + "]";
        if (!v.converged) s += ", not converged";
    }
    return s + ")";
}

// ---- measure -----------------------------------------------------------------

int cmd_measure(const RunConfig& cfg, std::ostream& out) {
    const Resolved r = resolve_state(cfg);
    const AnyState state = apply_keep(r.state, cfg.keep);
    const Dims& dims = dims_of(state);
    const Partition p = partition_for(cfg, dims);
    const RoofConfig roof = roof_config(cfg);

    std::vector<std::pair<std::string, MeasureValue>> values;
    if (const auto* psi = std::get_if<PureState>(&state)) {
        values = {{"concurrence", concurrence_pure(*psi, p)}, {"negativity", negativity(*psi, p)},
                  {"cren", cren(*psi, p)}};
    } else {
        const auto& rho = std::get<DensityOperator>(state);
        values = {{"concurrence", concurrence(rho, p, roof)}, {"negativity", negativity(rho, p)},
                  {"cren", cren(rho, p, roof)}};
    }

    Sink sink(cfg.out, out);
    const std::string fmt = format_or(cfg, "text");
    if (fmt == "json") {
        json j{{"state", r.label}, {"dims", dims.values()}, {"partition", p.to_string()}};
        for (const auto& [name, v] : values) j[name] = to_json(v);
        sink.get() << j.dump(2) << '\n';
    } else if (fmt == "csv") {
        sink.get() << "quantity,value,method,lower,upper\n";
        for (const auto& [name, v] : values) {
            const Interval i = v.range();
            sink.get() << name << ',' << format_number(v.value) << ',' << to_string(v.method) << ','
                       << format_number(i.lower) << ',' << format_number(i.upper) << '\n';
        }
    } else {
        sink.get() << "state " << r.label << " dims " << to_string(dims) << " partition " << p.to_string() << '\n';
        for (const auto& [name, v] : values) sink.get() << name << ' ' << describe(v) << '\n';
    }
    return kExitOk;
}

// ---- audit -------------------------------------------------------------------

void print_offending(const AuditReport& report, std::ostream& err) {
    for (const auto& row : report.rows) {
        for (const auto& b : row.bounds) {
            if (b.verdict != Verdict::Violated) continue;
            err << "violated: " << report.label << " nu=" << format_number(row.nu) << ' ' << to_string(b.id)
                << " lhs=" << format_number(row.lhs) << " rhs=[" << format_number(b.rhs_range.lower) << ", "
                << format_number(b.rhs_range.upper) << "]\n";
        }
    }
}

// {"measure": "cren", "total": 2, "pairwise": [1, 1], "residual": 2, "residual_interval": [lo, hi]}
AuditIngredients load_ingredients(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open ingredients file '" + path + "'");
    try {
        const json j = json::parse(in);
        AuditIngredients ing;
        ing.kind = measure_kind(j.value("measure", std::string("concurrence")));
        ing.total = j.at("total").get<double>();
        for (double v : j.at("pairwise").get<std::vector<double>>()) {
            if (v < 0.0) throw ValidationError("pairwise values must be non-negative");
            ing.pairwise.push_back({v, Method::ClosedFormPure, std::nullopt, true});
        }
        ing.residual.measure_kind = ing.kind;
        ing.residual.value = j.value("residual", 0.0);
        if (j.contains("residual_interval")) {
            const auto iv = j.at("residual_interval").get<std::vector<double>>();
            if (iv.size() != 2 || iv[0] > iv[1]) throw InputError("residual_interval must be [lower, upper]");
            ing.residual.uncertainty = Interval{iv[0], iv[1]};
        }
        if (ing.total < 0.0) throw ValidationError("total must be non-negative");
        return ing;
    } catch (const json::exception& e) {
        throw InputError("cannot read ingredients '" + path + "': " + e.what());
    }
}

int cmd_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::vector<double> nus = nu_values(cfg);
    AuditReport report;
    if (!cfg.ingredients.empty()) {
        if (!cfg.state.empty()) throw InputError("--state and --ingredients are mutually exclusive");
        report = audit_ingredients(cfg.ingredients, cfg.first, load_ingredients(cfg.ingredients), nus,
                                   audit_options(cfg));
    } else {
        const Resolved r = resolve_state(cfg);
        const AnyState state = apply_keep(r.state, cfg.keep);
        const auto* psi = std::get_if<PureState>(&state);
        if (!psi) throw ValidationError("audit needs a pure state");
        report = audit(*psi, r.label, cfg.first, measure_kind(cfg.measure), nus, audit_options(cfg));
    }

    Sink sink(cfg.out, out);
    if (format_or(cfg, "csv") == "json") {
        sink.get() << to_json(report).dump(2) << '\n';
    } else {
        write_csv(sink.get(), report);
    }
    if (report.any_violated()) {
        print_offending(report, err);
        return kExitViolation;
    }
    return kExitOk;
}

// ---- figure ------------------------------------------------------------------

int cmd_figure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.which != "fig1" && cfg.which != "fig2") {
        throw InputError("unknown figure '" + cfg.which + "' (expected fig1 or fig2)");
    }
    const std::vector<double> nus = nu_values(cfg);
    const FigureData fig = figure_data(cfg.which, cfg.paper_values, nus);

    Sink sink(cfg.out, out);
    if (format_or(cfg, "csv") == "json") {
        sink.get() << to_json(fig).dump(2) << '\n';
    } else {
        write_csv(sink.get(), fig);
    }
    for (const auto& d : fig.diagnostics) {
        if (d.quoted_matches) continue;
        err << "mismatch: " << d.quantity << " from the state is " << format_number(d.state_value)
            << ", quoted value " << format_number(d.quoted_value) << ", quoted closed form "
            << format_number(d.closed_form_value) << '\n';
    }
    return kExitOk;
}

// ---- random-audit ------------------------------------------------------------

struct BoundSummary {
    std::size_t evaluations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    double min_worst_margin = std::numeric_limits<double>::infinity();
    std::map<Verdict, std::size_t> verdicts;
};

int cmd_random_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.samples < 1) throw ValidationError("--samples must be >= 1");
    const Dims dims(cfg.dims);
    if (dims.size() < 3) throw ValidationError("random-audit needs at least three subsystems");
    const MeasureKind kind = measure_kind(cfg.measure);
    const std::vector<double> nus = cfg.nus.empty() && cfg.nu_min == 2.0 && cfg.nu_max == 10.0 && cfg.nu_step == 0.25
                                        ? std::vector<double>{2.0, 3.0, 5.0}
                                        : nu_values(cfg);
    AuditOptions options = audit_options(cfg);
    options.roof.threads = 1;

    const auto n = static_cast<std::size_t>(cfg.samples);
    std::vector<AuditReport> reports(n);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t k = begin; k < n; k += stride) {
            try {
                const PureState psi = haar_random_pure(dims, cfg.seed, k);
                reports[k] = audit(psi, "sample-" + std::to_string(k), cfg.first, kind, nus, options);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const auto threads = static_cast<std::size_t>(std::clamp(cfg.threads, 1, cfg.samples));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::map<BoundId, BoundSummary> summary;
    std::vector<std::size_t> offending;
    for (std::size_t k = 0; k < n; ++k) {
        for (const auto& row : reports[k].rows) {
            for (const auto& b : row.bounds) {
                auto& s = summary[b.id];
                ++s.evaluations;
                s.min_margin = std::min(s.min_margin, b.margin);
                s.min_worst_margin = std::min(s.min_worst_margin, b.worst_margin);
                ++s.verdicts[b.verdict];
            }
        }
        if (reports[k].any_violated()) offending.push_back(k);
    }

    const Verdict order[] = {Verdict::HoldsWithCertainty, Verdict::HoldsAtBestEstimate, Verdict::Indeterminate,
                             Verdict::Violated};
    Sink sink(cfg.out, out);
    if (format_or(cfg, "csv") == "json") {
        json bounds = json::array();
        for (const auto& [id, s] : summary) {
            json counts;
            for (Verdict v : order) counts[std::string(to_string(v))] = s.verdicts.count(v) ? s.verdicts.at(v) : 0;
            bounds.push_back({{"id", std::string(to_string(id))},
                              {"evaluations", s.evaluations},
                              {"min_margin", s.min_margin},
                              {"min_worst_margin", s.min_worst_margin},
                              {"verdicts", counts}});
        }
        sink.get() << json{{"dims", dims.values()},
                           {"measure", std::string(to_string(kind))},
                           {"samples", cfg.samples},
                           {"seed", cfg.seed},
                           {"nu", nus},
                           {"violating_samples", offending.size()},
                           {"bounds", bounds}}
                          .dump(2)
                   << '\n';
    } else {
        sink.get() << "bound_id,evaluations,min_margin,min_worst_margin";
        for (Verdict v : order) sink.get() << ',' << to_string(v);
        sink.get() << '\n';
        for (const auto& [id, s] : summary) {
            sink.get() << to_string(id) << ',' << s.evaluations << ',' << format_number(s.min_margin) << ','
                       << format_number(s.min_worst_margin);
            for (Verdict v : order) sink.get() << ',' << (s.verdicts.count(v) ? s.verdicts.at(v) : 0);
            sink.get() << '\n';
        }
    }

    if (offending.empty()) return kExitOk;
    for (std::size_t k : offending) {
        print_offending(reports[k], err);
        err << "state " << k << ": " << to_json(haar_random_pure(dims, cfg.seed, k)).dump() << '\n';
    }
    return kExitViolation;
}

// ---- counterexamples ---------------------------------------------------------

int cmd_counterexamples(const RunConfig& cfg, std::ostream& out) {
    const std::vector<double> nus = cfg.nus.empty() ? std::vector<double>{2.0, 3.0, 4.0, 10.0} : nu_values(cfg);
    const auto checks = counterexample_checks(nus, roof_config(cfg));
    Sink sink(cfg.out, out);
    if (format_or(cfg, "json") == "csv") {
        sink.get() << "state,nu,lhs,lemma3,difference\n";
        for (const auto& c : checks) {
            for (const auto& r : c.rows) {
                sink.get() << c.name << ',' << format_number(r.nu) << ',' << format_number(r.lhs) << ','
                           << format_number(r.lemma3) << ',' << format_number(r.difference) << '\n';
            }
        }
    } else {
        sink.get() << to_json(checks).dump(2) << '\n';
    }
    return kExitOk;
}

// ---- croof -------------------------------------------------------------------

int cmd_croof(const RunConfig& cfg, std::ostream& out) {
    const Resolved r = resolve_state(cfg);
    const AnyState state = apply_keep(r.state, cfg.keep);
    const DensityOperator rho = std::holds_alternative<PureState>(state) ? to_density(std::get<PureState>(state))
                                                                          : std::get<DensityOperator>(state);
    const Partition p = partition_for(cfg, rho.dims());
    RoofObjective objective;
    if (cfg.objective == "negativity") {
        objective = RoofObjective::Negativity;
    } else if (cfg.objective == "concurrence") {
        objective = RoofObjective::Concurrence;
    } else {
        throw InputError("unknown objective '" + cfg.objective + "' (expected negativity or concurrence)");
    }
    const RoofResult res = roof_upper_bound(rho, p, objective, roof_config(cfg));

    Sink sink(cfg.out, out);
    if (format_or(cfg, "json") == "csv") {
        sink.get() << "restart,value,best_so_far\n";
        for (std::size_t k = 0; k < res.restart_values.size(); ++k) {
            sink.get() << k << ',' << format_number(res.restart_values[k]) << ','
                       << format_number(res.best_so_far[k]) << '\n';
        }
        return kExitOk;
    }
    json j{{"state", r.label},
           {"dims", rho.dims().values()},
           {"partition", p.to_string()},
           {"objective", cfg.objective},
           {"upper_bound", to_json(res.value)},
           {"rank", res.rank},
           {"ensemble_size", res.ensemble_size},
           {"restart_values", res.restart_values},
           {"best_restart", res.best_restart},
           {"negativity", negativity(rho, p).value}};
    if (rho.dims() == Dims({2, 2}) && p.covers(2)) j["wootters"] = wootters_concurrence(rho).value;
    sink.get() << j.dump(2) << '\n';
    return kExitOk;
}

// ---- option wiring -----------------------------------------------------------

void add_state_options(CLI::App* cmd, RunConfig& cfg, bool required = true) {
    auto* opt = cmd->add_option("--state", cfg.state, "builtin state name or path to a state JSON file");
    if (required) opt->required();
    cmd->add_option("--keep", cfg.keep, "reduce to these subsystems first, e.g. 01");
}

void add_nu_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--nu-min", cfg.nu_min, "smallest nu of the grid");
    cmd->add_option("--nu-max", cfg.nu_max, "largest nu of the grid");
    cmd->add_option("--nu-step", cfg.nu_step, "grid step");
    cmd->add_option("--nu", cfg.nus, "explicit nu values, overriding the grid")->delimiter(',');
}

void add_roof_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--restarts", cfg.restarts, "convex-roof random restarts");
    cmd->add_option("--max-iterations", cfg.max_iterations, "convex-roof iterations per restart");
    cmd->add_option("--ensemble-size", cfg.ensemble_size, "decomposition size (default rank^2)");
    cmd->add_option("--threads", cfg.threads, "worker threads");
}

void add_output_options(CLI::App* cmd, RunConfig& cfg, bool with_text) {
    std::vector<std::string> formats{"csv", "json"};
    if (with_text) formats.push_back("text");
    cmd->add_option("--format", cfg.format, "output format")->check(CLI::IsMember(formats));
    cmd->add_option("--out", cfg.out, "write the report to this path");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement measures and monogamy audits for small multi-qudit states", "qmono"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* measure = app.add_subcommand("measure", "concurrence, negativity and CREN across a partition");
    add_state_options(measure, cfg);
    measure->add_option("--partition", cfg.partition, "cut as i:jk (default: --first against the rest)");
    measure->add_option("--first", cfg.first, "subsystem A when no partition is given");
    add_roof_options(measure, cfg);
    measure->add_option("--seed", cfg.seed, "convex-roof seed");
    add_output_options(measure, cfg, true);

    auto* audit_cmd = app.add_subcommand("audit", "evaluate the monogamy bounds of a pure state");
    add_state_options(audit_cmd, cfg, false);
    audit_cmd->add_option("--ingredients", cfg.ingredients, "audit measure values from a JSON file instead");
    audit_cmd->add_option("--measure", cfg.measure, "concurrence or cren");
    audit_cmd->add_option("--first", cfg.first, "subsystem playing A");
    audit_cmd->add_option("--tolerance", cfg.tolerance, "relative tolerance of the verdicts");
    audit_cmd->add_option("--seed", cfg.seed, "convex-roof seed");
    add_nu_options(audit_cmd, cfg);
    add_roof_options(audit_cmd, cfg);
    add_output_options(audit_cmd, cfg, false);

    auto* figure = app.add_subcommand("figure", "bound curves for fig1 or fig2");
    figure->add_option("which", cfg.which, "fig1 or fig2")->required();
    figure->add_flag("--paper-values", cfg.paper_values, "use the quoted ingredient values");
    add_nu_options(figure, cfg);
    add_output_options(figure, cfg, false);

    auto* random = app.add_subcommand("random-audit", "audit Haar-random pure states");
    random->add_option("--samples", cfg.samples, "number of states");
    random->add_option("--dims", cfg.dims, "register dimensions, e.g. 2,2,2")->delimiter(',');
    random->add_option("--measure", cfg.measure, "concurrence or cren");
    random->add_option("--first", cfg.first, "subsystem playing A");
    random->add_option("--tolerance", cfg.tolerance, "relative tolerance of the verdicts");
    random->add_option("--seed", cfg.seed, "sampling seed");
    add_nu_options(random, cfg);
    add_roof_options(random, cfg);
    add_output_options(random, cfg, false);

    auto* counter = app.add_subcommand("counterexamples", "Ou and Kim-Sanders checks");
    counter->add_option("--nu", cfg.nus, "nu values (default 2,3,4,10)")->delimiter(',');
    counter->add_option("--seed", cfg.seed, "convex-roof seed");
    add_roof_options(counter, cfg);
    add_output_options(counter, cfg, false);

    auto* croof = app.add_subcommand("croof", "convex-roof upper bound of a mixed state");
    add_state_options(croof, cfg);
    croof->add_option("--partition", cfg.partition, "cut as i:jk (default: --first against the rest)");
    croof->add_option("--first", cfg.first, "subsystem A when no partition is given");
    croof->add_option("--objective", cfg.objective, "negativity or concurrence");
    croof->add_option("--seed", cfg.seed, "restart seed");
    add_roof_options(croof, cfg);
    add_output_options(croof, cfg, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*measure) return cmd_measure(cfg, out);
        if (*audit_cmd) return cmd_audit(cfg, out, err);
        if (*figure) return cmd_figure(cfg, out, err);
        if (*random) return cmd_random_audit(cfg, out, err);
        if (*counter) return cmd_counterexamples(cfg, out);
        if (*croof) return cmd_croof(cfg, out);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitInput;
}

} // namespace qmono
