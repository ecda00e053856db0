#include "cli.hpp"

#include "imcergo/ergodicity.hpp"
#include "imcergo/io.hpp"
#include "imcergo/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>

namespace imcergo::cli {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string model_path;
    std::string gamble;
    double tol = 1e-9;
    std::size_t iter_cap = 100000;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::size_t samples = 200;
    std::size_t oracle_cap = 1'000'000;
    std::string x;
    std::string dot_path;
};

/// Load-phase failure; always exit code 2.
struct LoadFailure {
    std::string message;
};

double round12(double v) {
    if (v == 0.0) return 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string fmt12(double v) {
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json labels_of(const StateSpace& states, const StateSet& set) {
    Json out = Json::array();
    for (std::size_t x : set) out.push_back(states.label(x));
    return out;
}

Json per_state(const StateSpace& states, const Gamble& g) {
    Json out = Json::object();
    for (std::size_t x = 0; x < states.size(); ++x) out[states.label(x)] = round12(g[x]);
    return out;
}

unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("IMCERGO_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions opts;
    opts.tol_scale = cfg.tol;
    opts.iter_cap = cfg.iter_cap;
    return opts;
}

TransitionModel load(const RunConfig& cfg, std::ostream& err) {
    try {
        auto loaded = load_model_file(cfg.model_path);
        for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
        return std::move(loaded.model);
    } catch (const Error& e) {
        throw LoadFailure{e.what()};
    }
}

Gamble load_f(const RunConfig& cfg, const StateSpace& states) {
    if (cfg.gamble.empty()) throw LoadFailure{"a gamble is required (--f a=0,b=1 or --f file.json)"};
    try {
        if (cfg.gamble.find('=') != std::string::npos) return parse_inline_gamble(cfg.gamble, states);
        return load_gamble_file(cfg.gamble, states);
    } catch (const Error& e) {
        throw LoadFailure{e.what()};
    }
}

std::size_t start_state(const RunConfig& cfg, const StateSpace& states) {
    if (cfg.x.empty()) return 0;
    const auto idx = states.index_of(cfg.x);
    if (!idx) throw LoadFailure{"unknown state '" + cfg.x + "'"};
    return *idx;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = load(cfg, err);
    const auto& states = model.states();
    const auto report = classify(model);
    const auto& d = report.decomposition;

    Json doc;
    Json classes = Json::array();
    for (const auto& c : d.classes) classes.push_back(labels_of(states, c));
    doc["classes"] = classes;
    doc["top_class"] = d.top_class ? Json(*d.top_class) : Json(nullptr);
    Json closed = Json::array();
    for (bool c : d.closed) closed.push_back(static_cast<bool>(c));
    doc["closed"] = closed;
    doc["tcr"] = {{"regular", report.tcr.regular}, {"period", report.tcr.period}};
    doc["tca"] = {{"absorbing", report.tca.absorbing}, {"reason", report.tca.reason}};
    doc["ergodic"] = report.ergodic();
    doc["weakly_ergodic"] = report.weakly_ergodic();

    Json witness = nullptr;
    if (!d.top_class) {
        Json closed_classes = Json::array();
        for (std::size_t c : d.closed_classes()) closed_classes.push_back(labels_of(states, d.classes[c]));
        witness = {{"closed_classes", closed_classes}};
    } else if (!report.ergodic()) {
        witness = Json::object();
        if (!report.tcr.regular) witness["period"] = report.tcr.period;
        if (!report.tca.absorbing) witness["confining_set"] = labels_of(states, report.tca.confining_set);
    }
    doc["witness"] = witness;

    if (!cfg.dot_path.empty()) {
        std::ofstream dot(cfg.dot_path);
        if (!dot) throw LoadFailure{"cannot write " + cfg.dot_path};
        dot << to_dot(report.graph, states, d);
    }
    out << doc.dump(2) << '\n';
    return exit_ok;
}

int cmd_limits(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = load(cfg, err);
    const auto f = load_f(cfg, model.states());
    const auto& states = model.states();
    const UpperTransitionOperator op(model);
    const auto r = full_report(op, f, solver_options(cfg));

    Json doc;
    if (r.limit_upper) doc["limit_upper"] = round12(*r.limit_upper);
    if (r.limit_lower) doc["limit_lower"] = round12(*r.limit_lower);
    if (r.limit_avg_upper) doc["limit_avg_upper"] = round12(*r.limit_avg_upper);
    if (r.limit_avg_lower) doc["limit_avg_lower"] = round12(*r.limit_avg_lower);
    Json classes = Json::array();
    Json class_residuals = Json::array();
    for (const auto& c : r.per_class_limits) {
        classes.push_back({{"class", labels_of(states, c.states)},
                           {"upper", round12(c.upper)},
                           {"lower", round12(c.lower)}});
        class_residuals.push_back({{"iterations", c.iterations}, {"residual", round12(c.residual)}});
    }
    doc["per_class_limits"] = classes;
    Json residuals;
    if (r.limit_upper) {
        residuals["limit_upper"] = {{"iterations", r.diagnostics.limit_upper_iterations},
                                    {"residual", round12(r.diagnostics.limit_upper_residual)}};
        residuals["limit_lower"] = {{"iterations", r.diagnostics.limit_lower_iterations},
                                    {"residual", round12(r.diagnostics.limit_lower_residual)}};
    }
    residuals["per_class"] = class_residuals;
    doc["residuals"] = residuals;
    if (!r.weakly_ergodic) {
        doc["diagnostics"] = {{"horizon", r.diagnostics.horizon},
                              {"avg_upper", per_state(states, r.diagnostics.avg_upper_at_horizon)},
                              {"avg_lower", per_state(states, r.diagnostics.avg_lower_at_horizon)}};
    }
    out << doc.dump(2) << '\n';
    return exit_ok;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.k < 1) throw LoadFailure{"trace needs --k >= 1"};
    const auto model = load(cfg, err);
    const auto f = load_f(cfg, model.states());
    const UpperTransitionOperator op(model);
    const auto upper = op.average_trace(f, cfg.k);
    const auto lower = op.average_trace(-f, cfg.k);

    out << "k,state,m_bar_upper,m_bar_lower,u_k_upper,u_k_lower\n";
    Gamble u_up = f;
    Gamble u_lo = f;
    for (std::size_t k = 1; k <= cfg.k; ++k) {
        if (k > 1) {
            u_up = op.apply_upper(u_up);
            u_lo = op.apply_lower(u_lo);
        }
        for (std::size_t x = 0; x < model.size(); ++x) {
            out << k << ',' << model.states().label(x) << ',' << fmt12(upper[k - 1].m_bar[x]) << ','
                << fmt12(-lower[k - 1].m_bar[x]) << ',' << fmt12(u_up[x]) << ',' << fmt12(u_lo[x]) << '\n';
        }
    }
    return exit_ok;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.k < 1) throw LoadFailure{"oracle needs --k >= 1"};
    const auto model = load(cfg, err);
    const auto f = load_f(cfg, model.states());
    const std::size_t x = start_state(cfg, model.states());

    const bool has_intervals =
        std::any_of(model.rows().begin(), model.rows().end(), [](const CredalRow& r) { return !r.is_vertex_list(); });
    if (has_intervals) err << "note: interval rows replaced by their vertices for enumeration\n";
    const auto vmodel = has_intervals ? vertexize(model) : model;

    const UpperTransitionOperator op(model);
    const double recursion = op.average_recursion(f, cfg.k).m_bar[x];
    const auto ci = ci_upper_average_bruteforce(vmodel, f, x, cfg.k, cfg.oracle_cap);
    OracleOptions opts;
    opts.cap = cfg.oracle_cap;
    opts.samples = cfg.samples;
    opts.seed = cfg.seed;
    opts.threads = thread_budget();
    const auto ri = ri_upper_average(vmodel, f, x, cfg.k, opts);

    const double slack = 1e-9 * std::max(1.0, f.sup_norm());
    const bool agree = std::abs(ci.value - recursion) <= slack && ri.vertex.value <= recursion + slack &&
                       (ri.sampled.count == 0 || ri.sampled.value <= recursion + slack);

    Json doc;
    doc["state"] = model.states().label(x);
    doc["k"] = cfg.k;
    doc["ci_bruteforce"] = round12(ci.value);
    doc["recursion_value"] = round12(recursion);
    doc["ri_vertex_max"] = round12(ri.vertex.value);
    doc["ri_sampled_max"] = ri.sampled.count ? Json(round12(ri.sampled.value)) : Json(nullptr);
    doc["agree"] = agree;
    doc["ci_argmax"] = ci.argmax;
    doc["ri_vertex_argmax"] = ri.vertex.argmax;
    doc["sequences"] = ci.count;
    doc["homogeneous_chains"] = ri.vertex.count;
    out << doc.dump(2) << '\n';
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Long-run analysis of imprecise Markov chains", "imcergo"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", cfg.model_path, "Model JSON file")->required();
        sub->add_option("--tol", cfg.tol, "Relative tolerance of the iterative solvers")
            ->check(CLI::PositiveNumber);
        sub->add_option("--iter-cap", cfg.iter_cap, "Iteration cap of the iterative solvers")
            ->check(CLI::PositiveNumber);
    };
    auto add_gamble = [&](CLI::App* sub) {
        sub->add_option("--f", cfg.gamble, "Gamble: inline a=0,b=1 or a JSON file")->required();
    };

    auto* classify_cmd = app.add_subcommand("classify", "Communication classes, TCR/TCA and ergodicity");
    add_common(classify_cmd);
    classify_cmd->add_option("--emit-dot", cfg.dot_path, "Write the accessibility graph as Graphviz DOT");

    auto* limits_cmd = app.add_subcommand("limits", "Limit upper/lower expectations and time averages");
    add_common(limits_cmd);
    add_gamble(limits_cmd);

    auto* trace_cmd = app.add_subcommand("trace", "CSV trace of the recursions for k = 1..K");
    add_common(trace_cmd);
    add_gamble(trace_cmd);
    trace_cmd->add_option("--k", cfg.k, "Largest horizon")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "Compare the recursion with brute-force enumeration");
    add_common(oracle_cmd);
    add_gamble(oracle_cmd);
    oracle_cmd->add_option("--k", cfg.k, "Horizon")->required();
    oracle_cmd->add_option("--x", cfg.x, "Start state label (default: first state)");
    oracle_cmd->add_option("--seed", cfg.seed, "Seed of the interior sampler");
    oracle_cmd->add_option("--samples", cfg.samples, "Number of interior samples");
    oracle_cmd->add_option("--oracle-cap", cfg.oracle_cap, "Cap on enumerated chains or sequences")
        ->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_load_error;
    }

    try {
        if (classify_cmd->parsed()) return cmd_classify(cfg, out, err);
        if (limits_cmd->parsed()) return cmd_limits(cfg, out, err);
        if (trace_cmd->parsed()) return cmd_trace(cfg, out, err);
        if (oracle_cmd->parsed()) return cmd_oracle(cfg, out, err);
        return exit_load_error;
    } catch (const LoadFailure& e) {
        err << "error: " << e.message << '\n';
        return exit_load_error;
    } catch (const NoConvergence& e) {
        Json diag = {{"error", "NoConvergence"},
                     {"message", e.what()},
                     {"iterations", e.iterations()},
                     {"last_residual", round12(e.last_residual())}};
        err << diag.dump() << '\n';
        return exit_no_convergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == Errc::CapExceeded ? exit_cap_exceeded : exit_internal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

} // namespace imcergo::cli
