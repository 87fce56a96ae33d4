#pragma once

// Command-line front end. Kept in a header so the test suite can drive the
// commands in-process.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtrace/qtrace.hpp"

namespace qtrace::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 2;
inline constexpr int exit_numerical = 3;

/// "A..B", "A..B:STEP" or a single "A"; ranges iterate over r.
inline std::vector<Level> parse_level_range(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (s.empty() || used != s.size())
            throw input_error("bad level range '" + text + "'");
        return v;
    };
    int lo = 0, hi = 0, step = 1;
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        lo = hi = to_int(text);
    } else {
        lo = to_int(text.substr(0, dots));
        std::string rest = text.substr(dots + 2);
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
            step = to_int(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        hi = to_int(rest);
    }
    if (step < 1 || hi < lo)
        throw input_error("bad level range '" + text + "'");
    std::vector<Level> out;
    for (int r = lo; r <= hi; r += step)
        out.emplace_back(r);
    return out;
}

inline SpineGraph resolve_graph(const std::string& spec) {
    const std::string prefix = "builtin:";
    if (spec.rfind(prefix, 0) == 0) {
        const std::string name = spec.substr(prefix.size());
        if (name == "theta")
            return graphs::theta();
        if (name == "dumbbell")
            return graphs::dumbbell();
        if (name == "freeloop")
            return SpineGraph::free_loop();
        if (name == "tetrahedron")
            return graphs::tetrahedron();
        if (name == "chain3")
            return graphs::chain3();
        if (name == "prism")
            return graphs::prism();
        throw input_error("unknown builtin graph '" + name + "'");
    }
    return load_graph_file(spec);
}

struct RunConfig {
    std::string graph;
    std::vector<std::string> multicurves;
    std::vector<std::string> xs;
    std::string y;
    std::string levels;
    std::string quad = "grid:200";
    std::uint64_t seed = 0;
    std::uint64_t samples = 10000;
    std::string method = "contract";
    std::string format = "csv";
    std::string out;
    double tolerance = 1e-9;
    std::string matrix;
};

namespace detail {

inline void emit(const Table& t, const RunConfig& cfg, std::ostream& out) {
    const std::string text = (cfg.format == "json") ? to_json(t).dump(2) + "\n" : to_csv(t);
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file)
        throw input_error("cannot write '" + cfg.out + "'");
    file << text;
}

inline AdaptedMulticurve curve_or_empty(const SpineGraph& g, const RunConfig& cfg, std::size_t i = 0) {
    if (cfg.multicurves.size() <= i)
        return AdaptedMulticurve::empty(g);
    return load_multicurve_file(g, cfg.multicurves[i]);
}

inline std::vector<Level> require_levels(const RunConfig& cfg) {
    if (cfg.levels.empty())
        throw input_error("--r is required");
    return parse_level_range(cfg.levels);
}

inline Table cmd_verlinde(const RunConfig& cfg) {
    const SpineGraph g = resolve_graph(cfg.graph);
    Table t;
    t.columns = {"r", "p", "dimension"};
    for (const Level& level : require_levels(cfg))
        t.add_row({std::int64_t{level.r()}, std::int64_t{level.p()}, static_cast<std::int64_t>(verlinde_dim(g, level))});
    t.meta = {{"genus", g.genus()}, {"d", g.dim()}};
    return t;
}

inline Table cmd_trace(const RunConfig& cfg) {
    const SpineGraph g = resolve_graph(cfg.graph);
    const AdaptedMulticurve m = curve_or_empty(g, cfg);
    const TraceMethod method = parse_trace_method(cfg.method);
    Table t;
    t.columns = {"r", "p", "trace", "normalized"};
    for (const Level& level : require_levels(cfg)) {
        const TraceValue v = trace_level(g, m, level, method);
        t.add_row({std::int64_t{level.r()}, std::int64_t{level.p()}, v.value, v.normalized});
    }
    t.meta = {{"multicurve", multicurve_label(g, m)}, {"method", cfg.method}, {"d", g.dim()}};
    return t;
}

inline Table cmd_limit(const RunConfig& cfg) {
    const SpineGraph g = resolve_graph(cfg.graph);
    const AdaptedMulticurve m = curve_or_empty(g, cfg);
    const QuadratureSpec quad = QuadratureSpec::parse(cfg.quad, cfg.seed);
    const Estimate e = limit_bracket(g, m, quad);
    Table t;
    t.columns = {"multicurve", "quadrature", "limit", "error"};
    t.add_row({multicurve_label(g, m), quad.describe(), e.value, e.error});
    return t;
}

inline Table cmd_converge(const RunConfig& cfg) {
    const SpineGraph g = resolve_graph(cfg.graph);
    const AdaptedMulticurve m = curve_or_empty(g, cfg);
    const QuadratureSpec quad = QuadratureSpec::parse(cfg.quad, cfg.seed);
    Table t = convergence_table(convergence_report(g, m, require_levels(cfg), quad, parse_trace_method(cfg.method)));
    t.meta["multicurve"] = multicurve_label(g, m);
    t.meta["quadrature"] = quad.describe();
    return t;
}

inline Table cmd_partition(const RunConfig& cfg) {
    const SpineGraph g = resolve_graph(cfg.graph);
    Table out;
    for (const Level& level : require_levels(cfg)) {
        Table t = partition_table(partition_check(g, level, cfg.samples, cfg.seed));
        if (out.columns.empty()) {
            out.columns = t.columns;
            out.meta = nlohmann::json::object();
        }
        out.rows.push_back(t.rows.front());
        out.meta[std::to_string(level.r())] = t.meta;
    }
    return out;
}

inline Table cmd_pair(const RunConfig& cfg) {
    const auto levels = require_levels(cfg);
    Table t;
    if (!cfg.xs.empty() || !cfg.y.empty()) {
        if (cfg.xs.size() != 1 || cfg.y.empty())
            throw input_error("torus pairing needs exactly one --x and one --y");
        const SkeinElementT x = parse_skein(cfg.xs.front());
        const SkeinElementT y = parse_skein(cfg.y);
        t.columns = {"r", "p", "pair_re", "pair_im", "normalized_re"};
        for (const Level& level : levels) {
            const auto v = pair_level_torus(x, y, level);
            t.add_row({std::int64_t{level.r()}, std::int64_t{level.p()}, v.real(), v.imag(), v.real() / level.r()});
        }
        t.meta = {{"x", to_string(x)}, {"y", to_string(y)}, {"limit", pair_limit_torus(x, y)}};
        return t;
    }
    const SpineGraph g = resolve_graph(cfg.graph);
    if (cfg.multicurves.size() != 2)
        throw input_error("adapted pairing needs --graph and two --multicurve files");
    const AdaptedMulticurve m = curve_or_empty(g, cfg, 0);
    const AdaptedMulticurve n = curve_or_empty(g, cfg, 1);
    const QuadratureSpec quad = QuadratureSpec::parse(cfg.quad, cfg.seed);
    const TraceMethod method = parse_trace_method(cfg.method);
    t.columns = {"r", "p", "pair", "normalized"};
    for (const Level& level : levels) {
        const double v = adapted_pair_level(g, m, n, level, method);
        t.add_row({std::int64_t{level.r()}, std::int64_t{level.p()}, v,
                   v / std::pow(static_cast<double>(level.r()), g.dim())});
    }
    const Estimate lim = adapted_pair_limit(g, m, n, quad);
    t.meta = {{"x", multicurve_label(g, m)},
              {"y", multicurve_label(g, n)},
              {"limit", lim.value},
              {"limit_error", lim.error},
              {"quadrature", quad.describe()}};
    return t;
}

inline Table cmd_gram(const RunConfig& cfg) {
    std::optional<Level> level;
    if (!cfg.levels.empty())
        level = parse_level_range(cfg.levels).front();
    if (!cfg.xs.empty()) {
        std::vector<SkeinElementT> basis;
        for (const auto& x : cfg.xs)
            basis.push_back(parse_skein(x));
        return gram_table(gram_torus(basis, cfg.xs, level));
    }
    const SpineGraph g = resolve_graph(cfg.graph);
    if (cfg.multicurves.empty())
        throw input_error("gram needs --x elements or --graph with --multicurve files");
    std::vector<AdaptedMulticurve> basis;
    for (std::size_t i = 0; i < cfg.multicurves.size(); ++i)
        basis.push_back(curve_or_empty(g, cfg, i));
    return gram_table(gram_adapted(g, basis, level, QuadratureSpec::parse(cfg.quad, cfg.seed)));
}

inline Table cmd_faithfulness(const RunConfig& cfg) {
    if (cfg.matrix.empty() || cfg.xs.size() != 1)
        throw input_error("faithfulness needs --matrix and one --x");
    return faithfulness_table(
        faithfulness_experiment(parse_matrix(cfg.matrix), parse_skein(cfg.xs.front()), require_levels(cfg), cfg.tolerance));
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum trace functions, coloring sums and their large-level limits"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out, "output file (default: standard output)");
    };
    auto graph_opts = [&](CLI::App* sub) {
        sub->add_option("--graph", cfg.graph, "graph JSON file or builtin:NAME");
        sub->add_option("--multicurve", cfg.multicurves, "multicurve JSON file (repeatable)");
    };

    struct Command {
        const char* name;
        const char* help;
        Table (*run)(const RunConfig&);
    };
    const Command commands[] = {
        {"verlinde", "number of admissible colorings per level", detail::cmd_verlinde},
        {"trace", "tr_p of an adapted multicurve per level", detail::cmd_trace},
        {"limit", "limit functional <gamma> by quadrature", detail::cmd_limit},
        {"converge", "normalized traces against the limit", detail::cmd_converge},
        {"partition", "cell packing check on random interior points", detail::cmd_partition},
        {"pair", "hermitian pairing per level and in the limit", detail::cmd_pair},
        {"gram", "Gram matrices and eigenvalues", detail::cmd_gram},
        {"faithfulness", "norm of M.v - v per level and in the limit", detail::cmd_faithfulness},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        common(sub);
        graph_opts(sub);
        sub->add_option("--r", cfg.levels, "level range A..B[:STEP] over r");
        sub->add_option("--quad", cfg.quad, "grid:N or mc:N");
        sub->add_option("--seed", cfg.seed, "Monte-Carlo seed");
        sub->add_option("--samples", cfg.samples, "interior samples (partition)");
        sub->add_option("--method", cfg.method, "enumerate or contract")->check(CLI::IsMember({"enumerate", "contract"}));
        sub->add_option("--x", cfg.xs, "torus skein element (repeatable for gram)");
        sub->add_option("--y", cfg.y, "second torus skein element");
        sub->add_option("--tolerance", cfg.tolerance, "faithfulness threshold");
        sub->add_option("--matrix", cfg.matrix, "unimodular matrix a,b,c,d");
        subs.emplace_back(sub, &c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        for (const auto& [sub, cmd] : subs) {
            if (sub->parsed()) {
                detail::emit(cmd->run(cfg), cfg, out);
                return exit_ok;
            }
        }
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_input;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"qtrace"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace qtrace::cli
