#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momentous/diagnostics.hpp"
#include "momentous/dynamics.hpp"
#include "momentous/integrator.hpp"
#include "momentous/moment_algebra.hpp"
#include "momentous/published_brackets.hpp"
#include "momentous/table.hpp"

namespace momentous::cli {

enum ExitCode : int { kOk = 0, kToleranceFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

enum class Model { Sbth, Lindblad, Classical };

inline std::string_view model_name(Model m) {
    switch (m) {
        case Model::Sbth: return "sbth";
        case Model::Lindblad: return "lindblad";
        case Model::Classical: return "classical";
    }
    return "?";
}

using KeyMap = std::map<std::string, std::string>;

/// Keys accepted in config files; each is also a long flag.
inline const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys{
        "model", "preset", "m",     "hbar",  "big-omega", "omega0",       "lambda",
        "gamma", "omega",  "omega-prime", "nbar", "n-level", "dt",       "t-end",
        "sample-every", "out", "tol", "emit-xy"};
    return keys;
}

struct RunConfig {
    Model model;
    std::optional<std::string> preset;
    ModelParams params;
    IntegratorConfig integrator;
    std::string out;
    bool emit_xy;
    double tol;
};

/// `key = value` lines; blank lines and lines starting with `#` are skipped.
inline KeyMap parse_config(std::istream& is, const std::string& source) {
    KeyMap kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(s).substr(0, eq));
        if (!config_keys().contains(key))
            throw ConfigError(source + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        kv[key] = detail::trim(std::string_view(s).substr(eq + 1));
    }
    return kv;
}

inline KeyMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config(in, path);
}

/// Values the published figures were produced with. Lambda, big-omega and
/// omega-prime follow from gamma and omega unless set explicitly.
inline KeyMap preset_values(const std::string& name) {
    KeyMap base{{"m", "1"},       {"hbar", "1"},          {"gamma", "0.08"},
                {"omega", "1.5"}, {"n-level", "3"},       {"dt", "0.001"},
                {"t-end", "80"},  {"sample-every", "100"}, {"emit-xy", "true"}};
    if (name == "paper-fig1" || name == "paper-fig2") {
        base["nbar"] = "2";
    } else if (name == "paper-fig3") {
        base["nbar"] = "0";
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return base;
}

inline KeyMap default_values() {
    return {{"model", "sbth"}, {"m", "1"},       {"hbar", "1"},        {"gamma", "0.08"},
            {"omega", "1.5"},  {"nbar", "0"},    {"n-level", "3"},     {"dt", "0.001"},
            {"t-end", "80"},   {"sample-every", "100"}, {"emit-xy", "false"}};
}

namespace detail {

inline double to_double(const KeyMap& kv, const std::string& key) {
    try {
        return momentous::detail::parse_double(kv.at(key));
    } catch (const ParseError&) {
        throw ConfigError("invalid number for " + key + ": '" + kv.at(key) + "'");
    }
}

inline int to_int(const KeyMap& kv, const std::string& key) {
    const std::string& s = kv.at(key);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("invalid integer for " + key + ": '" + s + "'");
    return v;
}

inline bool to_bool(const KeyMap& kv, const std::string& key) {
    const std::string& s = kv.at(key);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("invalid boolean for " + key + ": '" + s + "'");
}

inline std::string echo_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Merges defaults < preset < layers (lowest priority first) and validates.
inline RunConfig resolve(const std::vector<KeyMap>& layers) {
    std::optional<std::string> preset;
    for (const auto& l : layers)
        if (auto it = l.find("preset"); it != l.end() && !it->second.empty() && it->second != "none")
            preset = it->second;

    KeyMap kv = default_values();
    if (preset)
        for (const auto& [k, v] : preset_values(*preset)) kv[k] = v;
    for (const auto& l : layers)
        for (const auto& [k, v] : l) kv[k] = v;

    using detail::to_double;
    Model model;
    const std::string& mname = kv.at("model");
    if (mname == "sbth")
        model = Model::Sbth;
    else if (mname == "lindblad")
        model = Model::Lindblad;
    else if (mname == "classical")
        model = Model::Classical;
    else
        throw ConfigError("unknown model '" + mname + "'");

    ParamInput in;
    in.m = to_double(kv, "m");
    in.hbar = to_double(kv, "hbar");
    in.gamma = to_double(kv, "gamma");
    in.omega = to_double(kv, "omega");
    in.nbar = to_double(kv, "nbar");
    in.n_level = detail::to_int(kv, "n-level");
    in.lambda = kv.contains("lambda") ? to_double(kv, "lambda") : in.gamma / 2;
    in.omega_prime = kv.contains("omega-prime") ? to_double(kv, "omega-prime") : in.omega;
    in.big_omega.reset();
    if (kv.contains("big-omega")) in.big_omega = to_double(kv, "big-omega");
    if (kv.contains("omega0")) in.omega0 = to_double(kv, "omega0");
    if (!in.big_omega && !in.omega0) in.big_omega = in.omega;

    IntegratorConfig ic;
    ic.dt = to_double(kv, "dt");
    ic.t_end = to_double(kv, "t-end");
    ic.sample_every = detail::to_int(kv, "sample-every");
    ic.validate();

    return RunConfig{model,
                     preset,
                     ModelParams::make(in),
                     ic,
                     kv.contains("out") ? kv.at("out") : std::string{},
                     detail::to_bool(kv, "emit-xy"),
                     kv.contains("tol") ? to_double(kv, "tol") : 1e-6};
}

/// Resolved configuration as `key = value` pairs. Feeding them back as a
/// config file reproduces the run exactly.
inline std::vector<std::pair<std::string, std::string>> echo(const RunConfig& c) {
    using detail::echo_number;
    const auto& p = c.params;
    std::vector<std::pair<std::string, std::string>> out{{"model", std::string(model_name(c.model))}};
    if (c.preset) out.emplace_back("preset", *c.preset);
    out.insert(out.end(), {
                              {"m", echo_number(p.m())},
                              {"hbar", echo_number(p.hbar())},
                              {"big-omega", echo_number(p.big_omega())},
                              {"lambda", echo_number(p.lambda())},
                              {"gamma", echo_number(p.gamma())},
                              {"omega", echo_number(p.omega())},
                              {"omega-prime", echo_number(p.omega_prime())},
                              {"nbar", echo_number(p.nbar())},
                              {"n-level", std::to_string(p.n_level())},
                              {"dt", echo_number(c.integrator.dt)},
                              {"t-end", echo_number(c.integrator.t_end)},
                              {"sample-every", std::to_string(c.integrator.sample_every)},
                              {"emit-xy", c.emit_xy ? "true" : "false"},
                          });
    return out;
}

/// Everything a simulation produces.
struct RunResult {
    Table csv;          // full per-model schema
    Table observables;  // t, x, p, G20, G02, G11, E_mean
    InvariantAudit audit;
};

inline void append_belts(std::vector<double>& row, const OscillatorSample& s) {
    const double dx = std::sqrt(s.g20), dp = std::sqrt(s.g02);
    row.insert(row.end(), {s.x + dx, s.x - dx, s.p + dp, s.p - dp});
}

inline RunResult run_model(const RunConfig& cfg) {
    const auto& p = cfg.params;
    RunResult r;
    r.csv.meta = echo(cfg);
    constexpr double audit_tol = 1e-9;

    switch (cfg.model) {
        case Model::Sbth: {
            const auto [z0, c0] = coherent_initial_state(p);
            const auto traj = integrate(build_sbth(p), z0, c0, cfg.integrator);
            const auto view = oscillator_view(traj);
            r.audit = audit(traj, p, audit_tol);
            r.observables = observable_table(view, p);

            auto& cols = r.csv.columns;
            cols = {"t", "x1", "p1", "p2", "x2"};
            for (const auto& m : moment_indices<4>()) cols.push_back("G" + exponent_label<4>(m));
            if (cfg.emit_xy)
                cols.insert(cols.end(), {"x", "p_x", "G20", "G02", "G11", "E_mean", "E_plus",
                                         "E_minus", "U1", "Ux", "x_plus", "x_minus", "p_plus",
                                         "p_minus"});
            for (std::size_t i = 0; i < traj.samples.size(); ++i) {
                const auto& s = traj.samples[i];
                std::vector<double> row{s.t};
                for (int k = 0; k < 4; ++k) row.push_back(s.means[k]);
                const auto packed = s.cov.packed();
                row.insert(row.end(), packed.data(), packed.data() + packed.size());
                if (cfg.emit_xy) {
                    const auto& v = view[i];
                    const auto e = energy_at(v, p);
                    row.insert(row.end(), {v.x, v.p, v.g20, v.g02, v.g11, e.e_mean, e.e_plus,
                                           e.e_minus, s.cov.uncertainty_determinant(0),
                                           v.g20 * v.g02 - v.g11 * v.g11});
                    append_belts(row, v);
                }
                r.csv.rows.push_back(std::move(row));
            }
            break;
        }
        case Model::Lindblad: {
            const auto [z0, c0] = single_coherent_state(p);
            const auto traj = integrate(build_lindblad(p), z0, c0, cfg.integrator);
            const auto view = oscillator_view(traj);
            r.audit = audit(traj, p, audit_tol);
            r.observables = observable_table(view, p);
            r.csv.columns = {"t",      "x",          "p", "G20",    "G02",     "G11",   "E_mean",
                             "E_analytic", "U",      "x_plus", "x_minus", "p_plus", "p_minus"};
            for (const auto& v : view) {
                const auto e = energy_at(v, p);
                std::vector<double> row{v.t,    v.x,       v.p,
                                        v.g20,  v.g02,     v.g11,
                                        e.e_mean, e.e_lindblad_analytic, v.g20 * v.g02 - v.g11 * v.g11};
                append_belts(row, v);
                r.csv.rows.push_back(std::move(row));
            }
            break;
        }
        case Model::Classical: {
            const auto [z0, c0] = single_coherent_state(p);
            const auto zero = CovarianceMatrix<2>::zero(CanonicalFrame::l1());
            const auto traj = integrate(build_classical(p), z0, zero, cfg.integrator);
            const auto view = oscillator_view(traj);
            r.audit = audit(traj, p, audit_tol);
            r.observables = observable_table(view, p);
            r.csv.columns = {"t", "x", "p", "E_mean", "x_analytic", "p_analytic"};
            for (const auto& v : view) {
                const auto [xa, pa] = classical_analytic(p, z0[0], z0[1], v.t);
                r.csv.rows.push_back({v.t, v.x, v.p, energy_at(v, p).e_mean, xa, pa});
            }
            break;
        }
    }
    return r;
}

inline void print_audit(std::ostream& os, const InvariantAudit& a) {
    auto num = [](double v) { return detail::echo_number(v); };
    os << "audit: samples=" << a.rows.size() << " uncertainty_violations=" << a.uncertainty_violations
       << " ground_state_violations=" << a.ground_state_violations << " tol=" << num(a.tol) << '\n';
    if (std::isfinite(a.min_u_pair1))
        os << "audit: min_U1=" << num(a.min_u_pair1) << " floor=" << num(a.uncertainty_floor) << '\n';
    if (std::isfinite(a.min_u_xy)) os << "audit: min_Ux=" << num(a.min_u_xy) << '\n';
    if (!std::isnan(a.final_e_mean))
        os << "audit: final_E_mean=" << num(a.final_e_mean) << " ground_bound=" << num(a.ground_bound)
           << '\n';
    if (std::isfinite(a.min_sbth_margin))
        os << "audit: min_sbth_diffusion_margin=" << num(a.min_sbth_margin) << '\n';
    if (a.lindblad_margin) os << "audit: lindblad_diffusion_margin=" << num(*a.lindblad_margin) << '\n';
    if (a.first_violation_time) os << "audit: first_violation_t=" << num(*a.first_violation_time) << '\n';
    os << "audit: " << (a.ok() ? "PASS" : "FAIL") << '\n';
}

/// Writes to `path`, or to `fallback` when the path is empty or "-".
inline void write_output(const std::string& path, const Table& t, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        write_csv(fallback, t);
        return;
    }
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    write_csv(f, t);
    if (!f) throw ConfigError("error while writing " + path);
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto r = run_model(cfg);
    write_output(cfg.out, r.csv, out);
    print_audit(cfg.out.empty() || cfg.out == "-" ? err : out, r.audit);
    return kOk;
}

struct CompareOutcome {
    std::vector<ColumnMetrics> metrics;
    Table joint;
    bool within_tol;
};

inline const std::vector<std::string>& default_compare_columns() {
    static const std::vector<std::string> cols{"x", "p", "G20", "G02", "G11", "E_mean"};
    return cols;
}

/// Runs both configurations concurrently and compares their observables.
inline CompareOutcome compare_runs(const RunConfig& a, const RunConfig& b,
                                   const std::vector<std::string>& columns, double tol) {
    for (const auto& c : columns)
        if (c == "t" || std::find(default_compare_columns().begin(), default_compare_columns().end(), c) ==
                            default_compare_columns().end())
            throw ConfigError("cannot compare column '" + c + "'");
    auto fa = std::async(std::launch::async, [&] { return run_model(a); });
    const auto rb = run_model(b);
    const auto ra = fa.get();

    CompareOutcome out;
    out.metrics = compare(ra.observables, rb.observables, columns);
    out.within_tol = true;
    for (const auto& m : out.metrics)
        if (!(m.max_abs <= tol)) out.within_tol = false;

    out.joint.columns = {"t"};
    for (const auto& c : columns) {
        out.joint.columns.push_back(c + "_a");
        out.joint.columns.push_back(c + "_b");
    }
    const auto t = ra.observables.column("t");
    std::vector<std::vector<double>> ca, cb;
    for (const auto& c : columns) {
        ca.push_back(ra.observables.column(c));
        cb.push_back(rb.observables.column(c));
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<double> row{t[i]};
        for (std::size_t k = 0; k < columns.size(); ++k) row.insert(row.end(), {ca[k][i], cb[k][i]});
        out.joint.rows.push_back(std::move(row));
    }
    for (const auto& [k, v] : echo(a)) out.joint.meta.emplace_back("a." + k, v);
    for (const auto& [k, v] : echo(b)) out.joint.meta.emplace_back("b." + k, v);
    return out;
}

/// Re-audits a CSV written by `simulate`. Returns kOk when clean,
/// kToleranceFailure on violations.
inline int cmd_check(const std::string& path, double tol, std::ostream& out) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    const Table t = read_csv(f);

    KeyMap meta;
    for (const auto& [k, v] : t.meta)
        if (config_keys().contains(k) && k != "out") meta[k] = v;
    const RunConfig cfg = resolve({meta});
    const auto& p = cfg.params;

    Model model = cfg.model;
    if (!t.meta_value("model")) model = t.has("x1") ? Model::Sbth : (t.has("G20") ? Model::Lindblad : Model::Classical);

    auto col = [&](const std::string& name) {
        if (!t.has(name)) throw ParseError(path + ": missing column " + name);
        return t.column(name);
    };
    const auto time = col("t");
    std::vector<AuditRow> rows(time.size());
    for (std::size_t i = 0; i < time.size(); ++i) rows[i].t = time[i];

    if (model == Model::Sbth) {
        const auto gx = col("G2000"), gp = col("G0200"), gxp = col("G1100");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i].u_pair1 = gx[i] * gp[i] - gxp[i] * gxp[i];
            rows[i].sbth_margin = sbth_diffusion_margin(p, gx[i], gp[i], gxp[i]);
        }
        if (t.has("G20")) {
            const auto a = col("G20"), b = col("G02"), c = col("G11"), e = col("E_mean");
            for (std::size_t i = 0; i < rows.size(); ++i) {
                rows[i].u_xy = a[i] * b[i] - c[i] * c[i];
                rows[i].e_mean = e[i];
            }
        }
    } else if (model == Model::Lindblad) {
        const auto a = col("G20"), b = col("G02"), c = col("G11"), e = col("E_mean");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i].u_pair1 = a[i] * b[i] - c[i] * c[i];
            rows[i].e_mean = e[i];
        }
    }
    auto a = summarize_audit(std::move(rows), p, tol);
    if (model == Model::Lindblad) {
        const double hg = p.hbar() * p.gamma() / 2;
        a.lindblad_margin = lindblad_dxx(p) * lindblad_dpp(p) - hg * hg;
    }
    out << "check: " << path << " model=" << model_name(model) << '\n';
    print_audit(out, a);
    return a.ok() ? kOk : kToleranceFailure;
}

/// All 45 brackets between BT1 second moments; entries that appear in the
/// published table carry a trailing `#paper` tag.
inline void cmd_brackets(std::ostream& out) {
    const auto form = SymplecticForm<4>::quantum(CanonicalFrame::bt1());
    std::set<std::pair<MomentIndex, MomentIndex>> listed;
    for (const auto& b : published_brackets()) {
        auto l = moment_from_exponents<4>(b.lhs), r = moment_from_exponents<4>(b.rhs);
        if (r < l) std::swap(l, r);
        listed.insert({l, r});
    }
    for (const auto& e : bracket_table<4>(form)) {
        out << format_bracket<4>(e);
        if (listed.contains({e.lhs, e.rhs})) out << "  #paper";
        out << '\n';
    }
}

namespace detail {

/// Registers one string option per config key and records which were given.
struct FlagSet {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool emit_xy = false;
    CLI::Option* emit_xy_opt = nullptr;

    void add_to(CLI::App& app, const std::string& suffix = "") {
        for (const auto& k : config_keys()) {
            if (k == "emit-xy") continue;
            options[k] = app.add_option("--" + k + suffix, values[k]);
        }
        emit_xy_opt = app.add_flag("--emit-xy" + suffix, emit_xy, "append restored-frame columns");
    }

    KeyMap given() const {
        KeyMap kv;
        for (const auto& [k, opt] : options)
            if (opt->count() > 0) kv[k] = values.at(k);
        if (emit_xy_opt && emit_xy_opt->count() > 0) kv["emit-xy"] = emit_xy ? "true" : "false";
        return kv;
    }
};

inline KeyMap file_layer(const std::string& explicit_path) {
    if (!explicit_path.empty()) return load_config_file(explicit_path);
    if (const char* env = std::getenv("MOMENTOUS_CONFIG"); env && *env) return load_config_file(env);
    return {};
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Semiclassical damped-oscillator moment dynamics"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "integrate one model and write CSV");
    detail::FlagSet sim_flags;
    sim_flags.add_to(*sim);
    std::string sim_config;
    sim->add_option("--config", sim_config, "key = value config file");

    auto* cmp = app.add_subcommand("compare", "run two models and compare their observables");
    detail::FlagSet cmp_flags;
    cmp_flags.add_to(*cmp);
    std::string cmp_config, config_a, config_b, model_a = "sbth", model_b = "lindblad", columns;
    cmp->add_option("--config", cmp_config, "shared config file");
    cmp->add_option("--config-a", config_a, "config overrides for run A");
    cmp->add_option("--config-b", config_b, "config overrides for run B");
    auto* model_a_opt = cmp->add_option("--model-a", model_a, "model of run A")->capture_default_str();
    auto* model_b_opt = cmp->add_option("--model-b", model_b, "model of run B")->capture_default_str();
    cmp->add_option("--columns", columns, "comma-separated observables");

    auto* chk = app.add_subcommand("check", "audit invariants of a simulate CSV");
    std::string check_path;
    double check_tol = 1e-9;
    chk->add_option("csv", check_path, "CSV file")->required();
    chk->add_option("--tol", check_tol, "violation tolerance")->capture_default_str();

    auto* br = app.add_subcommand("brackets", "print the second-moment bracket table");

    std::vector<std::string> argv_store{"momentous"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (*sim) {
            const auto cfg = resolve({detail::file_layer(sim_config), sim_flags.given()});
            return cmd_simulate(cfg, out, err);
        }
        if (*cmp) {
            const KeyMap shared_file = detail::file_layer(cmp_config);
            const KeyMap shared = cmp_flags.given();
            const KeyMap file_a = config_a.empty() ? KeyMap{} : load_config_file(config_a);
            const KeyMap file_b = config_b.empty() ? KeyMap{} : load_config_file(config_b);
            KeyMap side_a, side_b;
            if (model_a_opt->count() > 0 || !file_a.contains("model")) side_a["model"] = model_a;
            if (model_b_opt->count() > 0 || !file_b.contains("model")) side_b["model"] = model_b;
            const auto a = resolve({shared_file, shared, file_a, side_a});
            const auto b = resolve({shared_file, shared, file_b, side_b});
            std::vector<std::string> cols = default_compare_columns();
            if (!columns.empty()) cols = momentous::detail::split(columns, ',');
            const double tol = a.tol;
            const auto res = compare_runs(a, b, cols, tol);
            out << "compare: a=" << model_name(a.model) << " b=" << model_name(b.model)
                << " tol=" << detail::echo_number(tol) << '\n';
            for (const auto& m : res.metrics)
                out << "  " << m.column << " max_abs=" << detail::echo_number(m.max_abs)
                    << " rms=" << detail::echo_number(m.rms) << " at_t=" << detail::echo_number(m.at_time)
                    << '\n';
            if (!a.out.empty()) write_output(a.out, res.joint, out);
            out << "compare: " << (res.within_tol ? "PASS" : "FAIL") << '\n';
            return res.within_tol ? kOk : kToleranceFailure;
        }
        if (*chk) return cmd_check(check_path, check_tol, out);
        if (*br) {
            cmd_brackets(out);
            return kOk;
        }
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace momentous::cli
