#include "spinsync/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "spinsync/error.hpp"
#include "spinsync/validation.hpp"

namespace spinsync {

namespace {

using CellFn = std::function<std::vector<Cell>(const RunConfig&)>;

/// Walks the sweep grid with the first axis outermost.
void for_each_cell(const RunConfig& config, const std::function<void(const RunConfig&, const std::vector<double>&)>& f) {
    const Json base = config_to_json(config);
    std::vector<std::vector<double>> values;
    for (const auto& a : config.sweep) {
        values.push_back(a.values());
    }
    std::vector<std::size_t> index(values.size(), 0);
    while (true) {
        Json cell = base;
        std::vector<double> coords;
        for (std::size_t k = 0; k < values.size(); ++k) {
            coords.push_back(values[k][index[k]]);
            set_parameter(cell, config.sweep[k].name, coords.back());
        }
        cell["sweep"] = Json::array();
        f(config_from_json(cell), coords);
        std::size_t k = values.size();
        while (k > 0) {
            --k;
            if (++index[k] < values[k].size()) {
                break;
            }
            index[k] = 0;
            if (k == 0) {
                return;
            }
        }
        if (values.empty()) {
            return;
        }
    }
}

Table sweep_table(const RunConfig& config, const std::vector<std::string>& columns, const CellFn& fn) {
    Table t;
    for (const auto& a : config.sweep) {
        t.columns.push_back(a.name);
    }
    t.columns.insert(t.columns.end(), columns.begin(), columns.end());
    for_each_cell(config, [&](const RunConfig& cell, const std::vector<double>& coords) {
        std::vector<Cell> row(coords.begin(), coords.end());
        auto rest = fn(cell);
        row.insert(row.end(), rest.begin(), rest.end());
        t.add(std::move(row));
    });
    return t;
}

PerturbativeSolver make_solver(const RunConfig& c) { return PerturbativeSolver(make_limit_cycle(physical_scenario(c))); }

Cell optional_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

std::vector<Cell> coherence_cells(const Matrix3& rho) {
    return {rho(0, 1).real(), rho(0, 1).imag(), rho(1, 2).real(), rho(1, 2).imag(), rho(0, 2).real(),
            rho(0, 2).imag()};
}

const std::vector<std::string> kCoherenceColumns = {"rho_p1_0_re", "rho_p1_0_im", "rho_0_m1_re",
                                                     "rho_0_m1_im", "rho_p1_m1_re", "rho_p1_m1_im"};

std::vector<Cell> measure_cells(const SyncResult& r) {
    return {r.s_over_eta(), optional_cell(r.epsilon), false};
}

Table measure_grid(const RunConfig& config, const std::vector<std::string>& extra_columns,
                   const std::function<std::vector<Cell>(const RunConfig&, const SyncResult&)>& extra = {}) {
    std::vector<std::string> cols = {"S_over_eta", "epsilon_max", "masked"};
    cols.insert(cols.end(), extra_columns.begin(), extra_columns.end());
    return sweep_table(config, cols, [&](const RunConfig& cell) {
        const PerturbativeSolver solver = make_solver(cell);
        const SyncResult r = solver.sync(build_signal(cell, solver), cell.eta);
        auto row = measure_cells(r);
        if (extra) {
            auto more = extra(cell, r);
            row.insert(row.end(), more.begin(), more.end());
        }
        return row;
    });
}

Axis axis(const std::string& name, double min, double max, int points, AxisScale scale = AxisScale::Linear) {
    return Axis{name, min, max, points, scale};
}

std::string default_path(const RunConfig& c, const std::string& stem) {
    return stem + "." + c.output.format;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    if (suffix.empty()) {
        return path;
    }
    const std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

Table figure_response(const RunConfig& c) {
    // populations of the exact state against the perturbative measure, one row per epsilon
    const PerturbativeSolver solver = make_solver(c);
    const SignalSpec signal = build_signal(c, solver);
    const SyncResult r = solver.sync(signal, c.eta);
    const double eps_max = r.epsilon.value_or(INFINITY);
    const double slope = r.epsilon ? r.s / *r.epsilon : 0.0;
    Table t;
    t.columns = {"epsilon", "p_avg", "p_max", "S_over_eta", "epsilon_max", "masked"};
    for (const auto& a : c.sweep) {
        if (a.name != "epsilon") {
            throw Error(ErrorKind::InvalidConfig, "this figure sweeps only 'epsilon'");
        }
        for (double eps : a.values()) {
            const Matrix3 rho = solver.full_steady_state(signal, eps).entries;
            const bool masked = !within_tongue(eps, eps_max);
            t.add({eps, p_avg(rho, solver.rho0().entries), p_max(rho, solver.rho0().entries),
                   masked ? Cell() : Cell(eps * slope / c.eta), optional_cell(r.epsilon), masked});
        }
    }
    return t;
}

Table figure_blockade(const RunConfig& c) {
    Table t;
    t.columns = {"gamma_d", "scenario.delta", "S_over_eta", "S_closed_over_eta", "epsilon_max", "masked"};
    for (double gd : {1.0, 100.0, 10000.0}) {
        RunConfig curve = c;
        curve.scenario.gamma_d = gd;
        for_each_cell(curve, [&](const RunConfig& cell, const std::vector<double>& coords) {
            const ScenarioId s = physical_scenario(cell);
            const PerturbativeSolver solver = make_solver(cell);
            const SyncResult r = solver.sync(build_signal(cell, solver), cell.eta);
            t.add({gd, coords.at(0), r.s_over_eta(), blockade_s_closed(s.gamma_g, s.gamma_d, s.detuning, 1.0),
                   optional_cell(r.epsilon), false});
        });
    }
    return t;
}

Table figure_pmax(const RunConfig& c) {
    const ScenarioId s = physical_scenario(c);
    std::vector<double> eps;
    for (const auto& a : c.sweep) {
        if (a.name != "epsilon") {
            throw Error(ErrorKind::InvalidConfig, "fig8app sweeps only 'epsilon'");
        }
        eps = a.values();
    }
    Table t;
    t.columns = {"r", "epsilon", "p_max"};
    for (const auto& curve : pmax_failure_sweep({0.5, 2.5, 4.0, 9.0}, eps, s.gamma_g, s.gamma_d)) {
        for (std::size_t i = 0; i < eps.size(); ++i) {
            t.add({curve.r, eps[i], curve.p_max[i]});
        }
    }
    return t;
}

Table figure_optimum_series(const RunConfig& c) {
    Table t;
    t.columns = {"gamma_d_over_gamma_g", "S_over_eta", "zeta", "chi", "tau_ratio", "asymptote"};
    const double asymptote = std::sqrt(40.0 + 45.0 * kPi * kPi / 2.0) / (24.0 * kPi);
    OptimizerOptions opts;
    opts.grid = 24;
    opts.tau_max = 1.5;
    for (double ratio : logspace(10.0, 1e5, 9)) {
        ScenarioId s = physical_scenario(c);
        s.gamma_d = ratio * s.gamma_g;
        const OptimumReport o = optimize_signal(make_limit_cycle(s), SignalFamily::VdpGeneral, s.detuning, c.eta, opts);
        t.add({ratio, o.result.s_over_eta(), o.zeta, o.chi, o.tau_ratio, asymptote});
    }
    return t;
}

Json cell_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else {
                return v;
            }
        },
        cell);
}

std::string cell_text(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, double>) {
                return format_number(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if (v.find_first_of(",\"\n") != std::string::npos) {
                std::string quoted = "\"";
                for (char ch : v) {
                    quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                }
                return quoted + "\"";
            } else {
                return v;
            }
        },
        cell);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:.17g}", v);
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << cell_text(row[i]);
        }
        out << '\n';
    }
}

Json table_to_json(const Table& table, const RunConfig& config, const std::string& command) {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json r = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& cell = row[i];
            if (const double* d = std::get_if<double>(&cell); d && !std::isfinite(*d)) {
                r[table.columns[i]] = format_number(*d);
            } else {
                r[table.columns[i]] = cell_json(cell);
            }
        }
        rows.push_back(std::move(r));
    }
    return Json{{"command", command}, {"config", config_to_json(config)}, {"columns", table.columns}, {"rows", rows}};
}

void write_table(const Table& table, const RunConfig& config, const std::string& command) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!config.output.path.empty() && config.output.path != "-") {
        file.open(config.output.path);
        if (!file) {
            throw Error(ErrorKind::InvalidConfig, "cannot write '" + config.output.path + "'");
        }
        out = &file;
    }
    if (config.output.format == "json") {
        *out << table_to_json(table, config, command).dump(2) << '\n';
    } else {
        write_csv(*out, table);
    }
}

Table cmd_steady(const RunConfig& config) {
    return sweep_table(config, {"scenario", "p_plus1", "p_0", "p_minus1", "norm_rho0"}, [](const RunConfig& c) {
        const DensityMatrix rho0 = steady_state(build_liouvillian(make_limit_cycle(physical_scenario(c))));
        const auto d = rho0.entries.diagonal().real();
        return std::vector<Cell>{std::string(scenario_name(c.scenario.kind)), d(0), d(1), d(2), rho0.hs_norm()};
    });
}

Table cmd_sync(const RunConfig& config) {
    std::vector<std::string> cols = {"S", "S_over_eta", "epsilon", "phi_star", "A", "alpha1", "B", "alpha2"};
    cols.insert(cols.end(), kCoherenceColumns.begin(), kCoherenceColumns.end());
    cols.insert(cols.end(), {"zero_response", "note"});
    return sweep_table(config, cols, [](const RunConfig& c) {
        const PerturbativeSolver solver = make_solver(c);
        const SyncResult r = solver.sync(build_signal(c, solver), c.eta);
        std::vector<Cell> row = {r.s,           r.s_over_eta(), optional_cell(r.epsilon), r.phi_star,
                                 r.terms.a,     r.terms.alpha1, r.terms.b,                r.terms.alpha2};
        auto coh = coherence_cells(r.rho1.entries);
        row.insert(row.end(), coh.begin(), coh.end());
        std::string note;
        if (r.zero_response()) {
            note = "no first-order response";
        } else if (r.terms.a + r.terms.b <= 1e-12 * r.norm1) {
            note = "destructive interference";
        }
        row.emplace_back(r.zero_response());
        row.emplace_back(note);
        return row;
    });
}

Table cmd_perturb(const RunConfig& config) {
    Table t;
    t.columns = {"order", "norm", "trace", "p_plus1", "p_0", "p_minus1"};
    t.columns.insert(t.columns.end(), kCoherenceColumns.begin(), kCoherenceColumns.end());
    t.columns.push_back("series_residual");
    const PerturbativeSolver solver = make_solver(config);
    const SignalSpec signal = build_signal(config, solver);
    const auto orders = solver.orders(signal, config.order);
    std::optional<Matrix3> exact;
    if (config.epsilon) {
        exact = solver.full_steady_state(signal, *config.epsilon).entries;
    }
    Matrix3 partial = Matrix3::Zero();
    for (std::size_t k = 0; k < orders.size(); ++k) {
        const Matrix3& rho = orders[k].entries;
        std::vector<Cell> row = {static_cast<double>(k), rho.norm(), rho.trace().real(), rho(0, 0).real(),
                                 rho(1, 1).real(), rho(2, 2).real()};
        auto coh = coherence_cells(rho);
        row.insert(row.end(), coh.begin(), coh.end());
        if (exact) {
            partial += std::pow(*config.epsilon, static_cast<double>(k)) * rho;
            row.emplace_back((*exact - partial).norm());
        } else {
            row.emplace_back();
        }
        t.add(std::move(row));
    }
    return t;
}

Table cmd_tongue(const RunConfig& config) {
    if (config.sweep.size() != 2 || config.sweep[0].name != "scenario.delta" || config.sweep[1].name != "epsilon") {
        throw Error(ErrorKind::InvalidConfig, "tongue needs the sweep axes scenario.delta and epsilon, in that order");
    }
    const std::vector<double> strengths = config.sweep[1].values();
    Table t;
    t.columns = {"scenario.delta", "epsilon", "S_over_eta", "epsilon_max", "masked"};
    RunConfig rows = config;
    rows.sweep.resize(1);
    for_each_cell(rows, [&](const RunConfig& cell, const std::vector<double>& coords) {
        const ScenarioId s = physical_scenario(cell);
        const LimitCycleSpec lc = make_limit_cycle(s);
        const PerturbativeSolver solver(lc);
        const TongueGrid g = arnold_tongue(lc, build_signal(cell, solver), {s.detuning}, strengths, cell.eta);
        for (std::size_t j = 0; j < strengths.size(); ++j) {
            const auto v = g.at(0, j);
            t.add({coords[0], strengths[j], v ? Cell(*v / cell.eta) : Cell(), g.epsilon_max[0], g.masked(0, j)});
        }
    });
    return t;
}

Table cmd_optimize(const RunConfig& config) {
    return sweep_table(config, {"family", "zeta", "chi", "tau_ratio", "S", "S_over_eta", "epsilon", "evaluations"},
                       [](const RunConfig& c) {
                           const ScenarioId s = physical_scenario(c);
                           OptimizerOptions opts;
                           opts.grid = c.optimizer.grid;
                           opts.tau_max = c.optimizer.tau_max;
                           const OptimumReport o = optimize_signal(make_limit_cycle(s), parse_family(c.optimizer.family),
                                                                   s.detuning, c.eta, opts);
                           return std::vector<Cell>{c.optimizer.family,  o.zeta,
                                                    o.chi,               o.tau_ratio,
                                                    o.result.s,          o.result.s_over_eta(),
                                                    optional_cell(o.result.epsilon),
                                                    static_cast<double>(o.evaluations)};
                       });
}

Table cmd_bound(const RunConfig& config) {
    return sweep_table(config, {"norm_term", "coherence_term", "S", "S_over_eta", "smax_spin", "smax_oscillator"},
                       [](const RunConfig& c) {
                           const BoundTerms b = bound_terms(c.bound, c.eta);
                           return std::vector<Cell>{b.norm_term,  b.coherence_term,
                                                    b.s,          b.s / c.eta,
                                                    smax(c.eta),  smax(c.eta, PhaseSpace::Oscillator)};
                       });
}

std::vector<std::string> figure_ids() { return {"fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8app"}; }

RunConfig figure_config(const std::string& id) {
    RunConfig c;
    c.figure = id;
    c.eta = kDefaultEta;
    if (id == "fig2") {
        c.scenario.gamma_d = 100.0;
        c.sweep = {axis("scenario.delta", -20.0, 20.0, 161), axis("epsilon", 0.0, 2.0, 101)};
    } else if (id == "fig3a" || id == "fig3b") {
        c.scenario.gamma_d = id == "fig3a" ? 1.0 : 10.0;
        c.sweep = {axis("epsilon", 1e-3, 1e2, 101, AxisScale::Log)};
    } else if (id == "fig4") {
        c.scenario.kind = Scenario::Vdp;
        c.scenario.gamma_d = 1000.0;
        c.signal = {"vdp_semiclassical", Json{{"tau_ratio", 0.0}}};
        c.sweep = {axis("scenario.delta", -10.0, 10.0, 81), axis("signal.params.tau_ratio", 0.0, 400.0, 81)};
    } else if (id == "fig5") {
        c.scenario.kind = Scenario::Vdp;
        c.scenario.gamma_d = 100.0;
        c.signal = {"vdp", Json{{"c", 1.0}, {"zeta", 0.0}, {"chi", 0.0}, {"tau_ratio", 0.0}}};
        c.sweep = {axis("signal.params.zeta", 0.0, kPi / 2.0, 91), axis("signal.params.tau_ratio", 0.0, 1.5, 76)};
    } else if (id == "fig6") {
        c.signal = {"equatorial_angles", Json{{"zeta", 0.0}, {"chi", 0.0}}};
        c.sweep = {axis("signal.params.zeta", 0.0, kPi / 2.0, 91), axis("signal.params.chi", 0.0, kTwoPi, 121)};
    } else if (id == "fig7") {
        c.signal = {"blockade", Json::object()};
        c.sweep = {axis("scenario.delta", 1e-2, 1e4, 241, AxisScale::Log)};
    } else if (id == "fig8app") {
        c.scenario.kind = Scenario::Vdp;
        c.scenario.gamma_d = 100.0;
        c.signal = {"tones", Json{{"t01", 1.0}, {"tm10", 1.0 / std::sqrt(2.0)}}};
        c.sweep = {axis("epsilon", 1e-3, 1e5, 401, AxisScale::Log)};
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown figure id '" + id + "'");
    }
    return c;
}

std::vector<FigureOutput> cmd_figure(const RunConfig& config) {
    const std::string& id = config.figure;
    std::vector<FigureOutput> out;
    if (id == "fig2") {
        out.push_back({"", config, cmd_tongue(config)});
    } else if (id == "fig3a" || id == "fig3b") {
        out.push_back({"", config, figure_response(config)});
    } else if (id == "fig4") {
        out.push_back({"", config, measure_grid(config, {"tau_opt"}, [](const RunConfig& c, const SyncResult&) {
                           const ScenarioId s = physical_scenario(c);
                           return std::vector<Cell>{vdp_optimal_squeeze_ratio(s.gamma_g, s.gamma_d, s.detuning)};
                       })});
    } else if (id == "fig5") {
        out.push_back({"", config, measure_grid(config, {})});
        out.push_back({"_inset", config, figure_optimum_series(config)});
    } else if (id == "fig6") {
        out.push_back({"", config, measure_grid(config, {"S_closed_over_eta"}, [](const RunConfig& c, const SyncResult&) {
                           const ScenarioId s = physical_scenario(c);
                           return std::vector<Cell>{equatorial_s_closed(c.signal.params.value("zeta", 0.0),
                                                                        c.signal.params.value("chi", 0.0), s.gamma_g,
                                                                        s.gamma_d, s.detuning, 1.0)};
                       })});
    } else if (id == "fig7") {
        out.push_back({"", config, figure_blockade(config)});
    } else if (id == "fig8app") {
        out.push_back({"", config, figure_pmax(config)});
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown figure id '" + id + "'");
    }
    return out;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Spin-1 quantum synchronization toolkit"};
    std::string command;
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string figure;
    std::vector<std::string> overrides;
    app.add_option("command", command, "steady | sync | perturb | tongue | optimize | bound | figure | validate")
        ->required()
        ->check(CLI::IsMember({"steady", "sync", "perturb", "tongue", "optimize", "bound", "figure", "validate"}));
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "output file (standard output when omitted)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--set", overrides, "dotted key=value override, repeatable")->allow_extra_args(false);
    app.add_option("--id", figure, "figure id for the figure command");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (command == "validate") {
        const ValidationReport report = run_validation();
        print_report(std::cout, report);
        return report.passed() ? 0 : 1;
    }

    try {
        Json j;
        if (command == "figure") {
            if (figure.empty()) {
                figure = "fig2";
            }
            j = config_to_json(figure_config(figure));
        } else {
            j = config_to_json(RunConfig{});
        }
        if (!config_path.empty()) {
            Json file;
            std::ifstream in(config_path);
            try {
                file = Json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::InvalidConfig, std::string("config file: ") + e.what());
            }
            j.merge_patch(file);
        }
        for (const auto& o : overrides) {
            apply_override(j, o);
        }
        RunConfig config = config_from_json(j);
        if (!out_path.empty()) {
            config.output.path = out_path;
        }
        if (!format.empty()) {
            config.output.format = format;
        }
        if (command == "tongue" && config.sweep.empty()) {
            config.sweep = figure_config("fig2").sweep;
        }
        validate_config(config);

        if (command == "figure") {
            const bool to_stdout = config.output.path == "-";
            const std::string main_path = config.output.path.empty() ? default_path(config, config.figure) : config.output.path;
            for (auto& f : cmd_figure(config)) {
                f.config.output.path = to_stdout ? "-" : with_suffix(main_path, f.suffix);
                write_table(f.table, f.config, "figure");
                if (!to_stdout) {
                    std::cout << f.config.output.path << '\n';
                }
            }
            return 0;
        }
        Table t;
        if (command == "steady") {
            t = cmd_steady(config);
        } else if (command == "sync") {
            t = cmd_sync(config);
        } else if (command == "perturb") {
            t = cmd_perturb(config);
        } else if (command == "tongue") {
            t = cmd_tongue(config);
        } else if (command == "optimize") {
            t = cmd_optimize(config);
        } else {
            t = cmd_bound(config);
        }
        write_table(t, config, command);
    } catch (const Error& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace spinsync
