// Command-line front end: schedule synthesis, exact time evolution,
// parameter sweeps, correction diagnostics and free-twisting comparisons,
// emitted as plot-ready CSV plus a JSON metadata sidecar.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bjj/bjj.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "bjj-squeeze 1.0.0";

struct CliConfig {
    std::string preset;
    std::string config_path;
    int n = 50;
    double lambda0 = 10.0;
    double omega_ratio = 0.1;
    std::string tf_chi = "0.16";  // comma-separated chi*t_f list
    double chi = bjj::SystemParams::default_chi();
    std::string schemes = "adiabatic,sta1,sta2,esta";
    int samples = 201;
    int poly_degree = 6;
    std::string plambda_rule = "minnorm4";
    std::string deltah_sign = "subtraction";
    int esta_modes = 2;
    std::string out_dir = ".";
    std::string initial = "both";  // oat subcommand: css | groundstate | both
};

bjj::EstaOptions esta_options(const CliConfig& cfg) {
    bjj::EstaOptions opts;
    opts.poly_degree = cfg.poly_degree;
    opts.n_modes = cfg.esta_modes;
    if (cfg.plambda_rule == "minnorm4")
        opts.plambda_rule = bjj::PLambdaRule::min_norm_degree4;
    else if (cfg.plambda_rule == "cubic")
        opts.plambda_rule = bjj::PLambdaRule::cubic;
    else
        throw CLI::ValidationError("--plambda-rule must be minnorm4 or cubic");
    if (cfg.deltah_sign == "subtraction")
        opts.deltah_sign = bjj::DeltaHSign::subtraction;
    else if (cfg.deltah_sign == "printed")
        opts.deltah_sign = bjj::DeltaHSign::printed;
    else
        throw CLI::ValidationError("--deltah-sign must be subtraction or printed");
    return opts;
}

std::vector<bjj::ScenarioScheme> parse_schemes(const std::string& text) {
    std::vector<bjj::ScenarioScheme> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(bjj::scenario_scheme_from_string(item));
    if (out.empty()) throw CLI::ValidationError("--scheme: empty scheme list");
    return out;
}

void apply_config_file(CliConfig& cfg) {
    if (cfg.config_path.empty()) return;
    auto kv = bjj::parse_config_file(cfg.config_path);
    auto get = [&](const char* key, auto& slot) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        std::istringstream is(it->second);
        is >> slot;
    };
    get("preset", cfg.preset);
    get("n", cfg.n);
    get("lambda0", cfg.lambda0);
    get("omega_ratio", cfg.omega_ratio);
    get("tf_chi", cfg.tf_chi);
    get("chi", cfg.chi);
    get("scheme", cfg.schemes);
    get("samples", cfg.samples);
    get("poly_degree", cfg.poly_degree);
    get("plambda_rule", cfg.plambda_rule);
    get("deltah_sign", cfg.deltah_sign);
    get("esta_modes", cfg.esta_modes);
    get("out", cfg.out_dir);
    get("initial", cfg.initial);
}

/// Scenarios to run: the preset set, or a single scenario from the flags.
std::vector<bjj::Scenario> make_scenarios(const CliConfig& cfg,
                                          const std::set<bjj::OutputKind>& outputs) {
    std::vector<bjj::Scenario> scs;
    if (!cfg.preset.empty()) {
        scs = bjj::preset_scenarios(cfg.preset, cfg.chi);
        for (auto& sc : scs) {
            sc.esta_opts = esta_options(cfg);
            sc.outputs = outputs;
            sc.sample_count = cfg.samples;
        }
        return scs;
    }
    bjj::Scenario sc;
    sc.name = "run";
    const auto taus = bjj::parse_double_list(cfg.tf_chi);
    sc.params = bjj::SystemParams::from_dimensionless(cfg.n, cfg.lambda0, cfg.omega_ratio,
                                                      taus.front(), cfg.chi);
    for (double tau : taus) sc.tf_grid.push_back(tau / cfg.chi);
    sc.schemes = parse_schemes(cfg.schemes);
    sc.outputs = outputs;
    sc.sample_count = cfg.samples;
    sc.esta_opts = esta_options(cfg);
    scs.push_back(std::move(sc));
    return scs;
}

std::vector<std::string> param_cells(const bjj::Scenario& sc, const bjj::CellResult& cell) {
    using bjj::format_double;
    return {std::to_string(sc.params.particle_count), format_double(sc.params.chi),
            format_double(sc.params.lambda0()), format_double(sc.params.omega_ratio()),
            format_double(cell.t_f), to_string(cell.scheme)};
}

const std::vector<std::string> kParamHeader = {"N", "chi", "lambda0", "omega_ratio",
                                               "tf", "scheme"};

json metadata(const CliConfig& cfg, const std::string& subcommand) {
    json meta;
    meta["tool"] = kVersion;
    meta["subcommand"] = subcommand;
    meta["preset"] = cfg.preset;
    meta["chi"] = cfg.chi;
    meta["samples"] = cfg.samples;
    meta["decisions"] = {{"poly_degree", cfg.poly_degree},
                         {"plambda_rule", cfg.plambda_rule},
                         {"deltah_sign", cfg.deltah_sign},
                         {"esta_modes", cfg.esta_modes},
                         {"propagator", "crank-nicolson midpoint, refined to 1e-9"},
                         {"fd_protocol", "central difference, start 1e-3, halve to 1%/1e-4"}};
    return meta;
}

void save_meta(const json& meta, const fs::path& dir, const std::string& stem) {
    std::ofstream f(dir / (stem + "_meta.json"));
    f << meta.dump(2) << "\n";
}

std::vector<std::string> with_params(std::vector<std::string> head,
                                     const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

int run_emitting(const CliConfig& cfg, const std::string& subcommand,
                 const std::set<bjj::OutputKind>& outputs) {
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    for (const auto& sc : make_scenarios(cfg, outputs)) {
        auto result = bjj::run_scenario(sc);
        std::map<bjj::OutputKind, bjj::CsvWriter> writers;
        auto value_writer = [&](bjj::OutputKind kind) {
            return bjj::CsvWriter(with_params(kParamHeader, {"t", to_string(kind)}));
        };
        for (auto kind : sc.outputs) {
            switch (kind) {
                case bjj::OutputKind::schedule_trace:
                    writers.emplace(kind,
                                    bjj::CsvWriter(with_params(kParamHeader, {"t", "omega"})));
                    break;
                case bjj::OutputKind::sensitivity:
                    writers.emplace(kind, bjj::CsvWriter(with_params(
                                              kParamHeader, {"fidelity", "s_m", "s_t",
                                                             "fd_converged"})));
                    break;
                case bjj::OutputKind::imperfection:
                    writers.emplace(kind, bjj::CsvWriter(with_params(
                                              kParamHeader,
                                              {"fidelity", "s_m", "s_t", "eta"})));
                    break;
                default:
                    writers.emplace(kind, value_writer(kind));
            }
        }
        bjj::CsvWriter errors(with_params(kParamHeader, {"error"}));
        bool any_error = false;

        for (const auto& cell : result.cells) {
            const auto base = param_cells(sc, cell);
            if (cell.error) {
                any_error = true;
                errors.add_row(with_params(base, {"\"" + *cell.error + "\""}));
                continue;
            }
            for (auto kind : sc.outputs) {
                auto& w = writers.at(kind);
                using bjj::format_double;
                switch (kind) {
                    case bjj::OutputKind::schedule_trace:
                        for (size_t i = 0; i < cell.trace_times.size(); ++i)
                            w.add_row(with_params(base, {format_double(cell.trace_times[i]),
                                                         format_double(cell.trace_omega[i])}));
                        break;
                    case bjj::OutputKind::fidelity:
                        for (const auto& r : cell.series)
                            w.add_row(with_params(
                                base, {format_double(r.t), format_double(r.fidelity)}));
                        break;
                    case bjj::OutputKind::xi_n:
                        for (const auto& r : cell.series)
                            w.add_row(with_params(
                                base, {format_double(r.t), format_double(r.xi_n_sq)}));
                        break;
                    case bjj::OutputKind::xi_s_db:
                        for (const auto& r : cell.series)
                            w.add_row(with_params(
                                base, {format_double(r.t), format_double(r.xi_s_sq_db)}));
                        break;
                    case bjj::OutputKind::xi_n_max:
                        for (size_t i = 0; i < cell.xi_n_max_series.size(); ++i)
                            w.add_row(with_params(
                                base, {format_double(cell.series[i].t),
                                       format_double(cell.xi_n_max_series[i])}));
                        break;
                    case bjj::OutputKind::sensitivity:
                        w.add_row(with_params(
                            base, {format_double(cell.sensitivity->fidelity),
                                   format_double(cell.sensitivity->s_m),
                                   format_double(cell.sensitivity->s_t),
                                   cell.sensitivity->converged ? "1" : "0"}));
                        break;
                    case bjj::OutputKind::imperfection:
                        w.add_row(with_params(base,
                                              {format_double(cell.sensitivity->fidelity),
                                               format_double(cell.sensitivity->s_m),
                                               format_double(cell.sensitivity->s_t),
                                               format_double(cell.sensitivity->eta)}));
                        break;
                }
            }
        }
        for (auto& [kind, w] : writers) {
            const std::string name = sc.name + "_" + to_string(kind) + ".csv";
            w.save((dir / name).string());
            std::cout << "wrote " << (dir / name).string() << "\n";
        }
        if (any_error) {
            errors.save((dir / (sc.name + "_errors.csv")).string());
            std::cout << "wrote " << (dir / (sc.name + "_errors.csv")).string()
                      << " (some cells failed)\n";
        }
        save_meta(metadata(cfg, subcommand), dir, sc.name);
    }
    return 0;
}

int run_esta_diag(const CliConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const auto taus = bjj::parse_double_list(cfg.tf_chi);
    auto params = bjj::SystemParams::from_dimensionless(cfg.n, cfg.lambda0, cfg.omega_ratio,
                                                        taus.front(), cfg.chi);
    auto corr = bjj::esta_correction(params, esta_options(cfg));
    json rep;
    rep["params"] = {{"N", cfg.n},
                     {"lambda0", cfg.lambda0},
                     {"omega_ratio", cfg.omega_ratio},
                     {"tf_chi", taus.front()},
                     {"chi", cfg.chi}};
    rep["lambda"] = {corr.lambda[0], corr.lambda[1]};
    rep["v"] = {corr.v[0], corr.v[1]};
    rep["hessian"] = {{corr.hessian[0][0], corr.hessian[0][1]},
                      {corr.hessian[1][0], corr.hessian[1][1]}};
    for (size_t n = 0; n < corr.g.size(); ++n) {
        rep["G"].push_back({corr.g[n].real(), corr.g[n].imag()});
        rep["K"].push_back({{corr.k[n][0].real(), corr.k[n][0].imag()},
                            {corr.k[n][1].real(), corr.k[n][1].imag()}});
    }
    rep["degenerate"] = corr.degenerate;
    rep["time_nodes_used"] = corr.time_nodes_used;
    rep["correction_poly_s"] = corr.correction_poly_s.coefficients();
    rep["meta"] = metadata(cfg, "esta-diag");
    const fs::path path = fs::path(cfg.out_dir) / "esta_diag.json";
    std::ofstream f(path);
    f << rep.dump(2) << "\n";
    std::cout << "wrote " << path.string() << "\n";
    std::cout << "lambda = (" << bjj::format_double(corr.lambda[0]) << ", "
              << bjj::format_double(corr.lambda[1]) << ") rad/s\n";
    return 0;
}

int run_oat(const CliConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const auto taus = bjj::parse_double_list(cfg.tf_chi);
    auto params = bjj::SystemParams::from_dimensionless(cfg.n, cfg.lambda0, cfg.omega_ratio,
                                                        taus.front(), cfg.chi);
    std::vector<double> grid;
    for (double tau : taus) grid.push_back(tau / cfg.chi);
    bjj::CsvWriter w({"N", "chi", "lambda0", "omega_ratio", "tf", "initial", "xi_N_max"});
    std::vector<std::string> kinds;
    if (cfg.initial == "both") kinds = {"css", "groundstate"};
    else kinds = {cfg.initial};
    for (const auto& kind : kinds) {
        const bool from_css = kind == "css";
        if (!from_css && kind != "groundstate")
            throw CLI::ValidationError("--initial must be css, groundstate or both");
        auto pts = bjj::run_oat_comparison(params, grid, from_css);
        for (const auto& pt : pts)
            w.add_row({std::to_string(cfg.n), bjj::format_double(cfg.chi),
                       bjj::format_double(cfg.lambda0), bjj::format_double(cfg.omega_ratio),
                       bjj::format_double(pt.t_f), kind, bjj::format_double(pt.xi_n_max)});
    }
    const fs::path path = fs::path(cfg.out_dir) / "oat_xi_N_max.csv";
    w.save(path.string());
    std::cout << "wrote " << path.string() << "\n";
    save_meta(metadata(cfg, "oat"), cfg.out_dir, "oat");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Control synthesis and exact spin-squeezing simulation for driven "
                 "two-mode bosonic Josephson junctions"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CliConfig cfg;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", cfg.config_path, "flat key=value configuration file");
        cmd->add_option("--preset", cfg.preset,
                        "reference scenario set: fig2, fig3, fig4, fig5, fig6");
        cmd->add_option("--n", cfg.n, "particle number (even)");
        cmd->add_option("--lambda0", cfg.lambda0, "initial N chi / Omega_0");
        cmd->add_option("--omega-ratio", cfg.omega_ratio, "Omega_f / Omega_0");
        cmd->add_option("--tf-chi", cfg.tf_chi, "chi*t_f values, comma separated");
        cmd->add_option("--chi", cfg.chi, "nonlinear coupling chi in rad/s");
        cmd->add_option("--scheme", cfg.schemes,
                        "schemes: adiabatic,sta1,sta2,esta,oat_css,oat_groundstate");
        cmd->add_option("--samples", cfg.samples, "sample times per trajectory");
        cmd->add_option("--poly-degree", cfg.poly_degree,
                        "auxiliary polynomial degree (6 min-norm, 5 unique)");
        cmd->add_option("--plambda-rule", cfg.plambda_rule,
                        "correction polynomial rule: minnorm4 or cubic");
        cmd->add_option("--deltah-sign", cfg.deltah_sign,
                        "Hamiltonian-difference convention: subtraction or printed");
        cmd->add_option("--esta-modes", cfg.esta_modes, "invariant modes in the correction");
        cmd->add_option("--out", cfg.out_dir, "output directory");
        return cmd;
    };

    auto* synthesize =
        add_common(app.add_subcommand("synthesize", "emit schedule traces Omega(t)"));
    auto* evolve = add_common(
        app.add_subcommand("evolve", "time series of squeezing metrics and fidelity"));
    auto* sweep = add_common(
        app.add_subcommand("sweep", "fidelity and robustness versus protocol duration"));
    auto* diag = add_common(
        app.add_subcommand("esta-diag", "dump the correction diagnostics G, K, v, H, lambda"));
    auto* oat = add_common(app.add_subcommand("oat", "free-twisting squeezing comparison"));
    oat->add_option("--initial", cfg.initial, "initial state: css, groundstate or both");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_config_file(cfg);
        // flags override file values: reparse the command line on top
        app.clear();
        (void)app.parse(argc, argv);

        if (synthesize->parsed())
            return run_emitting(cfg, "synthesize", {bjj::OutputKind::schedule_trace});
        if (evolve->parsed())
            return run_emitting(cfg, "evolve",
                                {bjj::OutputKind::fidelity, bjj::OutputKind::xi_n,
                                 bjj::OutputKind::xi_s_db, bjj::OutputKind::xi_n_max});
        if (sweep->parsed())
            return run_emitting(cfg, "sweep",
                                {bjj::OutputKind::fidelity, bjj::OutputKind::sensitivity,
                                 bjj::OutputKind::imperfection});
        if (diag->parsed()) return run_esta_diag(cfg);
        if (oat->parsed()) return run_oat(cfg);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
