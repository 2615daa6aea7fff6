#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "bjj/control.hpp"
#include "bjj/esta.hpp"
#include "bjj/ground_state.hpp"
#include "bjj/io.hpp"
#include "bjj/metrics.hpp"
#include "bjj/propagator.hpp"
#include "bjj/robustness.hpp"

namespace bjj {

/// Run independent work items on a small worker pool; results land at
/// their item index so assembly order is deterministic.
inline void parallel_for(int count, const std::function<void(int)>& work) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(count));
    if (n_threads <= 1) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
        });
    for (auto& th : pool) th.join();
}

/// Which scheme drives a sweep cell. The two OAT entries share the zero
/// schedule but start from different states.
enum class ScenarioScheme { adiabatic, sta1, sta2, esta, oat_css, oat_groundstate };

inline std::string to_string(ScenarioScheme s) {
    switch (s) {
        case ScenarioScheme::adiabatic: return "adiabatic";
        case ScenarioScheme::sta1: return "sta1";
        case ScenarioScheme::sta2: return "sta2";
        case ScenarioScheme::esta: return "esta";
        case ScenarioScheme::oat_css: return "oat_css";
        case ScenarioScheme::oat_groundstate: return "oat_groundstate";
    }
    return "?";
}

inline ScenarioScheme scenario_scheme_from_string(const std::string& s) {
    if (s == "adiabatic") return ScenarioScheme::adiabatic;
    if (s == "sta1") return ScenarioScheme::sta1;
    if (s == "sta2") return ScenarioScheme::sta2;
    if (s == "esta") return ScenarioScheme::esta;
    if (s == "oat_css") return ScenarioScheme::oat_css;
    if (s == "oat_groundstate" || s == "oat") return ScenarioScheme::oat_groundstate;
    throw std::domain_error("unknown scheme: " + s);
}

enum class OutputKind {
    fidelity,
    xi_n,
    xi_s_db,
    xi_n_max,
    sensitivity,
    imperfection,
    schedule_trace
};

inline std::string to_string(OutputKind k) {
    switch (k) {
        case OutputKind::fidelity: return "fidelity";
        case OutputKind::xi_n: return "xi_N";
        case OutputKind::xi_s_db: return "xi_S_dB";
        case OutputKind::xi_n_max: return "xi_N_max";
        case OutputKind::sensitivity: return "sensitivity";
        case OutputKind::imperfection: return "imperfection";
        case OutputKind::schedule_trace: return "schedule_trace";
    }
    return "?";
}

/// One orchestrated run: a parameter point swept over protocol durations
/// and schemes, with a chosen set of emitted observables.
struct Scenario {
    std::string name;
    SystemParams params;            // t_f field is ignored; the grid below rules
    std::vector<ScenarioScheme> schemes;
    std::vector<double> tf_grid;    // seconds
    std::set<OutputKind> outputs;
    int sample_count = 101;
    EstaOptions esta_opts;
};

struct CellResult {
    ScenarioScheme scheme = ScenarioScheme::adiabatic;
    double t_f = 0.0;
    std::optional<std::string> error;
    std::vector<SqueezingRecord> series;      // at sample_count uniform times
    std::vector<double> xi_n_max_series;      // aligned with series
    std::vector<double> trace_times;          // schedule trace grid
    std::vector<double> trace_omega;
    std::optional<SensitivityReport> sensitivity;
};

struct ScenarioResult {
    Scenario scenario;
    std::vector<CellResult> cells;  // ordered: scheme-major, then t_f
};

namespace detail {

inline ControlSchedule build_schedule(ScenarioScheme scheme, const SystemParams& params,
                                      const EstaOptions& opts) {
    switch (scheme) {
        case ScenarioScheme::adiabatic: return adiabatic_schedule(params);
        case ScenarioScheme::sta1: return omega_from_b(sta1_profile(params, opts.poly_degree), params);
        case ScenarioScheme::sta2: return omega_from_b(sta2_profile(params, opts.poly_degree), params);
        case ScenarioScheme::esta: return esta_schedule(params, opts);
        case ScenarioScheme::oat_css:
        case ScenarioScheme::oat_groundstate: return oat_schedule(params);
    }
    throw std::domain_error("build_schedule: unknown scheme");
}

inline CellResult run_cell(const Scenario& sc, ScenarioScheme scheme, double t_f) {
    CellResult cell;
    cell.scheme = scheme;
    cell.t_f = t_f;
    SystemParams params = sc.params;
    params.t_f = t_f;
    try {
        const ControlSchedule schedule = build_schedule(scheme, params, sc.esta_opts);
        const DickeState initial = scheme == ScenarioScheme::oat_css
                                       ? css_state(params.particle_count)
                                       : ground_state(params, params.omega0);
        const DickeState target = ground_state(params, params.omega_f);

        if (sc.outputs.count(OutputKind::schedule_trace)) {
            for (int i = 0; i < sc.sample_count; ++i) {
                const double t = t_f * static_cast<double>(i) / (sc.sample_count - 1);
                cell.trace_times.push_back(t);
                cell.trace_omega.push_back(schedule.omega(t));
            }
        }

        const bool want_series = sc.outputs.count(OutputKind::fidelity) ||
                                 sc.outputs.count(OutputKind::xi_n) ||
                                 sc.outputs.count(OutputKind::xi_s_db) ||
                                 sc.outputs.count(OutputKind::xi_n_max);
        if (want_series) {
            std::vector<double> times(sc.sample_count);
            for (int i = 0; i < sc.sample_count; ++i)
                times[i] = t_f * static_cast<double>(i) / (sc.sample_count - 1);
            const auto states = propagate(initial, schedule, params, times);
            for (int i = 0; i < sc.sample_count; ++i) {
                cell.series.push_back(
                    make_squeezing_record(times[i], states[i], target, params.particle_count));
                cell.xi_n_max_series.push_back(
                    max_plane_squeezing(states[i], params.particle_count));
            }
        }

        if (sc.outputs.count(OutputKind::sensitivity) ||
            sc.outputs.count(OutputKind::imperfection)) {
            cell.sensitivity = sensitivity_report(schedule, params);
        }
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

}  // namespace detail

/// Evaluate every (scheme, t_f) cell of a scenario. Cells run on a worker
/// pool; per-cell failures are recorded and the run continues.
inline ScenarioResult run_scenario(const Scenario& scenario) {
    ScenarioResult result;
    result.scenario = scenario;
    const int n_cells =
        static_cast<int>(scenario.schemes.size() * scenario.tf_grid.size());
    result.cells.resize(n_cells);
    parallel_for(n_cells, [&](int idx) {
        const int si = idx / static_cast<int>(scenario.tf_grid.size());
        const int ti = idx % static_cast<int>(scenario.tf_grid.size());
        result.cells[idx] =
            detail::run_cell(scenario, scenario.schemes[si], scenario.tf_grid[ti]);
    });
    return result;
}

struct OatPoint {
    double t_f = 0.0;
    double xi_n_max = 0.0;
};

/// Squeezing attainable by free twisting (Omega = 0): evolve the chosen
/// initial state with the exact diagonal phases and report the minimal
/// normalized variance in the y-z plane at each duration.
inline std::vector<OatPoint> run_oat_comparison(const SystemParams& params,
                                                const std::vector<double>& tf_grid,
                                                bool start_from_css) {
    params.validate();
    const DickeState initial = start_from_css ? css_state(params.particle_count)
                                              : ground_state(params, params.omega0);
    std::vector<OatPoint> out(tf_grid.size());
    parallel_for(static_cast<int>(tf_grid.size()), [&](int i) {
        SystemParams p = params;
        p.t_f = std::max(tf_grid[i], params.t_f);  // keep t_f valid for tf = 0
        const ControlSchedule zero = oat_schedule(p);
        const DickeState st = propagate(initial, zero, p, {tf_grid[i]}).back();
        out[i] = OatPoint{tf_grid[i], max_plane_squeezing(st, p.particle_count)};
    });
    return out;
}

/// Reference scenarios matching the shipped presets. Grids are expressed
/// through chi*t_f so the presets are scale-free.
inline std::vector<Scenario> preset_scenarios(const std::string& name, double chi) {
    auto tf_from_u = [chi](std::vector<double> tau_values) {
        for (double& v : tau_values) v /= chi;
        return tau_values;
    };
    std::vector<Scenario> out;
    if (name == "fig2" || name == "fig3") {
        Scenario sc;
        const int n = name == "fig2" ? 50 : 400;
        const double tf_chi = name == "fig2" ? 0.16 : 0.004;
        sc.name = name;
        sc.params = SystemParams::from_dimensionless(n, 10.0, 0.1, tf_chi, chi);
        sc.schemes = {ScenarioScheme::adiabatic, ScenarioScheme::sta1, ScenarioScheme::sta2,
                      ScenarioScheme::esta};
        sc.tf_grid = {tf_chi / chi};
        sc.outputs = {OutputKind::schedule_trace, OutputKind::fidelity, OutputKind::xi_n,
                      OutputKind::xi_s_db};
        sc.sample_count = 401;
        out.push_back(std::move(sc));
        return out;
    }
    if (name == "fig4") {
        for (int n : {50, 200, 400}) {
            for (double l0 : {10.0, 5.0, 2.5}) {
                Scenario sc;
                sc.name = "fig4_N" + std::to_string(n) + "_L" + format_double(l0);
                sc.params = SystemParams::from_dimensionless(n, l0, 0.1, 1.0 / n, chi);
                sc.schemes = {ScenarioScheme::adiabatic, ScenarioScheme::sta1,
                              ScenarioScheme::sta2, ScenarioScheme::esta};
                std::vector<double> taus;
                for (double u : {0.5, 0.625, 0.75, 0.875, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0})
                    taus.push_back(u / n);
                sc.tf_grid = tf_from_u(taus);
                sc.outputs = {OutputKind::fidelity};
                sc.sample_count = 2;
                out.push_back(std::move(sc));
            }
        }
        return out;
    }
    if (name == "fig5") {
        for (double l0 : {2.5, 10.0}) {
            Scenario sc;
            sc.name = "fig5_L" + format_double(l0);
            sc.params = SystemParams::from_dimensionless(400, l0, 0.1, 0.01, chi);
            sc.schemes = {ScenarioScheme::sta1, ScenarioScheme::sta2, ScenarioScheme::esta};
            std::vector<double> taus;
            for (double u : {0.5, 1.0, 1.5, 2.0, 2.5}) taus.push_back(u / 400.0);
            sc.tf_grid = tf_from_u(taus);
            sc.outputs = {OutputKind::sensitivity, OutputKind::imperfection};
            sc.sample_count = 2;
            out.push_back(std::move(sc));
        }
        return out;
    }
    if (name == "fig6") {
        for (double l0 : {2.5, 10.0}) {
            Scenario sc;
            sc.name = "fig6_L" + format_double(l0);
            sc.params = SystemParams::from_dimensionless(400, l0, 0.1, 0.01, chi);
            sc.schemes = {ScenarioScheme::sta1, ScenarioScheme::sta2, ScenarioScheme::esta,
                          ScenarioScheme::oat_groundstate, ScenarioScheme::oat_css};
            std::vector<double> taus;
            for (int u = 1; u <= 15; ++u) taus.push_back(0.002 * u);
            sc.tf_grid = tf_from_u(taus);
            sc.outputs = {OutputKind::xi_n_max};
            sc.sample_count = 2;
            out.push_back(std::move(sc));
        }
        return out;
    }
    throw std::domain_error("unknown preset: " + name);
}

}  // namespace bjj
