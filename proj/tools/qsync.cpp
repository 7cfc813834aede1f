#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qsync/config.hpp"
#include "qsync/errors.hpp"
#include "qsync/heom.hpp"
#include "qsync/io.hpp"
#include "qsync/measures.hpp"
#include "qsync/operators.hpp"
#include "qsync/svg.hpp"
#include "qsync/sweep.hpp"

namespace {

using namespace qsync;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnconverged = 2;

std::string timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    localtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d_%H%M%S", &tm);
    return buf;
}

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    bool dump = false;
    std::string svg_out;

    // Direct overrides; only applied when the flag was passed.
    CLI::Option* o_delta = nullptr;
    CLI::Option* o_lambda = nullptr;
    CLI::Option* o_gamma = nullptr;
    CLI::Option* o_beta = nullptr;
    CLI::Option* o_h = nullptr;
    CLI::Option* o_channels = nullptr;
    CLI::Option* o_m_cut = nullptr;
    CLI::Option* o_tier_cap = nullptr;
    CLI::Option* o_dt = nullptr;
    CLI::Option* o_t_final = nullptr;
    CLI::Option* o_sample_every = nullptr;
    CLI::Option* o_tolerance = nullptr;
    CLI::Option* o_window = nullptr;
    CLI::Option* o_max_time = nullptr;
    CLI::Option* o_preset = nullptr;
    CLI::Option* o_matrix = nullptr;
    CLI::Option* o_phi_grid = nullptr;
    CLI::Option* o_dir = nullptr;
    CLI::Option* o_plot = nullptr;

    double delta = 0, lambda = 0, gamma = 0, beta = 0, h = 0;
    int channels = 0, m_cut = 0, tier_cap = 0, sample_every = 0, phi_grid = 0;
    double dt = 0, t_final = 0, tolerance = 0, window = 0, max_time = 0;
    std::string preset, matrix, dir;
    bool plot = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    // no -h short flag: it would shadow the physical coupling-mix option --h
    cmd->set_help_flag("--help", "Print this help message and exit");
    cmd->add_option("--config", o.config_path, "Config file (TOML-style)");
    cmd->add_option("--set", o.sets,
                    "Override a config key, e.g. --set physical.lambda=0.02");
    cmd->add_flag("--dump-config", o.dump,
                  "Print the effective config and exit");
    cmd->add_option("--out", o.svg_out, "SVG output path (when plotting)");

    o.o_delta = cmd->add_option("--delta", o.delta, "Detuning omega2 - omega1");
    o.o_lambda = cmd->add_option("--lambda", o.lambda, "Bath coupling strength");
    o.o_gamma = cmd->add_option("--gamma", o.gamma, "Bath spectral width");
    o.o_beta = cmd->add_option("--beta", o.beta, "Inverse temperature");
    o.o_h = cmd->add_option("--h", o.h, "Coupling anisotropy in [-1, 1]");
    o.o_channels = cmd->add_option("--channel-count", o.channels,
                                   "Bath coupling channels (1 or 2)");
    o.o_m_cut = cmd->add_option("--m-cut", o.m_cut, "Matsubara cutoff M");
    o.o_tier_cap = cmd->add_option("--tier-cap", o.tier_cap, "Hierarchy tier cap");
    o.o_dt = cmd->add_option("--dt", o.dt, "Integrator step");
    o.o_t_final = cmd->add_option("--t-final", o.t_final, "Evolution horizon");
    o.o_sample_every = cmd->add_option("--sample-every", o.sample_every,
                                       "Steps between trajectory samples");
    o.o_tolerance = cmd->add_option("--steady-tolerance", o.tolerance,
                                    "Steady-state drift tolerance");
    o.o_window = cmd->add_option("--steady-window", o.window,
                                 "Steady-state trailing window");
    o.o_max_time = cmd->add_option("--max-time", o.max_time,
                                   "Steady-state time budget");
    o.o_preset = cmd->add_option("--preset", o.preset, "Initial-state preset");
    o.o_matrix = cmd->add_option("--matrix-file", o.matrix,
                                 "Initial-state matrix file (preset=custom)");
    o.o_phi_grid = cmd->add_option("--phi-grid", o.phi_grid,
                                   "Phase grid size for measures");
    o.o_dir = cmd->add_option("--out-dir", o.dir, "Output directory");
    o.o_plot = cmd->add_flag("--plot", o.plot, "Write SVG plots");
}

RunConfig build_config(const CommonOpts& o) {
    RunConfig c;
    if (!o.config_path.empty()) c = parse_config_file(o.config_path);
    for (const std::string& kv : o.sets) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects section.key=value, got '" + kv + "'");
        apply_override(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (*o.o_delta) c.delta = o.delta;
    if (*o.o_lambda) c.lambda = o.lambda;
    if (*o.o_gamma) c.gamma = o.gamma;
    if (*o.o_beta) c.beta = o.beta;
    if (*o.o_h) c.h = o.h;
    if (*o.o_channels) c.channel_count = o.channels;
    if (*o.o_m_cut) c.m_cut = o.m_cut;
    if (*o.o_tier_cap) c.tier_cap = o.tier_cap;
    if (*o.o_dt) c.dt = o.dt;
    if (*o.o_t_final) c.t_final = o.t_final;
    if (*o.o_sample_every) c.sample_every = o.sample_every;
    if (*o.o_tolerance) c.steady_tolerance = o.tolerance;
    if (*o.o_window) c.steady_window = o.window;
    if (*o.o_max_time) c.max_time = o.max_time;
    if (*o.o_preset) c.preset = o.preset;
    if (*o.o_matrix) c.matrix_file = o.matrix;
    if (*o.o_phi_grid) c.phi_grid = o.phi_grid;
    if (*o.o_dir) c.directory = o.dir;
    if (*o.o_plot) c.plot = true;
    return c;
}

Mat9 resolve_initial(const RunConfig& c, const SystemModel& model,
                     const BathSpec& bath) {
    if (c.preset == "custom") {
        const Mat9 m = read_matrix_file(c.matrix_file);
        validate_initial(m);
        return m;
    }
    return make_initial(parse_preset(c.preset), model, bath);
}

SteadyOptions steady_options(const RunConfig& c) {
    SteadyOptions opt;
    opt.dt = c.dt;
    opt.tolerance = c.steady_tolerance;
    opt.window = c.steady_window;
    opt.max_time = c.max_time;
    return opt;
}

std::string svg_path(const RunConfig& c, const CommonOpts& o,
                     const std::string& command, const std::string& suffix = "") {
    if (!o.svg_out.empty()) {
        if (suffix.empty()) return o.svg_out;
        const std::size_t dot = o.svg_out.rfind(".svg");
        if (dot != std::string::npos)
            return o.svg_out.substr(0, dot) + "_" + suffix + ".svg";
        return o.svg_out + "_" + suffix + ".svg";
    }
    const std::string tail = suffix.empty() ? "" : "_" + suffix;
    return c.directory + "/" + command + "_" + timestamp() + tail + ".svg";
}

// Measures that must not abort a run: mutual information can hit the entropy
// validation floor on coarsely truncated states.
double guarded_mutual_information(const Mat9& rho, std::string& warning) {
    try {
        return mutual_information(rho);
    } catch (const std::exception& ex) {
        warning = ex.what();
        return std::numeric_limits<double>::quiet_NaN();
    }
}

int cmd_evolve(const RunConfig& c, const CommonOpts& o) {
    const SystemModel model = build_model(c.omega1, c.delta, c.h);
    const BathSpec bath = make_bath(c.lambda, c.gamma, c.beta, c.m_cut);
    const HierarchySpace space =
        enumerate_indices(c.channel_count * (c.m_cut + 1), c.tier_cap);
    const Mat9 initial = resolve_initial(c, model, bath);

    std::cerr << "evolve: " << space.size() << " ADOs, t_final = " << c.t_final
              << ", dt = " << c.dt << "\n";
    const std::vector<TrajectorySample> samples =
        evolve(initial, model, bath, space, c.dt, c.t_final, c.sample_every);

    std::vector<MeasureRow> rows;
    std::vector<double> sr_zero;
    rows.reserve(samples.size());
    bool warned = false;
    for (const TrajectorySample& s : samples) {
        MeasureRow r;
        r.t = s.time;
        const MaxSync ms = max_sync(s.rho, c.phi_grid);
        r.s_r_max = ms.s_r_max;
        r.phi_star = ms.phi_star;
        const NegativityResult neg = negativity_measures(s.rho);
        r.negativity = neg.negativity;
        r.log_negativity = neg.log_negativity;
        std::string warning;
        r.mutual_information = guarded_mutual_information(s.rho, warning);
        if (!warning.empty() && !warned) {
            std::cerr << "warning: " << warning << " (t = " << s.time << ")\n";
            warned = true;
        }
        rows.push_back(r);
        sr_zero.push_back(sync_measure_closed(s.rho, 0.0));
    }

    const std::string traj = c.directory + "/evolve_trajectory.csv";
    const std::string meas = c.directory + "/evolve_measures.csv";
    write_trajectory_csv(traj, samples);
    write_measures_csv(meas, rows);
    std::cout << "wrote " << traj << "\n" << "wrote " << meas << "\n";

    if (c.plot) {
        std::vector<LineSeries> series(3);
        series[0].label = "log-negativity E";
        series[1].label = "mutual information I";
        series[2].label = "S_r(0)";
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double t = samples[i].time;
            series[0].x.push_back(t);
            series[0].y.push_back(rows[i].log_negativity);
            series[1].x.push_back(t);
            series[1].y.push_back(rows[i].mutual_information);
            series[2].x.push_back(t);
            series[2].y.push_back(sr_zero[i]);
        }
        const std::string path = svg_path(c, o, "evolve");
        write_line_plot_svg(path, "Correlations and synchronization", "omega1 t",
                            "value", series);
        std::cout << "wrote " << path << "\n";
    }
    return kExitOk;
}

int cmd_steady(const RunConfig& c, const CommonOpts& o) {
    const SystemModel model = build_model(c.omega1, c.delta, c.h);
    const BathSpec bath = make_bath(c.lambda, c.gamma, c.beta, c.m_cut);
    const HierarchySpace space =
        enumerate_indices(c.channel_count * (c.m_cut + 1), c.tier_cap);
    const Mat9 initial = resolve_initial(c, model, bath);

    std::cerr << "steady: " << space.size() << " ADOs, window = "
              << c.steady_window << ", tolerance = " << c.steady_tolerance
              << ", max_time = " << c.max_time << "\n";
    const SteadyResult res =
        steady_state(initial, model, bath, space, steady_options(c));

    const SyncCoherences coh = sync_coherences(res.rho);
    std::vector<double> phi(static_cast<std::size_t>(c.phi_grid));
    std::vector<double> sr(static_cast<std::size_t>(c.phi_grid));
    for (int i = 0; i < c.phi_grid; ++i) {
        phi[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / c.phi_grid;
        sr[static_cast<std::size_t>(i)] =
            sync_from_coherences(coh, phi[static_cast<std::size_t>(i)]);
    }

    MeasureRow m;
    m.t = res.t_reached;
    const MaxSync ms = max_sync(res.rho, c.phi_grid);
    m.s_r_max = ms.s_r_max;
    m.phi_star = ms.phi_star;
    const NegativityResult neg = negativity_measures(res.rho);
    m.negativity = neg.negativity;
    m.log_negativity = neg.log_negativity;
    std::string warning;
    m.mutual_information = guarded_mutual_information(res.rho, warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";

    const std::string curve = c.directory + "/steady_sr_curve.csv";
    const std::string summary = c.directory + "/steady_summary.csv";
    const std::string matrix = c.directory + "/steady_rho.txt";
    write_sr_curve_csv(curve, phi, sr);
    write_steady_summary_csv(summary, res.t_reached, res.converged, m);
    write_matrix_file(matrix, res.rho);
    std::cout << "wrote " << curve << "\n"
              << "wrote " << summary << "\n"
              << "wrote " << matrix << "\n";
    std::cout << "converged = " << (res.converged ? "true" : "false")
              << ", t_reached = " << format_double(res.t_reached)
              << ", s_r_max = " << format_double(m.s_r_max) << "\n";

    if (c.plot) {
        LineSeries s;
        s.label = "S_r(phi)";
        s.x = phi;
        s.y = sr;
        const std::string path = svg_path(c, o, "steady");
        write_line_plot_svg(path, "Steady-state synchronization profile", "phi",
                            "S_r", {s});
        std::cout << "wrote " << path << "\n";
    }
    return res.converged ? kExitOk : kExitUnconverged;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

SweepSettings sweep_settings(const RunConfig& c) {
    SweepSettings s;
    s.omega1 = c.omega1;
    s.gamma = c.gamma;
    s.beta = c.beta;
    s.h = c.h;
    s.channel_count = c.channel_count;
    s.m_cut = c.m_cut;
    s.tier_cap = c.tier_cap;
    if (c.preset == "custom")
        s.custom_initial = read_matrix_file(c.matrix_file);
    else
        s.preset = parse_preset(c.preset);
    s.steady = steady_options(c);
    s.phi_samples = c.phi_grid;
    s.warm_start = c.warm_start;
    return s;
}

int sweep_exit_code(const std::vector<CellRecord>& cells) {
    bool any_error = false, any_unconverged = false;
    for (const CellRecord& cell : cells) {
        if (!cell.error.empty()) {
            std::cerr << "cell (delta=" << cell.delta << ", lambda=" << cell.lambda
                      << ", beta=" << cell.beta << "): " << cell.error << "\n";
            if (cell.error.rfind("mutual_information:", 0) != 0) any_error = true;
        }
        if (!cell.converged) any_unconverged = true;
    }
    if (any_error) return kExitError;
    if (any_unconverged) return kExitUnconverged;
    return kExitOk;
}

int cmd_sweep(const RunConfig& c, const CommonOpts& o) {
    const SweepSettings settings = sweep_settings(c);

    if (!c.beta_values.empty()) {
        const std::vector<double> deltas =
            linspace(c.delta_min, c.delta_max, c.delta_count);
        std::cerr << "temperature scan: " << deltas.size() << " x "
                  << c.beta_values.size() << " cells at lambda = " << c.lambda
                  << "\n";
        const std::vector<CellRecord> cells =
            temperature_scan(deltas, c.beta_values, c.lambda, settings);
        const std::string path = c.directory + "/sweep_temperature.csv";
        write_temperature_csv(path, cells);
        std::cout << "wrote " << path << "\n";
        return sweep_exit_code(cells);
    }

    SweepGrid grid;
    grid.delta_values = linspace(c.delta_min, c.delta_max, c.delta_count);
    grid.lambda_values = linspace(c.lambda_min, c.lambda_max, c.lambda_count);
    grid.settings = settings;
    std::cerr << "sweep: " << grid.delta_values.size() << " x "
              << grid.lambda_values.size() << " cells\n";
    grid = arnold_tongue(std::move(grid));

    const std::string path = c.directory + "/sweep_arnold.csv";
    write_arnold_csv(path, grid);
    std::cout << "wrote " << path << "\n";

    try {
        const double width = tongue_width(
            fixed_lambda_row(grid, grid.lambda_values.size() - 1),
            c.tongue_threshold);
        std::cout << "tongue width at lambda = "
                  << format_double(grid.lambda_values.back()) << ": "
                  << format_double(width) << "\n";
    } catch (const std::exception& ex) {
        std::cerr << "tongue width unavailable: " << ex.what() << "\n";
    }

    if (c.plot) {
        // Heatmaps use lambda on x, delta on y (values row-major over delta).
        std::vector<double> sr(grid.results.size()), mi(grid.results.size());
        for (std::size_t i = 0; i < grid.results.size(); ++i) {
            sr[i] = grid.results[i].s_r_max;
            mi[i] = grid.results[i].mutual_information;
        }
        const std::string p1 = svg_path(c, o, "sweep", "sr");
        const std::string p2 = svg_path(c, o, "sweep", "mi");
        write_heatmap_svg(p1, "Arnold tongue: max S_r", "lambda", "delta",
                          grid.lambda_values, grid.delta_values, sr, "max S_r");
        write_heatmap_svg(p2, "Arnold tongue: mutual information", "lambda",
                          "delta", grid.lambda_values, grid.delta_values, mi, "I");
        std::cout << "wrote " << p1 << "\n" << "wrote " << p2 << "\n";
    }
    return sweep_exit_code(grid.results);
}

std::vector<std::pair<int, int>> parse_truncations(const std::string& spec) {
    std::vector<std::pair<int, int>> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("--truncations expects m:tier pairs, got '" + item +
                              "'");
        try {
            out.emplace_back(std::stoi(item.substr(0, colon)),
                             std::stoi(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ConfigError("--truncations: bad pair '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("--truncations: no pairs given");
    return out;
}

int cmd_check(const RunConfig& c, const CommonOpts& o, const std::string& spec,
              double rel_tol) {
    const SystemModel model = build_model(c.omega1, c.delta, c.h);
    const std::vector<std::pair<int, int>> pairs = parse_truncations(spec);

    // The initial state must be buildable for every bath in the ladder; the
    // presets only depend on beta through the thermal weights.
    const BathSpec bath0 = make_bath(c.lambda, c.gamma, c.beta, pairs.front().first);
    const Mat9 initial = resolve_initial(c, model, bath0);

    std::cerr << "check: " << pairs.size() << " truncation pairs\n";
    const std::vector<ConvergenceRow> rows =
        convergence_study(model, c.lambda, c.gamma, c.beta, pairs, initial,
                          steady_options(c), c.channel_count);

    const std::string path = c.directory + "/check_convergence.csv";
    write_convergence_csv(path, rows);
    std::cout << "wrote " << path << "\n";

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double scale = std::max(std::abs(rows[i].s_r_max), 1e-12);
        if (rows[i].diff_prev < rel_tol * scale + 1e-12) {
            std::cout << "converged at (m_cut=" << rows[i].m_cut
                      << ", tier_cap=" << rows[i].tier_cap
                      << "): successive difference "
                      << format_double(rows[i].diff_prev) << "\n";
            (void)o;
            return kExitOk;
        }
    }
    std::cout << "no truncation pair met the tolerance " << rel_tol << "\n";
    return kExitUnconverged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qutrit synchronization simulator (hierarchical bath dynamics)"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    CLI::App* evolve_cmd =
        app.add_subcommand("evolve", "Time evolution: trajectory + measures CSV");
    CLI::App* steady_cmd =
        app.add_subcommand("steady", "Relax to the steady state, report S_r(phi)");
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Arnold-tongue / temperature parameter grids");
    CLI::App* check_cmd =
        app.add_subcommand("check", "Truncation convergence study");

    CommonOpts eo, so, wo, co;
    add_common(evolve_cmd, eo);
    add_common(steady_cmd, so);
    add_common(sweep_cmd, wo);
    add_common(check_cmd, co);
    wo.o_plot->description("Write SVG heatmaps");
    std::string truncations = "2:4,2:6,3:6";
    double check_tol = 0.01;
    check_cmd->add_option("--truncations", truncations,
                          "Comma-separated m:tier ladder");
    check_cmd->add_option("--check-tolerance", check_tol,
                          "Relative successive-difference tolerance");
    bool warm = false;
    CLI::Option* warm_opt = sweep_cmd->add_flag("--warm-start", warm,
                                                "Seed cells with the previous "
                                                "steady state (sequential)");

    CLI11_PARSE(app, argc, argv);

    try {
        CommonOpts* opts = nullptr;
        if (evolve_cmd->parsed()) opts = &eo;
        if (steady_cmd->parsed()) opts = &so;
        if (sweep_cmd->parsed()) opts = &wo;
        if (check_cmd->parsed()) opts = &co;

        RunConfig cfg = build_config(*opts);
        if (sweep_cmd->parsed() && *warm_opt) cfg.warm_start = true;
        validate_config(cfg);

        if (opts->dump) {
            std::cout << dump_config(cfg);
            return kExitOk;
        }
        std::filesystem::create_directories(cfg.directory);

        if (evolve_cmd->parsed()) return cmd_evolve(cfg, *opts);
        if (steady_cmd->parsed()) return cmd_steady(cfg, *opts);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, *opts);
        if (check_cmd->parsed()) return cmd_check(cfg, *opts, truncations, check_tol);
        return kExitError;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
}
