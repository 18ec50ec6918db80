#include "wgf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include "wgf/diagnostics.hpp"
#include "wgf/lab2d.hpp"
#include "wgf/report_io.hpp"
#include "wgf/runconfig.hpp"

namespace wgf::cli {

namespace {

namespace fs = std::filesystem;

struct Loaded {
    RunConfig rc;
    ConfigFile file;
    Grid1D grid;
    ModelSpec model;
    Density rho0;
};

Loaded load(const std::string& config_path, long seed_override) {
    Loaded L{.rc = {}, .file = parse_config_file(config_path), .grid = {}, .model = {}, .rho0 = {}};
    L.rc = load_run_config(L.file);
    if (seed_override >= 0) L.rc.seed = static_cast<unsigned long>(seed_override);
    L.grid = config_grid(L.rc);
    L.model = config_model(L.rc, L.grid);
    L.rho0 = config_initial_density(L.rc, L.grid);
    return L;
}

void prepare_out(const std::string& out_dir, const ConfigFile& file) {
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/config.echo.txt", file.raw_text);
}

std::string ptag(double p) {
    if (p == std::floor(p)) return std::to_string(static_cast<long>(p));
    std::string s = format_g17(p);
    for (char& c : s)
        if (c == '.' || c == '-') c = '_';
    return s;
}

void write_series_csv(const std::string& path, const Trajectory& traj) {
    CsvWriter csv;
    csv.path = path;
    csv.header = {"t", "J", "entropy", "interaction"};
    for (double p : traj.config.p_list) csv.header.push_back("F" + ptag(p));
    csv.header.insert(csv.header.end(), {"min_rho", "max_rho"});
    for (double p : traj.config.p_list) csv.header.push_back("w1p" + ptag(p));
    csv.header.insert(csv.header.end(), {"w2_step", "opt_residual", "ma_residual"});

    for (size_t k = 0; k < traj.samples.size(); ++k) {
        const FunctionalSample& s = traj.samples[k];
        std::vector<double> row{s.t, s.J, s.entropy, s.interaction};
        row.insert(row.end(), s.fisher.begin(), s.fisher.end());
        row.push_back(s.min_rho);
        row.push_back(s.max_rho);
        row.insert(row.end(), s.w1p.begin(), s.w1p.end());
        if (k == 0) {
            row.insert(row.end(), {0.0, 0.0, 0.0});
        } else {
            const StepResult& st = traj.steps[k - 1];
            row.insert(row.end(), {st.w2, st.optimality_residual, st.ma_residual});
        }
        csv.add_row(row);
    }
    csv.write();
}

void write_snapshots_csv(const std::string& path, const Trajectory& traj,
                         const std::vector<double>& times) {
    CsvWriter csv;
    csv.path = path;
    csv.header = {"t", "x", "rho"};
    std::vector<double> ts = times;
    if (ts.empty()) ts = {0.0, traj.config.t_final};
    for (double t : ts) {
        const Density& rho = traj.rho_at(t);
        for (int i = 0; i < rho.size(); ++i)
            csv.add_row({t, rho.grid.x(i), rho[i]});
    }
    csv.write();
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir, long seed_override) {
    const Loaded L = load(config_path, seed_override);
    prepare_out(out_dir, L.file);

    const JkoConfig cfg = config_jko(L.rc, L.model);
    const Trajectory traj = run_trajectory(L.rho0, cfg);
    if (!traj.completed) {
        std::cerr << "wgf run: solver failed at step " << traj.error_step << ": " << traj.error
                  << "\n";
        return 3;
    }

    std::vector<CheckReport> reports;
    reports.push_back(energy_decrease_report(traj));
    reports.push_back(max_principle_report(traj));
    reports.push_back(linf_growth_report(traj));
    for (double p : cfg.p_list)
        reports.push_back(fisher_recursion_report(traj, p));
    reports.push_back(h2_dissipation_report(traj));

    for (double p : {2.0, 4.0}) {
        CheckReport agg;
        agg.name = "five_gradients_p" + ptag(p);
        agg.pass = true;
        double worst_R = std::numeric_limits<double>::infinity();
        double worst_identity = 0.0;
        std::vector<double> remainders;
        for (size_t k = 0; k < traj.steps.size(); ++k) {
            const CheckReport rep =
                five_gradients_report(traj.steps[k], traj.densities[k], cfg.model, p);
            agg.pass = agg.pass && rep.pass;
            agg.worst_violation = std::max(agg.worst_violation, rep.worst_violation);
            worst_R = std::min(worst_R, rep.fitted_constants.at("remainder"));
            worst_identity =
                std::max(worst_identity, rep.fitted_constants.at("identity_residual"));
            remainders.push_back(rep.fitted_constants.at("remainder"));
        }
        agg.fitted_constants["min_remainder"] = worst_R;
        agg.fitted_constants["max_identity_residual"] = worst_identity;
        agg.series["remainder"] = std::move(remainders);
        reports.push_back(std::move(agg));
    }

    reports.push_back(dual_norm_check(traj.densities.front(), traj.densities.back(), 2.0,
                                      L.rc.seed));

    write_series_csv(out_dir + "/series.csv", traj);
    write_snapshots_csv(out_dir + "/snapshots.csv", traj, L.rc.snapshot_times);
    write_text_file(out_dir + "/report.json", check_report_json(reports));

    for (const auto& rep : reports)
        if (!rep.pass) return 1;
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, long seed_override) {
    const Loaded L = load(config_path, seed_override);
    prepare_out(out_dir, L.file);

    const JkoConfig cfg = config_jko(L.rc, L.model);
    const ErrorTable table = tau_convergence_study(L.rho0, L.rc.tau_list, cfg);

    CsvWriter csv;
    csv.path = out_dir + "/errors.csv";
    csv.header = {"tau",        "L2H1",       "L2H2",        "LpW1p",      "LinfL2",
                  "ratio_L2H1", "ratio_L2H2", "ratio_LpW1p", "ratio_LinfL2"};
    for (size_t i = 0; i < table.taus.size(); ++i) {
        auto ratio = [&](const std::vector<double>& r) { return i == 0 ? 0.0 : r[i - 1]; };
        csv.add_row({table.taus[i], table.l2h1[i], table.l2h2[i], table.lpw1p[i],
                     table.linfl2[i], ratio(table.ratio_l2h1), ratio(table.ratio_l2h2),
                     ratio(table.ratio_lpw1p), ratio(table.ratio_linfl2)});
    }
    csv.write();

    if (!table.completed) {
        std::cerr << "wgf sweep: " << table.error << "\n";
        return 3;
    }
    return 0;
}

int cmd_ineq(const std::string& config_path, const std::string& out_dir, long seed_override) {
    const Loaded L = load(config_path, seed_override);
    prepare_out(out_dir, L.file);
    const RunConfig& rc = L.rc;

    std::vector<CheckReport> reports;

    // counterexample family
    const std::vector<CounterexampleRow> cx =
        counterexample_sweep(rc.ineq_deltas, rc.ineq_counterexample_n, rc.ineq_alpha);
    {
        CsvWriter csv;
        csv.path = out_dir + "/counterexample.csv";
        csv.header = {"delta", "naive_ratio", "thm_ratio", "sup_d2", "sup_lap", "holder_lap"};
        for (const auto& r : cx)
            csv.add_row({r.delta, r.naive_ratio, r.thm_ratio, r.sup_d2, r.sup_lap, r.holder_lap});
        csv.write();

        CheckReport rep;
        rep.name = "counterexample_family";
        const double growth_floor = 1.5 * std::log(2.0);
        bool grows = true;
        for (size_t i = 1; i < cx.size(); ++i)
            grows = grows && cx[i].naive_ratio >= (1.0 + 1e-12) &&
                    cx[i].naive_ratio / cx[i - 1].naive_ratio >= growth_floor;
        double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
        std::vector<double> naive, thm;
        for (const auto& r : cx) {
            tmin = std::min(tmin, r.thm_ratio);
            tmax = std::max(tmax, r.thm_ratio);
            naive.push_back(r.naive_ratio);
            thm.push_back(r.thm_ratio);
        }
        rep.series["naive_ratio"] = std::move(naive);
        rep.series["thm_ratio"] = std::move(thm);
        rep.fitted_constants["thm_ratio_spread"] = tmax / tmin;
        rep.pass = grows && tmax <= 4.0 * tmin;
        reports.push_back(std::move(rep));
    }

    // Calderon-Zygmund growth sweep
    {
        const Grid2D g2 = build_grid2d(0.0, 1.0, 0.0, 1.0, rc.ineq_n, rc.ineq_n);
        const CzSweep sweep = cz_ratio_sweep(rc.ineq_samples, rc.ineq_p_list, g2, rc.seed);
        CsvWriter csv;
        csv.path = out_dir + "/cz_sweep.csv";
        csv.header = {"sample", "p", "ratio"};
        for (const auto& r : sweep.rows)
            csv.add_row({static_cast<double>(r.sample), r.p, r.ratio});
        csv.write();

        CheckReport rep;
        rep.name = "calderon_zygmund_growth";
        rep.fitted_constants["C"] = sweep.C;
        rep.fitted_constants["C_min"] = sweep.c_min;
        rep.fitted_constants["C_max"] = sweep.c_max;
        rep.pass = sweep.pass;
        reports.push_back(std::move(rep));
    }

    // interpolation family with refinement stability
    {
        const Grid2D g128 = build_grid2d(0.0, 1.0, 0.0, 1.0, rc.ineq_n, rc.ineq_n);
        const Grid2D g256 = build_grid2d(0.0, 1.0, 0.0, 1.0, 2 * rc.ineq_n, 2 * rc.ineq_n);
        CsvWriter csv;
        csv.path = out_dir + "/interpolation.csv";
        csv.header = {"sample", "ratio_coarse", "ratio_fine", "rel_change"};
        bool ok = true;
        std::vector<double> ratios;
        for (int s = 0; s < rc.ineq_samples; ++s) {
            std::mt19937_64 rng_c(rc.seed + 1000 + s);
            std::mt19937_64 rng_f(rc.seed + 1000 + s);
            const double r_c =
                interpolation_ratio(random_band_limited(g128, rng_c), 4.0, rc.ineq_alpha);
            const double r_f =
                interpolation_ratio(random_band_limited(g256, rng_f), 4.0, rc.ineq_alpha);
            const double rel = std::fabs(r_f - r_c) / r_c;
            csv.add_row({static_cast<double>(s), r_c, r_f, rel});
            ok = ok && std::isfinite(r_c) && std::isfinite(r_f) && rel <= 0.10;
            ratios.push_back(r_f);
        }
        csv.write();
        CheckReport rep;
        rep.name = "interpolation_family";
        rep.series["ratio"] = std::move(ratios);
        rep.pass = ok;
        reports.push_back(std::move(rep));
    }

    // Hoelder regularity constants across alpha (reported, not asserted)
    {
        const Grid2D g2 = build_grid2d(0.0, 1.0, 0.0, 1.0, rc.ineq_n, rc.ineq_n);
        CsvWriter csv;
        csv.path = out_dir + "/holder_c.csv";
        csv.header = {"alpha", "C_min", "C_max"};
        for (double alpha : {0.25, 0.5, 0.75}) {
            const HolderRegularityReport rep = holder_regularity_check(8, alpha, g2, rc.seed);
            csv.add_row({alpha, rep.c_min, rep.c_max});
        }
        csv.write();
    }

    write_text_file(out_dir + "/ineq_report.json", check_report_json(reports));
    for (const auto& rep : reports)
        if (!rep.pass) return 1;
    return 0;
}

int cmd_reference(const std::string& config_path, const std::string& out_dir,
                  long seed_override) {
    const Loaded L = load(config_path, seed_override);
    prepare_out(out_dir, L.file);

    FvConfig fv;
    fv.model = L.model;
    fv.tau_fv = L.rc.tau_fv > 0.0 ? L.rc.tau_fv : L.rc.tau / 10.0;
    const FvTrajectory traj = run_reference(L.rho0, L.rc.t_final, fv, L.rc.p_list);
    if (!traj.completed) {
        std::cerr << "wgf reference: solver failed at step " << traj.error_step << ": "
                  << traj.error << "\n";
        return 3;
    }

    CsvWriter csv;
    csv.path = out_dir + "/series.csv";
    csv.header = {"t", "J", "entropy", "interaction"};
    for (double p : L.rc.p_list) csv.header.push_back("F" + ptag(p));
    csv.header.insert(csv.header.end(), {"min_rho", "max_rho"});
    for (const auto& s : traj.samples) {
        std::vector<double> row{s.t, s.J, s.entropy, s.interaction};
        row.insert(row.end(), s.fisher.begin(), s.fisher.end());
        row.push_back(s.min_rho);
        row.push_back(s.max_rho);
        csv.add_row(row);
    }
    csv.write();
    return 0;
}

int cmd_compare(const std::string& config_path, const std::string& out_dir,
                long seed_override) {
    const Loaded L = load(config_path, seed_override);
    prepare_out(out_dir, L.file);

    const JkoConfig cfg = config_jko(L.rc, L.model);
    const Trajectory jko = run_trajectory(L.rho0, cfg);
    if (!jko.completed) {
        std::cerr << "wgf compare: JKO failed at step " << jko.error_step << "\n";
        return 3;
    }
    FvConfig fv;
    fv.model = L.model;
    fv.tau_fv = L.rc.tau_fv > 0.0 ? L.rc.tau_fv : L.rc.tau / 10.0;
    const FvTrajectory ref = run_reference(L.rho0, L.rc.t_final, fv, {2.0});
    if (!ref.completed) {
        std::cerr << "wgf compare: FV failed at step " << ref.error_step << "\n";
        return 3;
    }
    if (!jko.grid.same_as(ref.grid)) throw ConfigError("compare: grids do not match");

    CsvWriter csv;
    csv.path = out_dir + "/compare.csv";
    csv.header = {"t", "l2_distance"};
    for (size_t k = 0; k < jko.samples.size(); ++k) {
        const double t = jko.samples[k].t;
        const Density& a = jko.densities[k];
        const Density& b = ref.rho_at(t);
        NodeField e(a.grid);
        for (int i = 0; i < a.size(); ++i) e[i] = a[i] - b[i];
        csv.add_row({t, lp_norm(e, 2.0)});
    }
    csv.write();
    return 0;
}

int dispatch(const std::vector<std::string>& args) {
    if (args.empty()) {
        std::cerr << "usage: wgf run|sweep|ineq|reference|compare <config> [--out DIR] "
                     "[--seed N]\n";
        return 2;
    }
    const std::string cmd = args[0];
    std::string config_path;
    std::string out_dir = "out";
    long seed = -1;
    for (size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--out" && i + 1 < args.size()) {
            out_dir = args[++i];
        } else if (args[i] == "--seed" && i + 1 < args.size()) {
            seed = std::stol(args[++i]);
        } else if (config_path.empty()) {
            config_path = args[i];
        } else {
            std::cerr << "wgf: unexpected argument " << args[i] << "\n";
            return 2;
        }
    }
    if (config_path.empty()) {
        std::cerr << "wgf: missing config path\n";
        return 2;
    }

    try {
        if (cmd == "run") return cmd_run(config_path, out_dir, seed);
        if (cmd == "sweep") return cmd_sweep(config_path, out_dir, seed);
        if (cmd == "ineq") return cmd_ineq(config_path, out_dir, seed);
        if (cmd == "reference") return cmd_reference(config_path, out_dir, seed);
        if (cmd == "compare") return cmd_compare(config_path, out_dir, seed);
        std::cerr << "wgf: unknown command " << cmd << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "wgf: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "wgf: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "wgf: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "wgf: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace wgf::cli
