// Line-oriented `key = value` configuration with [sections]. Runs carry
// ~20 parameters, so configs are files that get archived next to the
// outputs rather than flag soup.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wgf/density.hpp"
#include "wgf/functionals.hpp"
#include "wgf/jko.hpp"

namespace wgf {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigFile {
    // keys stored as "section.key"; the preamble section is "run"
    std::map<std::string, std::string> entries;
    std::string raw_text;

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const;
};

ConfigFile parse_config_file(const std::string& path);
ConfigFile parse_config_text(const std::string& text, const std::string& origin);

struct RunConfig {
    // domain and initial datum
    double a = 0.0, b = 1.0;
    int n = 128;
    double mass = 1.0;
    std::string preset = "cos_perturbed";
    double amplitude = 0.5;
    double bump_c1 = 0.3, bump_c2 = 0.7, bump_width = 0.1, bump_base = 0.1;
    std::string csv_path;

    // model
    std::string model = "keller_segel";  // or fokker_planck
    std::string v_kind = "none";         // none | quadratic
    double v_strength = 8.0;
    double v_center = 0.5;

    // solver
    double tau = 1e-3;
    double t_final = 0.1;
    double inner_tol = 1e-7;
    int inner_max_iter = 500;
    int outer_lag_iters = 30;
    double outer_tol = 1e-9;
    int quantile_m = 0;
    std::vector<double> p_list{2.0, 4.0, 6.0};
    std::vector<double> snapshot_times;
    unsigned long seed = 42;
    int threads = 0;

    // fv
    double tau_fv = 0.0;  // 0 -> tau / 10

    // sweep
    std::vector<double> tau_list{4e-3, 2e-3, 1e-3};

    // inequality lab
    int ineq_n = 128;
    double ineq_alpha = 0.5;
    int ineq_samples = 20;
    std::vector<double> ineq_p_list{2.0, 4.0, 8.0, 16.0};
    std::vector<double> ineq_deltas;
    int ineq_counterexample_n = 2048;
};

RunConfig load_run_config(const ConfigFile& file);

Grid1D config_grid(const RunConfig& rc);
ModelSpec config_model(const RunConfig& rc, const Grid1D& g);
Density config_initial_density(const RunConfig& rc, const Grid1D& g);
JkoConfig config_jko(const RunConfig& rc, const ModelSpec& model);

}  // namespace wgf
