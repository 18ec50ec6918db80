#include "wgf/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wgf {

namespace {

std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r");
    if (from == std::string::npos) return "";
    const auto to = s.find_last_not_of(" \t\r");
    return s.substr(from, to - from + 1);
}

}  // namespace

bool ConfigFile::has(const std::string& key) const { return entries.count(key) > 0; }

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw ConfigError("config: key '" + key + "' is not a number: " + it->second);
    }
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (...) {
        throw ConfigError("config: key '" + key + "' is not an integer: " + it->second);
    }
}

std::vector<double> ConfigFile::get_list(const std::string& key,
                                         const std::vector<double>& fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError("config: key '" + key + "' has a bad list entry: " + tok);
        }
    }
    return out;
}

ConfigFile parse_config_text(const std::string& text, const std::string& origin) {
    ConfigFile cf;
    cf.raw_text = text;
    std::stringstream ss(text);
    std::string line;
    std::string section = "run";
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cf.entries[section + "." + key] = value;
    }
    return cf;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

RunConfig load_run_config(const ConfigFile& f) {
    RunConfig rc;
    rc.a = f.get_double("run.a", rc.a);
    rc.b = f.get_double("run.b", rc.b);
    rc.n = f.get_int("run.n", rc.n);
    rc.mass = f.get_double("run.mass", rc.mass);
    rc.preset = f.get_string("run.preset", rc.preset);
    rc.amplitude = f.get_double("run.amplitude", rc.amplitude);
    rc.bump_c1 = f.get_double("run.bump_c1", rc.bump_c1);
    rc.bump_c2 = f.get_double("run.bump_c2", rc.bump_c2);
    rc.bump_width = f.get_double("run.bump_width", rc.bump_width);
    rc.bump_base = f.get_double("run.bump_base", rc.bump_base);
    rc.csv_path = f.get_string("run.csv_path", rc.csv_path);

    rc.model = f.get_string("run.model", rc.model);
    rc.v_kind = f.get_string("run.v_kind", rc.v_kind);
    rc.v_strength = f.get_double("run.v_strength", rc.v_strength);
    rc.v_center = f.get_double("run.v_center", rc.v_center);

    rc.tau = f.get_double("run.tau", rc.tau);
    rc.t_final = f.get_double("run.t_final", rc.t_final);
    rc.inner_tol = f.get_double("run.inner_tol", rc.inner_tol);
    rc.inner_max_iter = f.get_int("run.inner_max_iter", rc.inner_max_iter);
    rc.outer_lag_iters = f.get_int("run.outer_lag_iters", rc.outer_lag_iters);
    rc.outer_tol = f.get_double("run.outer_tol", rc.outer_tol);
    rc.quantile_m = f.get_int("run.quantile_m", rc.quantile_m);
    rc.p_list = f.get_list("run.p_list", rc.p_list);
    rc.snapshot_times = f.get_list("run.snapshot_times", rc.snapshot_times);
    rc.seed = static_cast<unsigned long>(f.get_int("run.seed", static_cast<int>(rc.seed)));
    rc.threads = f.get_int("run.threads", rc.threads);

    rc.tau_fv = f.get_double("fv.tau_fv", rc.tau_fv);
    rc.tau_list = f.get_list("sweep.tau_list", rc.tau_list);

    rc.ineq_n = f.get_int("ineq.n", rc.ineq_n);
    rc.ineq_alpha = f.get_double("ineq.alpha", rc.ineq_alpha);
    rc.ineq_samples = f.get_int("ineq.samples", rc.ineq_samples);
    rc.ineq_p_list = f.get_list("ineq.p_list", rc.ineq_p_list);
    if (rc.ineq_deltas.empty())
        for (int k = 4; k <= 9; ++k) rc.ineq_deltas.push_back(std::pow(2.0, -k));
    rc.ineq_deltas = f.get_list("ineq.delta_list", rc.ineq_deltas);
    rc.ineq_counterexample_n = f.get_int("ineq.counterexample_n", rc.ineq_counterexample_n);

    if (rc.model != "keller_segel" && rc.model != "fokker_planck")
        throw ConfigError("config: model must be keller_segel or fokker_planck");
    if (!(rc.t_final >= rc.tau))
        throw ConfigError("config: t_final must be at least tau");
    if (rc.n < 8) throw ConfigError("config: n must be >= 8");
    return rc;
}

Grid1D config_grid(const RunConfig& rc) { return build_grid(rc.a, rc.b, rc.n); }

ModelSpec config_model(const RunConfig& rc, const Grid1D& g) {
    if (rc.model == "keller_segel") return ModelSpec::keller_segel(g);
    NodeField V(g);
    if (rc.v_kind == "quadratic") {
        for (int i = 0; i < g.n; ++i) {
            const double d = g.x(i) - rc.v_center;
            V[i] = rc.v_strength * d * d;
        }
    } else if (rc.v_kind != "none") {
        throw ConfigError("config: v_kind must be none or quadratic");
    }
    return ModelSpec::fokker_planck(std::move(V));
}

Density config_initial_density(const RunConfig& rc, const Grid1D& g) {
    if (rc.preset == "uniform") return preset_uniform(g, rc.mass);
    if (rc.preset == "cos_perturbed") return preset_cos_perturbed(g, rc.amplitude, rc.mass);
    if (rc.preset == "gibbs") {
        const ModelSpec m = config_model(rc, g);
        if (m.kind != ModelSpec::Kind::fokker_planck)
            throw ConfigError("config: gibbs preset requires the fokker_planck model");
        return preset_gibbs(g, m.V, rc.mass);
    }
    if (rc.preset == "two_bumps")
        return preset_two_bumps(g, rc.bump_c1, rc.bump_c2, rc.bump_width, rc.bump_base, rc.mass);
    if (rc.preset == "csv") {
        if (rc.csv_path.empty()) throw ConfigError("config: csv preset needs csv_path");
        return preset_from_csv(g, rc.csv_path, rc.mass);
    }
    throw ConfigError("config: unknown preset " + rc.preset);
}

JkoConfig config_jko(const RunConfig& rc, const ModelSpec& model) {
    JkoConfig cfg;
    cfg.tau = rc.tau;
    cfg.t_final = rc.t_final;
    cfg.model = model;
    cfg.inner_tol = rc.inner_tol;
    cfg.inner_max_iter = rc.inner_max_iter;
    cfg.outer_lag_iters = rc.outer_lag_iters;
    cfg.outer_tol = rc.outer_tol;
    cfg.quantile_m = rc.quantile_m;
    cfg.p_list = rc.p_list;
    cfg.validate();
    return cfg;
}

}  // namespace wgf
