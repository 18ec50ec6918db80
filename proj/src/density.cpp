#include "wgf/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wgf {

Density make_density(const Grid1D& g, std::vector<double> values, double mass) {
    if (static_cast<int>(values.size()) != g.n)
        throw std::invalid_argument("make_density: length must equal cell count");
    double s = 0.0;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("make_density: values must be finite and nonnegative");
        s += v;
    }
    s *= g.h;
    if (std::fabs(s - mass) > 1e-12)
        throw std::invalid_argument("make_density: mass mismatch");
    Density rho;
    rho.grid = g;
    rho.values = std::move(values);
    rho.mass = mass;
    return rho;
}

Density normalize_to_mass(const Grid1D& g, const std::vector<double>& values, double mass) {
    double s = 0.0;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("normalize_to_mass: values must be finite and nonnegative");
        s += v;
    }
    s *= g.h;
    if (!(s > 0.0)) throw std::invalid_argument("normalize_to_mass: zero total mass");
    std::vector<double> out(values.size());
    const double c = mass / s;
    for (size_t i = 0; i < values.size(); ++i) out[i] = values[i] * c;
    Density rho;
    rho.grid = g;
    rho.values = std::move(out);
    rho.mass = mass;
    return rho;
}

double density_min(const Density& rho) {
    return *std::min_element(rho.values.begin(), rho.values.end());
}

double density_max(const Density& rho) {
    return *std::max_element(rho.values.begin(), rho.values.end());
}

Density preset_uniform(const Grid1D& g, double mass) {
    return normalize_to_mass(g, std::vector<double>(g.n, 1.0), mass);
}

Density preset_cos_perturbed(const Grid1D& g, double amplitude, double mass) {
    if (std::fabs(amplitude) >= 1.0)
        throw std::invalid_argument("preset_cos_perturbed: |amplitude| must be < 1");
    const double pi = std::acos(-1.0);
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i)
        v[i] = 1.0 + amplitude * std::cos(pi * (g.x(i) - g.a) / (g.b - g.a));
    return normalize_to_mass(g, v, mass);
}

Density preset_gibbs(const Grid1D& g, const NodeField& V, double mass) {
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = std::exp(-V[i]);
    return normalize_to_mass(g, v, mass);
}

Density preset_two_bumps(const Grid1D& g, double c1, double c2, double width,
                         double base, double mass) {
    if (!(width > 0.0) || !(base > 0.0))
        throw std::invalid_argument("preset_two_bumps: width and base must be positive");
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        v[i] = base + std::exp(-std::pow((x - c1) / width, 2)) +
               std::exp(-std::pow((x - c2) / width, 2));
    }
    return normalize_to_mass(g, v, mass);
}

Density preset_from_csv(const Grid1D& g, const std::string& path, double mass) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("preset_from_csv: cannot open " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        v.push_back(std::stod(line));
    }
    if (static_cast<int>(v.size()) != g.n)
        throw std::invalid_argument("preset_from_csv: expected " + std::to_string(g.n) +
                                    " values, got " + std::to_string(v.size()));
    return normalize_to_mass(g, v, mass);
}

}  // namespace wgf
