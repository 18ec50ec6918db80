#include "wgf/grid.hpp"

#include <algorithm>
#include <cmath>

namespace wgf {

Grid1D build_grid(double a, double b, int n) {
    if (!(b > a)) throw std::invalid_argument("build_grid: need b > a");
    if (n < 8) throw std::invalid_argument("build_grid: need n >= 8");
    Grid1D g;
    g.a = a;
    g.b = b;
    g.n = n;
    g.h = (b - a) / n;
    return g;
}

NodeField::NodeField(const Grid1D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != g.n)
        throw std::invalid_argument("NodeField: length must equal cell count");
}

NodeField field_from(const Grid1D& g, const std::function<double(double)>& f) {
    NodeField out(g);
    for (int i = 0; i < g.n; ++i) out[i] = f(g.x(i));
    return out;
}

NodeField derivative(const NodeField& f) {
    const int n = f.grid.n;
    const double h = f.grid.h;
    NodeField out(f.grid);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return out;
}

NodeField second_derivative(const NodeField& f) {
    const int n = f.grid.n;
    const double h2 = f.grid.h * f.grid.h;
    NodeField out(f.grid);
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    for (int i = 1; i < n - 1; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return out;
}

double integrate(const NodeField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.h;
}

double field_min(const NodeField& f) {
    return *std::min_element(f.values.begin(), f.values.end());
}

double field_max(const NodeField& f) {
    return *std::max_element(f.values.begin(), f.values.end());
}

double field_sup_abs(const NodeField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::fabs(v));
    return m;
}

double lp_norm(const NodeField& f, double p) {
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::fabs(v), p);
    return std::pow(s * f.grid.h, 1.0 / p);
}

double boundary_value_left(const NodeField& f) {
    return (15.0 * f[0] - 10.0 * f[1] + 3.0 * f[2]) / 8.0;
}

double boundary_value_right(const NodeField& f) {
    const int n = f.grid.n;
    return (15.0 * f[n - 1] - 10.0 * f[n - 2] + 3.0 * f[n - 3]) / 8.0;
}

double interp_linear(const NodeField& f, double x) {
    const Grid1D& g = f.grid;
    if (x <= g.x(0)) return f[0];
    if (x >= g.x(g.n - 1)) return f[g.n - 1];
    const double t = (x - g.x(0)) / g.h;
    const int i = std::min(static_cast<int>(t), g.n - 2);
    const double w = t - i;
    return (1.0 - w) * f[i] + w * f[i + 1];
}

}  // namespace wgf
