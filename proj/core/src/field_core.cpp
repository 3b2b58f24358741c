#include "vll/field_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vll/error.hpp"

namespace vll {

Grid make_grid(double length, std::size_t cells) {
    if (!(length > 0.0) || !std::isfinite(length))
        fail(ErrorKind::invalid_configuration, "grid length must be positive, got " + std::to_string(length));
    if (cells < 4)
        fail(ErrorKind::invalid_configuration, "grid needs at least 4 cells, got " + std::to_string(cells));
    Grid g;
    g.length = length;
    g.cells = cells;
    g.dx = length / static_cast<double>(cells);
    g.x.resize(cells);
    g.dist.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double xi = (static_cast<double>(i) + 0.5) * g.dx;
        g.x[i] = xi;
        g.dist[i] = std::min(xi, length - xi);
    }
    return g;
}

std::size_t CellMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool CellMask::subset_of(const CellMask& other) const noexcept {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !other.bits_[i]) return false;
    return true;
}

CellMask boundary_strip(const Grid& grid, double width) {
    if (!(width >= 0.0)) fail(ErrorKind::invalid_argument, "strip width must be non-negative");
    CellMask mask(grid.cells);
    for (std::size_t i = 0; i < grid.cells; ++i) mask.set(i, grid.dist[i] <= width);
    return mask;
}

double integrate(const Grid& grid, std::span<const double> f, const CellMask* mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!mask || (*mask)[i]) sum += f[i];
    return sum * grid.dx;
}

namespace {

template <class Magnitude>
double lp_impl(const Grid& grid, std::size_t n, double p, const CellMask* mask, Magnitude mag) {
    if (!(p >= 1.0)) fail(ErrorKind::invalid_argument, "L^p norm needs p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!mask || (*mask)[i]) m = std::max(m, mag(i));
        return m;
    }
    double sum = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i)
            if (!mask || (*mask)[i]) sum += mag(i);
        return sum * grid.dx;
    }
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i)
            if (!mask || (*mask)[i]) sum += mag(i) * mag(i);
        return std::sqrt(sum * grid.dx);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!mask || (*mask)[i]) sum += std::pow(mag(i), p);
    return std::pow(sum * grid.dx, 1.0 / p);
}

} // namespace

double lp_norm(const Grid& grid, std::span<const double> f, double p, const CellMask* mask) {
    return lp_impl(grid, f.size(), p, mask, [&](std::size_t i) { return std::abs(f[i]); });
}

double lp_norm(const Grid& grid, std::span<const Field> components, double p, const CellMask* mask) {
    const std::size_t n = components.empty() ? 0 : components.front().size();
    return lp_impl(grid, n, p, mask, [&](std::size_t i) {
        double s = 0.0;
        for (const auto& c : components) s += c[i] * c[i];
        return std::sqrt(s);
    });
}

double time_integral(const TimeSeries& s) { return time_integral(s.t, s.value); }

double time_integral(std::span<const double> t, std::span<const double> v) {
    if (t.size() < 2 || v.size() != t.size())
        fail(ErrorKind::insufficient_data, "time integral needs at least 2 samples");
    double sum = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double h = t[k] - t[k - 1];
        if (!(h > 0.0)) fail(ErrorKind::invalid_argument, "sample times must be strictly increasing");
        sum += 0.5 * h * (v[k] + v[k - 1]);
    }
    return sum;
}

std::vector<double> cumulative_time_integral(std::span<const double> t, std::span<const double> v) {
    if (t.empty() || v.size() != t.size())
        fail(ErrorKind::insufficient_data, "cumulative integral needs matching samples");
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double h = t[k] - t[k - 1];
        if (!(h > 0.0)) fail(ErrorKind::invalid_argument, "sample times must be strictly increasing");
        out[k] = out[k - 1] + 0.5 * h * (v[k] + v[k - 1]);
    }
    return out;
}

Field gradient(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    if (n < 3) fail(ErrorKind::invalid_argument, "gradient needs at least 3 samples");
    Field g(n);
    const double inv2 = 0.5 / dx;
    g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) * inv2;
    g[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
    return g;
}

Field second_derivative(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    if (n < 4) fail(ErrorKind::invalid_argument, "second derivative needs at least 4 samples");
    Field g(n);
    const double inv = 1.0 / (dx * dx);
    g[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    g[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    return g;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2 || x.size() != y.size())
        fail(ErrorKind::insufficient_data, "slope fit needs at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace vll
