#include "vll/boundary_layer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vll/error.hpp"
#include "vll/io.hpp"

namespace vll {

CutoffFunction make_cutoff() {
    CutoffFunction c;
    c.xi = [](double r) {
        const double s = 1.0 - r * r;
        return s > 0.0 ? std::exp(1.0 - 1.0 / s) : 0.0;
    };
    c.dxi = [](double r) {
        const double s = 1.0 - r * r;
        if (!(s > 0.0)) return 0.0;
        const double xi = std::exp(1.0 - 1.0 / s);
        return xi == 0.0 ? 0.0 : -2.0 * r * xi / (s * s);
    };
    c.d2xi = [](double r) {
        const double s = 1.0 - r * r;
        if (!(s > 0.0)) return 0.0;
        const double xi = std::exp(1.0 - 1.0 / s);
        if (xi == 0.0) return 0.0;
        const double s2 = s * s;
        return xi * (-2.0 / s2 + 4.0 * r * r / (s2 * s2) - 8.0 * r * r / (s2 * s));
    };
    return c;
}

namespace {

void check_sizes(const Grid& grid, const LayerInput& in) {
    const std::size_t n = grid.cells;
    auto ok = [n](std::span<const double> f, bool optional) { return f.size() == n || (optional && f.empty()); };
    if (!ok(in.u, false) || !ok(in.du, false) || !ok(in.d2u, true) || !ok(in.dt_u, true))
        fail(ErrorKind::invalid_argument, "layer input size differs from grid");
}

} // namespace

LayerFields fake_layer(const Grid& grid, const LayerInput& in, double eps, double c, const CutoffFunction& cutoff) {
    if (!(eps > 0.0)) fail(ErrorKind::invalid_argument, "layer needs eps > 0");
    if (!(c > 0.0)) fail(ErrorKind::invalid_argument, "layer needs c > 0");
    check_sizes(grid, in);
    const double delta = c * eps;
    if (delta < 2.0 * grid.dx)
        fail(ErrorKind::under_resolved_layer, "layer width " + format_double(delta) + " below two cells (dx=" +
                                                  format_double(grid.dx) + ") at eps=" + format_double(eps));
    if (delta >= 0.5 * grid.length)
        fail(ErrorKind::under_resolved_layer, "layer strips overlap at eps=" + format_double(eps));

    const std::size_t n = grid.cells;
    LayerFields f;
    f.delta = delta;
    for (Field* v : {&f.z, &f.ztilde, &f.zhat, &f.zcheck, &f.dz, &f.d2z, &f.v_bl, &f.dv_bl, &f.d2v_bl, &f.dt_v_bl})
        v->assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.dist[i] / delta;
        if (r >= 1.0) continue;
        const double orient = grid.x[i] < 0.5 * grid.length ? 1.0 : -1.0;
        const double xi = cutoff.xi(r), dxi = cutoff.dxi(r), d2xi = cutoff.d2xi(r);
        f.z[i] = xi;
        f.ztilde[i] = r * dxi;
        f.zhat[i] = r * r * dxi;
        f.zcheck[i] = r * r * d2xi;
        f.dz[i] = orient * dxi / delta;
        f.d2z[i] = d2xi / (delta * delta);
        f.v_bl[i] = xi * in.u[i];
        f.dv_bl[i] = xi * in.du[i] + f.dz[i] * in.u[i];
        const double d2u = in.d2u.empty() ? 0.0 : in.d2u[i];
        f.d2v_bl[i] = xi * d2u + 2.0 * f.dz[i] * in.du[i] + f.d2z[i] * in.u[i];
        if (!in.dt_u.empty()) f.dt_v_bl[i] = xi * in.dt_u[i];
    }
    return f;
}

LayerCalculusResiduals layer_calculus_check(const Grid& grid, const LayerInput& in, double eps, double c,
                                            const CutoffFunction& cutoff) {
    if (in.d2u.empty()) fail(ErrorKind::invalid_argument, "layer calculus check needs u_xx");
    const LayerFields f = fake_layer(grid, in, eps, c, cutoff);
    const Field g1 = gradient(grid, f.v_bl);
    const Field g2 = second_derivative(grid, f.v_bl);

    LayerCalculusResiduals res;
    for (std::size_t i = 0; i < grid.cells; ++i) {
        const double d = grid.dist[i];
        const double r = d / f.delta;
        const double orient = grid.x[i] < 0.5 * grid.length ? 1.0 : -1.0;
        const double slope = cutoff.dxi(r) / f.delta;
        const double zt_over_d = f.ztilde[i] / d;
        const double zc_over_d2 = f.zcheck[i] / (d * d);

        const double first = f.z[i] * in.du[i] + slope * orient * in.u[i];
        const double first_zt = f.z[i] * in.du[i] + zt_over_d * orient * in.u[i];
        const double second =
            2.0 * zt_over_d * orient * in.du[i] + f.z[i] * in.d2u[i] + zc_over_d2 * in.u[i];

        res.first_derivative = std::max(res.first_derivative, std::abs(g1[i] - first));
        res.first_derivative_ztilde = std::max(res.first_derivative_ztilde, std::abs(g1[i] - first_zt));
        res.second_derivative = std::max(res.second_derivative, std::abs(g2[i] - second));
        res.ztilde_identity = std::max(res.ztilde_identity, std::abs(zt_over_d - slope));
    }
    return res;
}

LayerProfile wall_tangential_profile(double length) {
    const double k = std::numbers::pi / length;
    LayerProfile p;
    p.u = [k](double t, double x) {
        const double s = std::sin(k * x);
        return (1.0 + 0.5 * t) * (1.0 + 0.1 * s * s);
    };
    p.dt_u = [k](double, double x) {
        const double s = std::sin(k * x);
        return 0.5 * (1.0 + 0.1 * s * s);
    };
    p.dx_u = [k](double t, double x) { return (1.0 + 0.5 * t) * 0.1 * k * std::sin(2.0 * k * x); };
    return p;
}

double ScalingTable::fitted(const std::string& name) const {
    for (const auto& r : rows)
        if (r.norm_name == name) return r.fitted_exponent;
    fail(ErrorKind::invalid_argument, "no scaling row named " + name);
}

double ScalingTable::expected(const std::string& name) const {
    for (const auto& r : rows)
        if (r.norm_name == name) return r.paper_exponent;
    fail(ErrorKind::invalid_argument, "no scaling row named " + name);
}

std::vector<std::string> ScalingTable::norm_names() const {
    std::vector<std::string> names;
    for (const auto& r : rows)
        if (std::find(names.begin(), names.end(), r.norm_name) == names.end()) names.push_back(r.norm_name);
    return names;
}

namespace {

std::string p_label(double p) {
    if (std::isinf(p)) return "Linf";
    if (p == std::floor(p)) return "L" + std::to_string(static_cast<long long>(p));
    return "L" + format_double(p);
}

struct NormSpec {
    std::string name;
    double exponent;
    std::function<double(const Grid&, const LayerFields&)> eval;
};

std::vector<NormSpec> norm_specs(std::span<const double> ps) {
    std::vector<NormSpec> specs;
    auto weighted = [](const Grid& g, const Field& f, double power) {
        Field out(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::pow(g.dist[i], power) * f[i];
        return out;
    };
    for (double p : ps) {
        if (!(p >= 1.0) || std::isinf(p)) fail(ErrorKind::invalid_argument, "scaling exponents need 1 <= p < inf");
        specs.push_back({"v_bl_" + p_label(p), 1.0 / p,
                         [p](const Grid& g, const LayerFields& f) { return lp_norm(g, f.v_bl, p); }});
        specs.push_back({"dt_v_bl_" + p_label(p), 1.0 / p,
                         [p](const Grid& g, const LayerFields& f) { return lp_norm(g, f.dt_v_bl, p); }});
        specs.push_back({"d_grad_v_bl_" + p_label(p), 1.0 / p, [p, weighted](const Grid& g, const LayerFields& f) {
                             return lp_norm(g, weighted(g, f.dv_bl, 1.0), p);
                         }});
    }
    specs.push_back({"v_bl_Linf", 0.0, [](const Grid& g, const LayerFields& f) { return lp_norm(g, f.v_bl, infinity); }});
    specs.push_back(
        {"dt_v_bl_Linf", 0.0, [](const Grid& g, const LayerFields& f) { return lp_norm(g, f.dt_v_bl, infinity); }});
    specs.push_back(
        {"grad_v_bl_Linf", -1.0, [](const Grid& g, const LayerFields& f) { return lp_norm(g, f.dv_bl, infinity); }});
    specs.push_back({"d_grad_v_bl_Linf", 0.0, [weighted](const Grid& g, const LayerFields& f) {
                         return lp_norm(g, weighted(g, f.dv_bl, 1.0), infinity);
                     }});
    specs.push_back({"d2_grad_v_bl_Linf", 1.0, [weighted](const Grid& g, const LayerFields& f) {
                         return lp_norm(g, weighted(g, f.dv_bl, 2.0), infinity);
                     }});
    return specs;
}

} // namespace

ScalingTable layer_norm_scalings(const LayerProfile& profile, double c, std::span<const double> epsilons,
                                 std::span<const double> ps, const ScalingOptions& opt, const CutoffFunction& cutoff) {
    if (epsilons.empty()) fail(ErrorKind::insufficient_data, "scaling study needs at least one eps");
    if (opt.times.empty()) fail(ErrorKind::insufficient_data, "scaling study needs at least one time");
    const auto specs = norm_specs(ps);
    std::vector<std::vector<double>> values(specs.size(), std::vector<double>(epsilons.size(), 0.0));

    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        const double eps = epsilons[e];
        if (!(eps > 0.0)) fail(ErrorKind::invalid_argument, "eps must be positive");
        const auto wanted = static_cast<std::size_t>(std::ceil(opt.cells_per_layer * opt.length / (c * eps)));
        const Grid grid = make_grid(opt.length, std::max(opt.min_cells, wanted));
        const auto strip_cells = boundary_strip(grid, c * eps).count() / 2;
        if (strip_cells < 8)
            fail(ErrorKind::under_resolved_layer,
                 "layer at eps=" + format_double(eps) + " holds " + std::to_string(strip_cells) + " cells");
        Field u(grid.cells), du(grid.cells), dtu(grid.cells);
        for (double t : opt.times) {
            for (std::size_t i = 0; i < grid.cells; ++i) {
                u[i] = profile.u(t, grid.x[i]);
                du[i] = profile.dx_u(t, grid.x[i]);
                dtu[i] = profile.dt_u(t, grid.x[i]);
            }
            const LayerFields f = fake_layer(grid, {u, du, {}, dtu}, eps, c, cutoff);
            for (std::size_t s = 0; s < specs.size(); ++s)
                values[s][e] = std::max(values[s][e], specs[s].eval(grid, f));
        }
    }

    ScalingTable table;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const double slope = epsilons.size() >= 2 ? loglog_slope(epsilons, values[s]) : 0.0;
        for (std::size_t e = 0; e < epsilons.size(); ++e)
            table.rows.push_back({specs[s].name, epsilons[e], values[s][e], slope, specs[s].exponent});
    }
    return table;
}

std::string scaling_csv(const ScalingTable& table) {
    std::ostringstream os;
    os << "norm_name,epsilon,value,fitted_exponent,paper_exponent\n";
    for (const auto& r : table.rows)
        os << r.norm_name << ',' << format_double(r.epsilon) << ',' << format_double(r.value) << ','
           << format_double(r.fitted_exponent) << ',' << format_double(r.paper_exponent) << '\n';
    return os.str();
}

void write_scaling_csv(const ScalingTable& table, const std::filesystem::path& path) {
    write_file_atomic(path, scaling_csv(table));
}

} // namespace vll
