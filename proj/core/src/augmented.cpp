#include "vll/augmented.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vll/boundary_layer.hpp"
#include "vll/eos.hpp"
#include "vll/error.hpp"
#include "vll/io.hpp"

namespace vll {

Field AugmentedState::w_from_sqrt() const {
    Field out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = 2.0 * epsilon * d_sqrt_rho[i] / sqrt_rho[i];
    return out;
}

AugmentedState augment(const Grid& grid, const FluidState& s, double eps, double floor) {
    const std::size_t n = grid.cells;
    if (s.rho.size() != n) fail(ErrorKind::invalid_argument, "state size differs from grid");
    AugmentedState a;
    a.t = s.t;
    a.epsilon = eps;
    a.rho = s.rho;
    a.u = s.velocity();
    a.floor_cells = CellMask(n);
    Field logr(n);
    a.sqrt_rho.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.rho[i] > 0.0)) fail(ErrorKind::domain, "augmented variables need rho > 0", s.t);
        logr[i] = std::log(s.rho[i]);
        a.sqrt_rho[i] = std::sqrt(s.rho[i]);
        a.floor_cells.set(i, s.rho[i] <= floor);
    }
    a.w = gradient(grid, logr);
    for (double& x : a.w) x *= eps;
    a.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) a.v[i] = a.u[i] + a.w[i];
    a.d_sqrt_rho = gradient(grid, a.sqrt_rho);
    const Field du = gradient(grid, a.u);
    a.sym.assign(n, 0.0);
    a.antisym.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (!a.floor_cells[i]) a.sym[i] = a.sqrt_rho[i] * du[i];
    return a;
}

SymAntisym sym_antisym(const TensorField& g) {
    const std::size_t d = g.dim;
    if (g.comp.size() != d * d) fail(ErrorKind::invalid_argument, "tensor component count is not dim^2");
    const std::size_t n = d == 0 ? 0 : g.comp.front().size();
    SymAntisym out{{d, std::vector<Field>(d * d, Field(n))}, {d, std::vector<Field>(d * d, Field(n))}};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double a = g.at(i, j)[k], b = g.at(j, i)[k];
                out.sym.at(i, j)[k] = 0.5 * (a + b);
                out.antisym.at(i, j)[k] = 0.5 * (a - b);
            }
    return out;
}

Grid2D make_periodic_grid(std::size_t n) {
    if (n < 4) fail(ErrorKind::invalid_configuration, "2D grid needs at least 4 points per axis");
    Grid2D g;
    g.n = n;
    g.h = 2.0 * std::numbers::pi / static_cast<double>(n);
    g.periodic = true;
    for (std::size_t i = 0; i < n; ++i) g.coord.push_back(static_cast<double>(i) * g.h);
    return g;
}

Grid2D make_unit_square_grid(std::size_t n) {
    if (n < 5) fail(ErrorKind::invalid_configuration, "2D grid needs at least 5 points per axis");
    Grid2D g;
    g.n = n;
    g.h = 1.0 / static_cast<double>(n);
    g.periodic = false;
    for (std::size_t i = 0; i < n; ++i) g.coord.push_back((static_cast<double>(i) + 0.5) * g.h);
    return g;
}

Field2D sample(const Grid2D& g, const Scalar2D& f) {
    Field2D out(g.n * g.n);
    for (std::size_t j = 0; j < g.n; ++j)
        for (std::size_t i = 0; i < g.n; ++i) out[g.index(i, j)] = f(g.coord[i], g.coord[j]);
    return out;
}

namespace {

template <class Index>
Field2D centered(const Grid2D& g, const Field2D& f, Index at) {
    const std::size_t n = g.n;
    Field2D out(n * n, 0.0);
    const double inv = 0.5 / g.h;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t lo, hi;
            if (!at(i, j, lo, hi)) continue;
            out[g.index(i, j)] = (f[hi] - f[lo]) * inv;
        }
    return out;
}

Field2D add(const Field2D& a, const Field2D& b, double sb = 1.0) {
    Field2D out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + sb * b[k];
    return out;
}

Field2D mul(const Field2D& a, const Field2D& b) {
    Field2D out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
    return out;
}

Field2D log_positive(const Field2D& rho) {
    Field2D out(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) {
        if (!(rho[k] > 0.0)) fail(ErrorKind::domain, "density must be positive");
        out[k] = std::log(rho[k]);
    }
    return out;
}

double max_abs(const Field2D& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

void require_periodic(const Grid2D& g) {
    if (!g.periodic) fail(ErrorKind::invalid_argument, "identity check needs the periodic grid");
}

} // namespace

Field2D diff_x(const Grid2D& g, const Field2D& f) {
    const std::size_t n = g.n;
    return centered(g, f, [&](std::size_t i, std::size_t j, std::size_t& lo, std::size_t& hi) {
        if (g.periodic) {
            lo = g.index((i + n - 1) % n, j);
            hi = g.index((i + 1) % n, j);
            return true;
        }
        if (i == 0 || i + 1 == n) return false;
        lo = g.index(i - 1, j);
        hi = g.index(i + 1, j);
        return true;
    });
}

Field2D diff_y(const Grid2D& g, const Field2D& f) {
    const std::size_t n = g.n;
    return centered(g, f, [&](std::size_t i, std::size_t j, std::size_t& lo, std::size_t& hi) {
        if (g.periodic) {
            lo = g.index(i, (j + n - 1) % n);
            hi = g.index(i, (j + 1) % n);
            return true;
        }
        if (j == 0 || j + 1 == n) return false;
        lo = g.index(i, j - 1);
        hi = g.index(i, j + 1);
        return true;
    });
}

VectorResidual derivation_identity_residual(const Grid2D& g, const Field2D& rho, const Field2D& ux,
                                            const Field2D& uy, double eps) {
    require_periodic(g);
    const Field2D lr = log_positive(rho);
    const Field2D lx = diff_x(g, lr), ly = diff_y(g, lr);
    const Field2D mx = mul(rho, ux), my = mul(rho, uy);

    // Left side: 2 eps grad div(rho u).
    const Field2D div_m = add(diff_x(g, mx), diff_y(g, my));
    const Field2D lhs_x = diff_x(g, div_m), lhs_y = diff_y(g, div_m);

    // T = rho u (x) grad log rho + rho grad log rho (x) u, (div T)_i = d_j T_ij.
    const Field2D t_xx = add(mul(mx, lx), mul(mul(rho, lx), ux));
    const Field2D t_xy = add(mul(mx, ly), mul(mul(rho, lx), uy));
    const Field2D t_yx = add(mul(my, lx), mul(mul(rho, ly), ux));
    const Field2D t_yy = add(mul(my, ly), mul(mul(rho, ly), uy));
    const Field2D div_t_x = add(diff_x(g, t_xx), diff_y(g, t_xy));
    const Field2D div_t_y = add(diff_x(g, t_yx), diff_y(g, t_yy));

    const Field2D lap_x = add(diff_x(g, diff_x(g, mx)), diff_y(g, diff_y(g, mx)));
    const Field2D lap_y = add(diff_x(g, diff_x(g, my)), diff_y(g, diff_y(g, my)));

    // rho D(u), D_ij = (d_j u_i + d_i u_j) / 2.
    const Field2D dux_x = diff_x(g, ux), dux_y = diff_y(g, ux);
    const Field2D duy_x = diff_x(g, uy), duy_y = diff_y(g, uy);
    Field2D d_xx(rho.size()), d_xy(rho.size()), d_yy(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) {
        d_xx[k] = rho[k] * dux_x[k];
        d_xy[k] = rho[k] * 0.5 * (dux_y[k] + duy_x[k]);
        d_yy[k] = rho[k] * duy_y[k];
    }
    const Field2D div_d_x = add(diff_x(g, d_xx), diff_y(g, d_xy));
    const Field2D div_d_y = add(diff_x(g, d_xy), diff_y(g, d_yy));

    VectorResidual r;
    r.x.resize(rho.size());
    r.y.resize(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) {
        r.x[k] = 2.0 * eps * lhs_x[k] - (2.0 * eps * div_t_x[k] - 2.0 * eps * lap_x[k] + 4.0 * eps * div_d_x[k]);
        r.y[k] = 2.0 * eps * lhs_y[k] - (2.0 * eps * div_t_y[k] - 2.0 * eps * lap_y[k] + 4.0 * eps * div_d_y[k]);
    }
    r.max_abs = std::max(max_abs(r.x), max_abs(r.y));
    return r;
}

VectorResidual cancellation_residual(const Grid2D& g, const Field2D& rho, const Field2D& ux, const Field2D& uy) {
    require_periodic(g);
    const Field2D lr = log_positive(rho);
    const Field2D rx = diff_x(g, rho), ry = diff_y(g, rho);
    const Field2D lx = diff_x(g, lr), ly = diff_y(g, lr);
    const Field2D direct_x = add(diff_x(g, mul(ux, rx)), diff_y(g, mul(ux, ry)));
    const Field2D direct_y = add(diff_x(g, mul(uy, rx)), diff_y(g, mul(uy, ry)));
    const Field2D mx = mul(rho, ux), my = mul(rho, uy);
    const Field2D log_x = add(diff_x(g, mul(mx, lx)), diff_y(g, mul(mx, ly)));
    const Field2D log_y = add(diff_x(g, mul(my, lx)), diff_y(g, mul(my, ly)));
    VectorResidual r{add(direct_x, log_x, -1.0), add(direct_y, log_y, -1.0), 0.0};
    r.max_abs = std::max(max_abs(r.x), max_abs(r.y));
    return r;
}

double hessian_symmetry_residual(const Grid2D& g, const Field2D& rho) {
    const Field2D lr = log_positive(rho);
    return max_abs(add(diff_y(g, diff_x(g, lr)), diff_x(g, diff_y(g, lr)), -1.0));
}

double curl_free_check(const Grid2D& g, const Field2D& rho) {
    const Field2D lr = log_positive(rho);
    const Field2D gx = mul(rho, diff_x(g, lr)), gy = mul(rho, diff_y(g, lr));
    const Field2D curl = add(diff_x(g, gy), diff_y(g, gx), -1.0);
    if (g.periodic) return max_abs(curl);
    // The flux components are only valid one point in from the edges.
    double m = 0.0;
    for (std::size_t j = 2; j + 2 < g.n; ++j)
        for (std::size_t i = 2; i + 2 < g.n; ++i) m = std::max(m, std::abs(curl[g.index(i, j)]));
    return m;
}

TestFunction bump_test_function(double lo, double hi, double rate) {
    if (!(hi > lo)) fail(ErrorKind::invalid_test_function, "test function support is empty");
    const CutoffFunction c = make_cutoff();
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    TestFunction f;
    f.support_lo = lo;
    f.support_hi = hi;
    f.phi = [=](double t, double x) { return (1.0 + rate * t) * c.xi((x - mid) / half); };
    f.dt_phi = [=](double, double x) { return rate * c.xi((x - mid) / half); };
    f.dx_phi = [=](double t, double x) { return (1.0 + rate * t) * c.dxi((x - mid) / half) / half; };
    f.dxx_phi = [=](double t, double x) { return (1.0 + rate * t) * c.d2xi((x - mid) / half) / (half * half); };
    return f;
}

TestFunction zero_test_function(double lo, double hi) {
    auto zero = [](double, double) { return 0.0; };
    return {zero, zero, zero, zero, lo, hi};
}

namespace {

void validate_support(const Trajectory& traj, const TestFunction& f) {
    const Grid& g = traj.grid;
    if (!(f.support_lo > 0.0 && f.support_hi < g.length && f.support_lo < f.support_hi))
        fail(ErrorKind::invalid_test_function, "test function support must lie strictly inside (0, L)");
    for (const auto& s : traj.snapshots)
        for (std::size_t i = 0; i < g.cells; ++i) {
            const double x = g.x[i];
            if (x > f.support_lo && x < f.support_hi) continue;
            if (f.phi(s.t, x) != 0.0 || f.dx_phi(s.t, x) != 0.0)
                fail(ErrorKind::invalid_test_function,
                     "test function is nonzero outside its support at x=" + format_double(x));
        }
}

struct SnapshotFields {
    Field rho, u, w, sq, dsq;
};

SnapshotFields fields_of(const Grid& g, const FluidState& s, double eps) {
    const AugmentedState a = augment(g, s, eps);
    return {a.rho, a.u, a.w, a.sqrt_rho, a.d_sqrt_rho};
}

} // namespace

double weak_residual(const Trajectory& traj, const FluidParams& par, const TestFunction& f, WeakEquation which) {
    if (traj.snapshots.size() < 2) fail(ErrorKind::insufficient_data, "weak residual needs at least 2 snapshots");
    validate_support(traj, f);
    const Grid& g = traj.grid;
    const double eps = par.epsilon;
    const std::size_t n = g.cells;

    // Density of the conserved quantity tested against phi.
    auto density = [&](const SnapshotFields& a, std::size_t i) {
        switch (which) {
        case WeakEquation::mass: return a.rho[i];
        case WeakEquation::momentum_v: return a.rho[i] * (a.u[i] + a.w[i]);
        case WeakEquation::momentum_w: return a.rho[i] * a.w[i];
        }
        return 0.0;
    };

    std::vector<double> t, rate;
    double end_terms = 0.0;
    const auto& snaps = traj.snapshots;
    for (std::size_t k = 0; k < snaps.size(); ++k) {
        const auto& s = snaps[k];
        const SnapshotFields a = fields_of(g, s, eps);
        double transport = 0.0, visc = 0.0, drag = 0.0, press = 0.0, boundary = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = g.x[i];
            const double phi = f.phi(s.t, x), phi_t = f.dt_phi(s.t, x);
            const double phi_x = f.dx_phi(s.t, x), phi_xx = f.dxx_phi(s.t, x);
            const double q = density(a, i);
            boundary += q * phi;
            transport += q * phi_t + q * a.u[i] * phi_x;
            const double rho_phi_xx = a.sq[i] * a.sq[i] * phi_xx;
            switch (which) {
            case WeakEquation::mass:
                break;
            case WeakEquation::momentum_v: {
                const double v = a.u[i] + a.w[i];
                const double t1 = -eps * rho_phi_xx * v;
                const double t2 = -2.0 * eps * a.sq[i] * v * a.dsq[i] * phi_x;
                // Split forms of eps int rho D(v):grad phi and eps int rho A(v):grad phi,
                // each carrying the 1/2 of the symmetric/antisymmetric part.
                const double sym_split = 0.5 * ((t1 + t2) + (t1 + t2));
                const double antisym_split = 0.5 * (-(t1 + t2) + (t1 + t2));
                const double w_split =
                    -eps * rho_phi_xx * a.w[i] - 2.0 * eps * a.sq[i] * a.w[i] * a.dsq[i] * phi_x;
                visc += -sym_split - antisym_split + w_split;
                drag += -par.r1 * a.rho[i] * std::abs(a.u[i]) * a.u[i] * phi;
                press += pressure(a.rho[i], par.eos) * phi_x;
                break;
            }
            case WeakEquation::momentum_w: {
                const double ut_split =
                    -eps * rho_phi_xx * a.u[i] - 2.0 * eps * a.sq[i] * a.u[i] * a.dsq[i] * phi_x;
                visc += ut_split;
                break;
            }
            }
        }
        if (k == 0) end_terms += boundary * g.dx;
        if (k + 1 == snaps.size()) end_terms -= boundary * g.dx;
        t.push_back(s.t);
        rate.push_back((transport + visc + drag + press) * g.dx);
    }
    return end_terms + time_integral(t, rate);
}

double KEntropyBudget::max_residual() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, std::abs(r));
    return m;
}

KEntropyBudget k_entropy_report(const Trajectory& traj, const FluidParams& par) {
    if (traj.snapshots.size() < 2) fail(ErrorKind::insufficient_data, "budget needs at least 2 snapshots");
    const Grid& g = traj.grid;
    const double eps = par.epsilon;
    KEntropyBudget b;
    b.unreliable = traj.floor_dominated(0.01);
    std::vector<double> sym_rate, anti_rate, press_rate, damp_rate, grad_rate;
    for (const auto& s : traj.snapshots) {
        const AugmentedState a = augment(g, s, eps, par.rho_floor);
        b.unreliable = b.unreliable || a.flagged();
        const Field drho = gradient(g, s.rho);
        double kin = 0, pot = 0, sym = 0, anti = 0, pr = 0, dm = 0, dg = 0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            const double lambda = a.sqrt_rho[i] * a.u[i];
            const double grad = 2.0 * eps * a.d_sqrt_rho[i];
            kin += 0.5 * ((lambda + grad) * (lambda + grad) + grad * grad);
            pot += entropy_H(s.rho[i], par.eos);
            sym += a.sym[i] * a.sym[i];
            anti += a.antisym[i] * a.antisym[i];
            pr += dpressure(s.rho[i], par.eos) / s.rho[i] * drho[i] * drho[i];
            dm += s.rho[i] * std::abs(a.u[i]) * a.u[i] * a.u[i];
            dg += std::abs(a.u[i]) * a.u[i] * drho[i];
        }
        b.t.push_back(s.t);
        b.kinetic.push_back(kin * g.dx);
        b.potential.push_back(pot * g.dx);
        sym_rate.push_back(eps * sym * g.dx);
        anti_rate.push_back(eps * anti * g.dx);
        press_rate.push_back(eps * pr * g.dx);
        damp_rate.push_back(par.r1 * dm * g.dx);
        grad_rate.push_back(eps * par.r1 * dg * g.dx);
    }
    b.symmetric = cumulative_time_integral(b.t, sym_rate);
    b.antisymmetric = cumulative_time_integral(b.t, anti_rate);
    b.pressure_gradient = cumulative_time_integral(b.t, press_rate);
    b.damping = cumulative_time_integral(b.t, damp_rate);
    b.damping_gradient = cumulative_time_integral(b.t, grad_rate);
    const double e0 = b.kinetic[0] + b.potential[0];
    for (std::size_t k = 0; k < b.t.size(); ++k)
        b.residual.push_back(b.kinetic[k] + b.potential[k] + b.symmetric[k] + b.antisymmetric[k] +
                             b.pressure_gradient[k] + b.damping[k] + b.damping_gradient[k] - e0);
    return b;
}

DragAbsorption drag_absorption_check(const Trajectory& traj, const FluidParams& par) {
    if (traj.snapshots.size() < 2) fail(ErrorKind::insufficient_data, "drag check needs at least 2 snapshots");
    const Grid& g = traj.grid;
    std::vector<double> t, grad_rate, diss_rate, mass_rate, cube_rate;
    for (const auto& s : traj.snapshots) {
        const Field u = s.velocity();
        const Field du = gradient(g, u);
        const Field drho = gradient(g, s.rho);
        double gr = 0, di = 0, ma = 0, cu = 0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            gr += std::abs(u[i]) * u[i] * drho[i];
            di += s.rho[i] * du[i] * du[i];
            ma += s.rho[i];
            cu += s.rho[i] * std::abs(u[i]) * u[i] * u[i];
        }
        t.push_back(s.t);
        grad_rate.push_back(gr * g.dx);
        diss_rate.push_back(di * g.dx);
        mass_rate.push_back(ma * g.dx);
        cube_rate.push_back(cu * g.dx);
    }
    DragAbsorption d;
    d.drag_gradient = std::abs(par.epsilon * par.r1 * time_integral(t, grad_rate));
    d.bound = 0.5 * par.epsilon * time_integral(t, diss_rate) + par.r1 / 6.0 * time_integral(t, mass_rate) +
              par.r1 / 3.0 * time_integral(t, cube_rate);
    d.holds = d.drag_gradient <= d.bound;
    return d;
}

} // namespace vll
