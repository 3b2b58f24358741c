#include "quadrature_oracle.hpp"

#include <cmath>
#include <functional>

namespace vll::testing {
namespace {

using Real = long double;
using Column = std::vector<Real>;

Column widen(const std::vector<double>& f) { return Column(f.begin(), f.end()); }

Column diff(const Column& f, Real dx) {
    const std::size_t n = f.size();
    Column g(n);
    g[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * dx);
    g[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2 * dx);
    return g;
}

struct EosLong {
    Real a, gamma;
    Real p(Real r) const { return a * std::pow(r, gamma); }
    Real dp(Real r) const { return a * gamma * std::pow(r, gamma - 1); }
    Real H(Real r) const { return a * std::pow(r, gamma) / (gamma - 1); }
    Real dH(Real r) const { return a * gamma * std::pow(r, gamma - 1) / (gamma - 1); }
    Real relative(Real r, Real s) const { return H(r) - H(s) - dH(s) * (r - s); }
};

// Everything one snapshot contributes, each a column over cells.
struct Slice {
    Column rho, u, lr_x, w, v, sq, sq_x, rho_x, u_x, v_x, w_x;
    Column rho_e, u_e, du_e, dt_u_e, drho_e, dlog_e, d2log_e, dt_dlog_e;
    Column vbl, dvbl, dtvbl;
    Column ub, wb, vb, dub, dwb, dvb, dtub, vb_xx, wb_xx;
};

Slice slice(const RandomInstance& in, std::size_t k) {
    const auto& s = in.traj.snapshots[k];
    const auto& r = in.refs[k];
    const auto& l = in.layers[k];
    const Real dx = in.traj.grid.dx;
    const Real eps = in.params.epsilon;
    const std::size_t n = s.rho.size();

    Slice c;
    c.rho = widen(s.rho);
    c.u.resize(n);
    c.sq.resize(n);
    Column lr(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.u[i] = static_cast<Real>(s.m[i]) / c.rho[i];
        c.sq[i] = std::sqrt(c.rho[i]);
        lr[i] = std::log(c.rho[i]);
    }
    c.lr_x = diff(lr, dx);
    c.w.resize(n);
    c.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.w[i] = eps * c.lr_x[i];
        c.v[i] = c.u[i] + c.w[i];
    }
    c.sq_x = diff(c.sq, dx);
    c.rho_x = diff(c.rho, dx);
    c.u_x = diff(c.u, dx);
    c.v_x = diff(c.v, dx);
    c.w_x = diff(c.w, dx);

    c.rho_e = widen(r.rho);
    c.u_e = widen(r.u);
    c.du_e = widen(r.du);
    c.dt_u_e = widen(r.dt_u);
    c.drho_e = widen(r.drho);
    c.dlog_e = widen(r.dlog);
    c.d2log_e = widen(r.d2log);
    c.dt_dlog_e = widen(r.dt_dlog);

    const bool on = in.layer;
    c.vbl = on ? widen(l.v_bl) : Column(n, 0);
    c.dvbl = on ? widen(l.dv_bl) : Column(n, 0);
    c.dtvbl = on ? widen(l.dt_v_bl) : Column(n, 0);

    const Real dt_ = in.delta_tilde;
    c.ub.resize(n), c.wb.resize(n), c.vb.resize(n), c.dub.resize(n), c.dwb.resize(n), c.dvb.resize(n);
    c.dtub.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool wall = on && (i == 0 || i + 1 == n);
        c.ub[i] = wall ? 0 : c.u_e[i] - c.vbl[i];
        c.wb[i] = dt_ * c.dlog_e[i];
        c.vb[i] = c.ub[i] + c.wb[i];
        c.dub[i] = c.du_e[i] - c.dvbl[i];
        c.dwb[i] = dt_ * c.d2log_e[i];
        c.dvb[i] = c.dub[i] + c.dwb[i];
        c.dtub[i] = c.dt_u_e[i] - c.dtvbl[i];
    }
    c.vb_xx = diff(c.dvb, dx);
    c.wb_xx = diff(c.dwb, dx);
    return c;
}

} // namespace

OracleValues quadrature_oracle(const RandomInstance& in) {
    const std::size_t K = in.traj.snapshots.size();
    const std::size_t n = in.traj.grid.cells;
    const Real dx = in.traj.grid.dx;
    const Real eps = in.params.epsilon, r1 = in.params.r1;
    const EosLong eos{in.params.eos.a, in.params.eos.gamma};

    std::vector<Slice> S;
    std::vector<Real> t;
    for (std::size_t k = 0; k < K; ++k) {
        S.push_back(slice(in, k));
        t.push_back(in.traj.snapshots[k].t);
    }

    // Trapezoid weights over the snapshot times.
    std::vector<Real> wt(K, 0);
    for (std::size_t k = 1; k < K; ++k) {
        const Real h = t[k] - t[k - 1];
        wt[k - 1] += h / 2;
        wt[k] += h / 2;
    }
    using Integrand = std::function<Real(const Slice&, std::size_t)>;
    auto space = [&](const Slice& c, const Integrand& f) {
        Real s = 0;
        for (std::size_t i = 0; i < n; ++i) s += f(c, i);
        return s * dx;
    };
    auto spacetime = [&](const Integrand& f) {
        Real s = 0;
        for (std::size_t k = 0; k < K; ++k) s += wt[k] * space(S[k], f);
        return static_cast<double>(s);
    };

    OracleValues out;
    const Integrand density = [&](const Slice& c, std::size_t i) {
        const Real a = c.v[i] - c.vb[i], b = c.w[i] - c.wb[i];
        return c.rho[i] * (a * a + b * b) / 2 + eos.relative(c.rho[i], c.rho_e[i]);
    };
    const Integrand dissipation = [&](const Slice& c, std::size_t i) {
        const Real d = c.u_x[i] - c.dub[i];
        return eps * c.rho[i] * d * d;
    };
    Real history = 0;
    for (std::size_t k = 0; k < K; ++k) {
        if (k > 0) history += (t[k] - t[k - 1]) * (space(S[k], dissipation) + space(S[k - 1], dissipation)) / 2;
        out.energy.push_back(static_cast<double>(space(S[k], density) + history));
    }
    out.E0 = static_cast<double>(space(S[0], density));

    auto X = [](const Slice& c, std::size_t i) { return c.ub[i] - c.u[i]; };
    auto Y = [](const Slice& c, std::size_t i) { return c.dlog_e[i] - c.lr_x[i]; };

    out.R[0] = spacetime([&](const Slice& c, std::size_t i) { return c.rho[i] * c.dtvbl[i] * X(c, i); });
    out.R[1] = spacetime([&](const Slice& c, std::size_t i) { return eps * c.rho[i] * c.dtub[i] * Y(c, i); });
    out.R[2] = spacetime([&](const Slice& c, std::size_t i) { return eps * c.rho[i] * c.dt_dlog_e[i] * X(c, i); });
    out.R[3] =
        spacetime([&](const Slice& c, std::size_t i) { return 2 * eps * eps * c.rho[i] * c.dt_dlog_e[i] * Y(c, i); });
    out.R[4] = spacetime([&](const Slice& c, std::size_t i) {
        return c.rho[i] * (c.dub[i] * c.u[i] - c.du_e[i] * c.u_e[i]) * X(c, i);
    });
    out.R[5] = spacetime([&](const Slice& c, std::size_t i) { return eps * c.rho[i] * c.dub[i] * c.u[i] * Y(c, i); });
    out.R[6] =
        spacetime([&](const Slice& c, std::size_t i) { return eps * c.rho[i] * c.d2log_e[i] * c.u[i] * X(c, i); });
    out.R[7] = spacetime(
        [&](const Slice& c, std::size_t i) { return 2 * eps * eps * c.rho[i] * c.d2log_e[i] * c.u[i] * Y(c, i); });

    // Viscous part: split forms of eps int rho f_x phi_x for the (v, v_bar),
    // (w, v_bar) and (u, w_bar) pairings plus the symmetric-gradient terms.
    out.R[8] = spacetime([&](const Slice& c, std::size_t i) {
        auto split = [&](Real f, Real phi_x, Real phi_xx) {
            return -eps * c.rho[i] * f * phi_xx - 2 * eps * c.sq[i] * c.sq_x[i] * f * phi_x;
        };
        return split(c.v[i], c.dvb[i], c.vb_xx[i]) - split(c.w[i], c.dvb[i], c.vb_xx[i]) +
               split(c.u[i], c.dwb[i], c.wb_xx[i]) - 2 * eps * c.rho[i] * c.u_x[i] * c.dub[i] +
               eps * c.rho[i] * c.dub[i] * c.dub[i];
    });
    out.R[9] = spacetime([&](const Slice& c, std::size_t i) {
        const Real rho = c.rho[i], re = c.rho_e[i];
        const Real pressure_part =
            eos.p(re) * c.du_e[i] - eos.p(rho) * c.dvb[i] + eos.dp(re) * (rho - re) * c.du_e[i];
        const Real density_part = eps * (rho / re) * eos.dp(re) * c.drho_e[i] * (c.drho_e[i] / re - c.rho_x[i] / rho);
        const Real gradient_part = -eps * eos.dp(rho) * c.rho_x[i] * c.drho_e[i] / re;
        return pressure_part + density_part + gradient_part;
    });
    out.R[10] =
        spacetime([&](const Slice& c, std::size_t i) { return r1 * c.rho[i] * std::abs(c.u[i]) * c.u[i] * c.vb[i]; });
    return out;
}

} // namespace vll::testing
