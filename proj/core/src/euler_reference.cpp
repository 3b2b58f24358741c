#include "vll/euler_reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "vll/error.hpp"
#include "vll/io.hpp"

namespace vll {

double WellPreparedData::rho(double x, double L) const {
    return background + density_amplitude * std::sin(2.0 * std::numbers::pi * density_wavenumber * x / L);
}

double WellPreparedData::u(double x, double L) const {
    return velocity_amplitude * std::sin(std::numbers::pi * x / L) * x * (L - x) / (L * L);
}

double WellPreparedData::min_density() const {
    return density_wavenumber == 0 ? background : background - std::abs(density_amplitude);
}

InitialDatum well_prepared_init(const Grid& grid, const WellPreparedData& spec) {
    if (!(spec.min_density() > 0.0))
        fail(ErrorKind::invalid_data, "initial density reaches " + format_double(spec.min_density()));
    InitialDatum d{Field(grid.cells), Field(grid.cells)};
    for (std::size_t i = 0; i < grid.cells; ++i) {
        d.rho[i] = spec.rho(grid.x[i], grid.length);
        d.u[i] = spec.u(grid.x[i], grid.length);
    }
    return d;
}

namespace {

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

Field log_of(const Field& rho) {
    Field out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = std::log(rho[i]);
    return out;
}

} // namespace

SmoothnessReport smoothness_monitor(const Trajectory& traj, const EosParams& eos) {
    SmoothnessReport rep;
    const Grid& g = traj.grid;
    for (const auto& s : traj.snapshots) {
        rep.t.push_back(s.t);
        rep.max_du.push_back(max_abs(gradient(g, s.velocity())));
        rep.max_dlog.push_back(max_abs(gradient(g, log_of(s.rho))));
    }
    if (rep.t.empty()) return rep;

    const auto& rho0 = traj.snapshots.front().rho;
    const double mean_rho = std::accumulate(rho0.begin(), rho0.end(), 0.0) / static_cast<double>(rho0.size());
    double base_du = rep.max_du[0];
    if (base_du == 0.0) base_du = sound_speed(mean_rho, eos) * rep.max_dlog[0];
    const double base_dlog = rep.max_dlog[0];

    for (std::size_t k = 0; k < rep.t.size(); ++k) {
        const bool du_trip = base_du > 0.0 && rep.max_du[k] >= smoothness_growth_limit * base_du;
        const bool dl_trip = base_dlog > 0.0 && rep.max_dlog[k] >= smoothness_growth_limit * base_dlog;
        if (du_trip || dl_trip) {
            rep.tripped = true;
            rep.trip_time = rep.t[k];
            break;
        }
    }
    return rep;
}

std::vector<Field> time_derivative(const std::vector<double>& t, const std::vector<Field>& f) {
    const std::size_t K = t.size();
    if (K < 2 || f.size() != K) fail(ErrorKind::insufficient_data, "time derivative needs at least 2 snapshots");
    const std::size_t n = f[0].size();
    std::vector<Field> out(K, Field(n));
    if (K == 2) {
        const double h = t[1] - t[0];
        for (std::size_t i = 0; i < n; ++i) out[0][i] = out[1][i] = (f[1][i] - f[0][i]) / h;
        return out;
    }
    for (std::size_t k = 0; k < K; ++k) {
        std::size_t a, b, c;
        if (k == 0) {
            a = 0, b = 1, c = 2;
        } else if (k + 1 == K) {
            a = K - 3, b = K - 2, c = K - 1;
        } else {
            a = k - 1, b = k, c = k + 1;
        }
        // Lagrange weights for the derivative at t[k] through t[a], t[b], t[c].
        const double x = t[k], ta = t[a], tb = t[b], tc = t[c];
        const double wa = ((x - tb) + (x - tc)) / ((ta - tb) * (ta - tc));
        const double wb = ((x - ta) + (x - tc)) / ((tb - ta) * (tb - tc));
        const double wc = ((x - ta) + (x - tb)) / ((tc - ta) * (tc - tb));
        for (std::size_t i = 0; i < n; ++i) out[k][i] = wa * f[a][i] + wb * f[b][i] + wc * f[c][i];
    }
    return out;
}

EulerReference make_reference(Trajectory fine, const EosParams& eos, std::size_t refinement) {
    EulerReference ref;
    ref.eos = eos;
    ref.refinement = refinement;
    ref.traj = std::move(fine);
    const Grid& g = ref.traj.grid;
    std::vector<Field> u_series;
    for (const auto& s : ref.traj.snapshots) {
        Field u = s.velocity();
        Field du = gradient(g, u);
        Field lg = log_of(s.rho);
        Field dl = gradient(g, lg);
        ref.d2u.push_back(second_derivative(g, u));
        ref.d2log.push_back(second_derivative(g, lg));
        ref.drho.push_back(gradient(g, s.rho));
        ref.du.push_back(std::move(du));
        ref.dlog.push_back(std::move(dl));
        u_series.push_back(std::move(u));
    }
    const auto times = ref.traj.times();
    ref.dt_u = time_derivative(times, u_series);
    ref.dt_dlog = time_derivative(times, ref.dlog);
    ref.monitor = smoothness_monitor(ref.traj, eos);
    return ref;
}

EulerReference solve_reference(const Grid& coarse, const WellPreparedData& datum, const EosParams& eos, double T,
                               std::size_t refinement, const ReferenceOptions& opt) {
    if (refinement < 1) fail(ErrorKind::invalid_configuration, "reference refinement must be >= 1");
    const Grid fine = make_grid(coarse.length, coarse.cells * refinement);
    const InitialDatum d = well_prepared_init(fine, datum);
    FluidParams par;
    par.eos = eos;
    par.epsilon = 0.0;
    par.r1 = 0.0;
    par.rho_floor = default_floor(d.rho);
    Trajectory traj = simulate(fine, make_state(0.0, d.rho, d.u), par, T, opt.cadence, {opt.cfl});
    EulerReference ref = make_reference(std::move(traj), eos, refinement);
    if (ref.monitor.tripped)
        fail(ErrorKind::horizon_too_long, "reference gradients grew 50x; shorten the horizon", ref.monitor.trip_time);
    return ref;
}

namespace {

Field aggregate(const Field& a, const Field& b, double wa, double wb, std::size_t q, std::size_t n) {
    Field out(n, 0.0);
    const double inv = 1.0 / static_cast<double>(q);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = i * q; j < (i + 1) * q; ++j) s += wa * a[j] + wb * b[j];
        out[i] = s * inv;
    }
    return out;
}

} // namespace

ReferenceSample sample(const EulerReference& ref, const Grid& grid, double t) {
    const Grid& fine = ref.grid();
    if (fine.cells % grid.cells != 0 || std::abs(fine.length - grid.length) > 1e-12 * grid.length)
        fail(ErrorKind::invalid_argument, "reference grid is not an integer refinement of the target grid");
    const auto& snaps = ref.traj.snapshots;
    const double tol = 1e-12 * std::max(1.0, std::abs(ref.t_end()));
    if (t < ref.t_begin() - tol || t > ref.t_end() + tol)
        fail(ErrorKind::range, "sample time " + format_double(t) + " outside reference horizon");

    std::size_t k = 0;
    while (k + 2 < snaps.size() && snaps[k + 1].t < t) ++k;
    if (snaps.size() == 1) k = 0;
    double wa = 1.0, wb = 0.0;
    std::size_t kb = k;
    if (snaps.size() > 1) {
        kb = k + 1;
        const double h = snaps[kb].t - snaps[k].t;
        wb = std::clamp((t - snaps[k].t) / h, 0.0, 1.0);
        wa = 1.0 - wb;
    }
    const std::size_t q = fine.cells / grid.cells;
    const std::size_t n = grid.cells;

    ReferenceSample s;
    s.t = t;
    s.rho = aggregate(snaps[k].rho, snaps[kb].rho, wa, wb, q, n);
    const Field ua = snaps[k].velocity(), ub = snaps[kb].velocity();
    s.u = aggregate(ua, ub, wa, wb, q, n);
    s.du = aggregate(ref.du[k], ref.du[kb], wa, wb, q, n);
    s.d2u = aggregate(ref.d2u[k], ref.d2u[kb], wa, wb, q, n);
    s.dt_u = aggregate(ref.dt_u[k], ref.dt_u[kb], wa, wb, q, n);
    s.drho = aggregate(ref.drho[k], ref.drho[kb], wa, wb, q, n);
    s.dlog = aggregate(ref.dlog[k], ref.dlog[kb], wa, wb, q, n);
    s.d2log = aggregate(ref.d2log[k], ref.d2log[kb], wa, wb, q, n);
    s.dt_dlog = aggregate(ref.dt_dlog[k], ref.dt_dlog[kb], wa, wb, q, n);
    s.p.resize(n);
    s.dp.resize(n);
    s.dH.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.p[i] = pressure(s.rho[i], ref.eos);
        s.dp[i] = dpressure(s.rho[i], ref.eos);
        s.dH[i] = entropy_dH(s.rho[i], ref.eos);
    }
    return s;
}

} // namespace vll
