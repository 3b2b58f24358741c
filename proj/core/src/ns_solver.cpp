#include "vll/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vll/error.hpp"
#include "vll/io.hpp"

namespace vll {

void FluidParams::validate() const {
    eos.validate();
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail(ErrorKind::invalid_configuration, "epsilon must be >= 0");
    if (!(r1 >= 0.0) || !std::isfinite(r1)) fail(ErrorKind::invalid_configuration, "r1 must be >= 0");
    if (!(rho_floor > 0.0)) fail(ErrorKind::invalid_configuration, "density floor must be positive");
}

double default_floor(std::span<const double> rho0) {
    if (rho0.empty()) fail(ErrorKind::insufficient_data, "empty density");
    const double mean = std::accumulate(rho0.begin(), rho0.end(), 0.0) / static_cast<double>(rho0.size());
    return 1e-8 * mean;
}

Field FluidState::velocity() const {
    Field u(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) u[i] = rho[i] > 0.0 ? m[i] / rho[i] : 0.0;
    return u;
}

FluidState make_state(double t, Field rho, std::span<const double> u) {
    if (rho.size() != u.size()) fail(ErrorKind::invalid_argument, "density and velocity sizes differ");
    FluidState s;
    s.t = t;
    s.m.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) s.m[i] = rho[i] * u[i];
    if (!s.m.empty()) {
        s.m.front() = 0.0;
        s.m.back() = 0.0;
    }
    s.rho = std::move(rho);
    return s;
}

namespace {

void check_finite(const FluidState& s) {
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        if (!std::isfinite(s.rho[i]) || !std::isfinite(s.m[i]))
            fail(ErrorKind::numerical_blowup, "non-finite value in cell " + std::to_string(i), s.t);
        if (!(s.rho[i] > 0.0))
            fail(ErrorKind::numerical_blowup, "non-positive density in cell " + std::to_string(i), s.t);
    }
}

} // namespace

Tendency rhs(const Grid& grid, const FluidState& s, const FluidParams& par) {
    const std::size_t n = s.rho.size();
    if (n != grid.cells || s.m.size() != n) fail(ErrorKind::invalid_argument, "state size differs from grid");
    check_finite(s);

    const double a = par.eos.a, g = par.eos.gamma;
    const double inv_dx = 1.0 / grid.dx;
    std::vector<double> u(n), p(n), speed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double q = std::pow(s.rho[i], g - 1.0);
        u[i] = s.m[i] / s.rho[i];
        p[i] = a * s.rho[i] * q;
        speed[i] = std::abs(u[i]) + std::sqrt(a * g * q);
    }

    // Face f sits between cells f-1 and f. Wall faces carry no mass; their
    // momentum flux only touches boundary cells, whose tendency is zeroed.
    std::vector<double> fm(n + 1, 0.0), fp(n + 1, 0.0);
    fp[0] = p[0];
    fp[n] = p[n - 1];
    const bool upwind = par.convection == Convection::rusanov;
    const double visc = 2.0 * par.epsilon;
    for (std::size_t f = 1; f < n; ++f) {
        const std::size_t l = f - 1, r = f;
        double mass = 0.5 * (s.m[l] + s.m[r]);
        double mom = 0.5 * (s.m[l] * u[l] + p[l] + s.m[r] * u[r] + p[r]);
        if (upwind) {
            const double alpha = std::max(speed[l], speed[r]);
            mass -= 0.5 * alpha * (s.rho[r] - s.rho[l]);
            mom -= 0.5 * alpha * (s.m[r] - s.m[l]);
        }
        mom -= visc * 0.5 * (s.rho[l] + s.rho[r]) * (u[r] - u[l]) * inv_dx;
        fm[f] = mass;
        fp[f] = mom;
    }

    Tendency out{Field(n), Field(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) out.rho[i] = -(fm[i + 1] - fm[i]) * inv_dx;
    for (std::size_t i = 1; i + 1 < n; ++i)
        out.m[i] = -(fp[i + 1] - fp[i]) * inv_dx - par.r1 * s.rho[i] * std::abs(u[i]) * u[i];
    return out;
}

double stable_dt(const Grid& grid, const FluidState& s, const FluidParams& par, double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0)) fail(ErrorKind::invalid_argument, "cfl must lie in (0, 1]");
    double dt = infinity;
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        const double speed = std::abs(s.m[i] / s.rho[i]) + sound_speed(s.rho[i], par.eos);
        dt = std::min(dt, grid.dx / speed);
    }
    if (par.epsilon > 0.0) dt = std::min(dt, grid.dx * grid.dx / (4.0 * par.epsilon));
    return cfl * dt;
}

namespace {

std::size_t apply_constraints(FluidState& s, double floor) {
    std::size_t hits = 0;
    for (double& r : s.rho) {
        if (r < floor) {
            r = floor;
            ++hits;
        }
    }
    s.m.front() = 0.0;
    s.m.back() = 0.0;
    return hits;
}

} // namespace

FluidState step_with_dt(const Grid& grid, const FluidState& s, const FluidParams& par, double dt,
                        StepStats* stats) {
    if (!(dt >= 1e-14)) fail(ErrorKind::stiffness, "time step underflow dt=" + format_double(dt), s.t);
    const std::size_t n = s.rho.size();

    const Tendency k1 = rhs(grid, s, par);
    FluidState s1 = s;
    for (std::size_t i = 0; i < n; ++i) {
        s1.rho[i] += dt * k1.rho[i];
        s1.m[i] += dt * k1.m[i];
    }
    s1.t = s.t + dt;
    std::size_t hits = apply_constraints(s1, par.rho_floor);

    const Tendency k2 = rhs(grid, s1, par);
    FluidState out = s;
    for (std::size_t i = 0; i < n; ++i) {
        out.rho[i] = 0.5 * s.rho[i] + 0.5 * (s1.rho[i] + dt * k2.rho[i]);
        out.m[i] = 0.5 * s.m[i] + 0.5 * (s1.m[i] + dt * k2.m[i]);
    }
    out.t = s.t + dt;
    hits += apply_constraints(out, par.rho_floor);
    check_finite(out);
    if (stats) {
        stats->dt = dt;
        stats->floor_hits = hits;
    }
    return out;
}

FluidState step(const Grid& grid, const FluidState& s, const FluidParams& par, double cfl, StepStats* stats) {
    return step_with_dt(grid, s, par, stable_dt(grid, s, par, cfl), stats);
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) t.push_back(s.t);
    return t;
}

bool Trajectory::floor_dominated(double fraction) const {
    for (std::size_t c : floor_cells)
        if (static_cast<double>(c) > fraction * static_cast<double>(grid.cells)) return true;
    return false;
}

namespace {

std::size_t cells_at_floor(const FluidState& s, double floor) {
    return static_cast<std::size_t>(
        std::count_if(s.rho.begin(), s.rho.end(), [&](double r) { return r <= floor; }));
}

} // namespace

Trajectory simulate(const Grid& grid, const FluidState& init, const FluidParams& par, double T, double cadence,
                    const SimulateOptions& opt) {
    par.validate();
    if (!(T > 0.0)) fail(ErrorKind::invalid_argument, "horizon must be positive");
    if (!(cadence > 0.0)) fail(ErrorKind::invalid_argument, "cadence must be positive");
    if (init.rho.size() != grid.cells) fail(ErrorKind::invalid_argument, "initial state size differs from grid");

    Trajectory traj;
    traj.grid = grid;
    FluidState s = init;
    traj.floor_activations += apply_constraints(s, par.rho_floor);
    traj.snapshots.push_back(s);
    traj.floor_cells.push_back(cells_at_floor(s, par.rho_floor));

    const double t0 = init.t;
    const double t_end = t0 + T;
    const auto outputs = static_cast<std::size_t>(std::ceil(T / cadence - 1e-9));
    for (std::size_t k = 1; k <= outputs; ++k) {
        const double target = k == outputs ? t_end : t0 + static_cast<double>(k) * cadence;
        while (s.t < target) {
            double dt = std::min(stable_dt(grid, s, par, opt.cfl), opt.dt_max);
            const double remaining = target - s.t;
            bool last = false;
            if (remaining <= dt * (1.0 + 1e-9)) {
                dt = remaining;
                last = true;
            } else if (remaining < 1.05 * dt) {
                dt = 0.5 * remaining;
            }
            StepStats st;
            s = step_with_dt(grid, s, par, dt, &st);
            if (last) s.t = target;
            ++traj.steps;
            traj.dt_history.push_back(st.dt);
            traj.floor_activations += st.floor_hits;
        }
        traj.snapshots.push_back(s);
        traj.floor_cells.push_back(cells_at_floor(s, par.rho_floor));
    }
    return traj;
}

namespace {

void require_snapshots(const Trajectory& traj) {
    if (traj.snapshots.size() < 2) fail(ErrorKind::insufficient_data, "budget needs at least 2 snapshots");
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

} // namespace

double EnergyBudget::max_residual() const { return max_of(residual); }
double BDEntropyBudget::max_residual() const { return max_of(residual); }

EnergyBudget energy_report(const Trajectory& traj, const FluidParams& par) {
    require_snapshots(traj);
    const Grid& g = traj.grid;
    EnergyBudget b;
    std::vector<double> diss_rate, damp_rate;
    for (const auto& s : traj.snapshots) {
        const Field u = s.velocity();
        const Field du = gradient(g, u);
        double kin = 0, pot = 0, diss = 0, damp = 0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            kin += 0.5 * s.m[i] * u[i];
            pot += entropy_H(s.rho[i], par.eos);
            diss += s.rho[i] * du[i] * du[i];
            damp += s.rho[i] * std::abs(u[i]) * u[i] * u[i];
        }
        b.t.push_back(s.t);
        b.kinetic.push_back(kin * g.dx);
        b.potential.push_back(pot * g.dx);
        diss_rate.push_back(2.0 * par.epsilon * diss * g.dx);
        damp_rate.push_back(par.r1 * damp * g.dx);
    }
    b.dissipation = cumulative_time_integral(b.t, diss_rate);
    b.damping = cumulative_time_integral(b.t, damp_rate);
    const double e0 = b.kinetic[0] + b.potential[0];
    for (std::size_t k = 0; k < b.t.size(); ++k)
        b.residual.push_back(b.kinetic[k] + b.potential[k] + b.dissipation[k] + b.damping[k] - e0);
    return b;
}

BDEntropyBudget bd_entropy_report(const Trajectory& traj, const FluidParams& par) {
    require_snapshots(traj);
    const Grid& g = traj.grid;
    const double eps = par.epsilon;
    BDEntropyBudget b;
    b.unreliable = traj.floor_dominated(0.01);
    std::vector<double> press_rate, damp_rate, damp_grad_rate;
    for (const auto& s : traj.snapshots) {
        const Field u = s.velocity();
        Field sq(g.cells);
        for (std::size_t i = 0; i < g.cells; ++i) sq[i] = std::sqrt(s.rho[i]);
        const Field dsq = gradient(g, sq);
        const Field drho = gradient(g, s.rho);
        double kin = 0, pot = 0, pr = 0, dm = 0, dg = 0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            const double w = sq[i] * u[i] + 2.0 * eps * dsq[i];
            kin += 0.5 * w * w;
            pot += entropy_H(s.rho[i], par.eos);
            pr += dpressure(s.rho[i], par.eos) / s.rho[i] * drho[i] * drho[i];
            dm += s.rho[i] * std::abs(u[i]) * u[i] * u[i];
            dg += std::abs(u[i]) * u[i] * drho[i];
        }
        b.t.push_back(s.t);
        b.augmented_kinetic.push_back(kin * g.dx);
        b.potential.push_back(pot * g.dx);
        press_rate.push_back(eps * pr * g.dx);
        damp_rate.push_back(par.r1 * dm * g.dx);
        damp_grad_rate.push_back(eps * par.r1 * dg * g.dx);
    }
    b.antisymmetric.assign(b.t.size(), 0.0);
    b.pressure_gradient = cumulative_time_integral(b.t, press_rate);
    b.damping = cumulative_time_integral(b.t, damp_rate);
    b.damping_gradient = cumulative_time_integral(b.t, damp_grad_rate);
    const double e0 = b.augmented_kinetic[0] + b.potential[0];
    for (std::size_t k = 0; k < b.t.size(); ++k)
        b.residual.push_back(b.augmented_kinetic[k] + b.potential[k] + b.antisymmetric[k] +
                             b.pressure_gradient[k] + b.damping[k] + b.damping_gradient[k] - e0);
    return b;
}

LemmaCheck lemma1_identity_check(const Trajectory& traj, const FluidParams&) {
    require_snapshots(traj);
    const Grid& g = traj.grid;
    LemmaCheck out;
    out.unreliable = traj.floor_activations > 0;
    std::vector<double> info, rate;
    for (const auto& s : traj.snapshots) {
        const Field u = s.velocity();
        Field logr(g.cells);
        for (std::size_t i = 0; i < g.cells; ++i) logr[i] = std::log(s.rho[i]);
        const Field q = gradient(g, logr);
        const Field du = gradient(g, u);
        const Field ddu = second_derivative(g, u);
        const Field drho = gradient(g, s.rho);
        double fi = 0, r = 0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            fi += 0.5 * s.rho[i] * q[i] * q[i];
            r += ddu[i] * drho[i] + s.rho[i] * du[i] * q[i] * q[i];
        }
        info.push_back(fi * g.dx);
        rate.push_back(r * g.dx);
    }
    const auto& snaps = traj.snapshots;
    for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
        const double h = snaps[k + 1].t - snaps[k].t;
        const double res = (info[k + 1] - info[k]) / h + 0.5 * (rate[k] + rate[k + 1]);
        out.t_mid.push_back(0.5 * (snaps[k].t + snaps[k + 1].t));
        out.residual.push_back(res);
        out.max_abs = std::max(out.max_abs, std::abs(res));
    }
    return out;
}

void write_snapshots(const Trajectory& traj, const std::filesystem::path& dir, const std::string& suffix) {
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const auto& s = traj.snapshots[k];
        std::ostringstream os;
        os << "t,x,rho,m,u\n";
        for (std::size_t i = 0; i < traj.grid.cells; ++i) {
            const double u = s.m[i] / s.rho[i];
            os << format_double(s.t) << ',' << format_double(traj.grid.x[i]) << ',' << format_double(s.rho[i])
               << ',' << format_double(s.m[i]) << ',' << format_double(u) << '\n';
        }
        write_file_atomic(dir / ("snap_" + std::to_string(k) + suffix + ".csv"), os.str());
    }
}

} // namespace vll
