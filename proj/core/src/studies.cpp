#include "vll/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "vll/augmented.hpp"
#include "vll/error.hpp"
#include "vll/euler_reference.hpp"
#include "vll/field_core.hpp"
#include "vll/ns_solver.hpp"

namespace vll {

namespace {

void finish(OrderStudy& s) { s.order = s.h.size() >= 2 ? loglog_slope(s.h, s.error) : 0.0; }

} // namespace

OrderStudy derivation_identity_study(const std::vector<std::size_t>& points, double eps) {
    OrderStudy s{"derivation identity", {}, {}, 0.0};
    for (std::size_t n : points) {
        const Grid2D g = make_periodic_grid(n);
        const Field2D rho = sample(g, [](double x, double y) { return 2.0 + std::sin(x) * std::sin(y); });
        const Field2D ux = sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); });
        const Field2D uy = sample(g, [](double x, double y) { return -std::cos(x) * std::sin(y); });
        s.h.push_back(g.h);
        s.error.push_back(derivation_identity_residual(g, rho, ux, uy, eps).max_abs);
    }
    finish(s);
    return s;
}

OrderStudy curl_free_study(const std::vector<std::size_t>& points) {
    OrderStudy s{"curl-free flux", {}, {}, 0.0};
    for (std::size_t n : points) {
        const Grid2D g = make_unit_square_grid(n);
        s.h.push_back(g.h);
        s.error.push_back(curl_free_check(g, sample(g, [](double x, double y) { return std::exp(x * y); })));
    }
    finish(s);
    return s;
}

OrderStudy lemma_identity_study(const std::vector<std::size_t>& cells) {
    constexpr double L = 1.0, strength = 0.05;
    const double k = std::numbers::pi / L;
    auto amp = [](double t) { return 1.0 + 0.5 * std::sin(3.0 * t); };
    auto amp_t = [](double t) { return 1.5 * std::cos(3.0 * t); };
    auto g = [&](double x) { return strength * std::pow(std::sin(k * x), 4); };
    auto g_x = [&](double x) { return strength * 4.0 * k * std::pow(std::sin(k * x), 3) * std::cos(k * x); };

    OrderStudy s{"log-density information identity", {}, {}, 0.0};
    for (std::size_t n : cells) {
        Trajectory traj;
        traj.grid = make_grid(L, n);
        const double dt = 0.5 * traj.grid.dx;
        for (int step = 0; step < 5; ++step) {
            const double t = 0.1 + step * dt;
            FluidState st;
            st.t = t;
            for (double x : traj.grid.x) {
                st.rho.push_back(2.0 + amp(t) * g_x(x));
                st.m.push_back(-amp_t(t) * g(x));
            }
            traj.snapshots.push_back(std::move(st));
            traj.floor_cells.push_back(0);
        }
        s.h.push_back(traj.grid.dx);
        s.error.push_back(lemma1_identity_check(traj, FluidParams{}).max_abs);
    }
    finish(s);
    return s;
}

OrderStudy layer_calculus_study(LayerIdentity which, const std::vector<std::size_t>& cells,
                                const CutoffFunction& cutoff) {
    static constexpr const char* names[] = {"layer first derivative", "layer first derivative (ztilde form)",
                                            "layer second derivative"};
    OrderStudy s{names[static_cast<int>(which)], {}, {}, 0.0};
    for (std::size_t n : cells) {
        const Grid grid = make_grid(1.0, n);
        const Field u(n, 1.0), zero(n, 0.0);
        const LayerCalculusResiduals r = layer_calculus_check(grid, {u, zero, zero, {}}, 0.1, 1.0, cutoff);
        s.h.push_back(grid.dx);
        switch (which) {
        case LayerIdentity::first_derivative: s.error.push_back(r.first_derivative); break;
        case LayerIdentity::first_derivative_ztilde: s.error.push_back(r.first_derivative_ztilde); break;
        case LayerIdentity::second_derivative: s.error.push_back(r.second_derivative); break;
        }
    }
    finish(s);
    return s;
}

double BudgetLadder::drift(const std::vector<double>& c) {
    if (c.empty()) return 1.0;
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    if (*hi == 0.0) return 1.0;
    if (*lo <= 0.0) return infinity;
    return *hi / *lo;
}

BudgetLadder budget_ladder(const std::vector<std::size_t>& cells, double eps, double T, double cadence, double cfl) {
    BudgetLadder ladder;
    for (std::size_t n : cells) {
        const auto start = std::chrono::steady_clock::now();
        const Grid grid = make_grid(1.0, n);
        const InitialDatum d = well_prepared_init(grid, WellPreparedData{});
        FluidParams par;
        par.epsilon = eps;
        par.rho_floor = default_floor(d.rho);
        const Trajectory traj = simulate(grid, make_state(0.0, d.rho, d.u), par, T, cadence, {cfl});

        BudgetLevel lv;
        lv.cells = n;
        lv.dx = grid.dx;
        lv.dt = *std::max_element(traj.dt_history.begin(), traj.dt_history.end());
        for (double r : energy_report(traj, par).residual) lv.energy = std::max(lv.energy, std::abs(r));
        const auto bd = bd_entropy_report(traj, par).residual;
        lv.bd = *std::max_element(bd.begin(), bd.end());
        lv.k_entropy = k_entropy_report(traj, par).max_residual();
        lv.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const double scale = lv.dx + lv.dt * lv.dt;
        ladder.c_energy.push_back(lv.energy / scale);
        ladder.c_bd.push_back(std::max(0.0, lv.bd) / scale);
        ladder.c_k_entropy.push_back(lv.k_entropy / scale);
        ladder.levels.push_back(lv);
    }
    return ladder;
}

} // namespace vll
