#include <cmath>

#include <gtest/gtest.h>

#include "vll/error.hpp"
#include "vll/euler_reference.hpp"

using namespace vll;

namespace {

WellPreparedData flat() {
    WellPreparedData d;
    d.density_amplitude = 0.0;
    d.velocity_amplitude = 0.0;
    return d;
}

// Static trajectory holding `snapshots` copies of the given fields.
Trajectory frozen(const Grid& g, const Field& rho, const Field& m, int snapshots = 3) {
    Trajectory tr;
    tr.grid = g;
    for (int k = 0; k < snapshots; ++k) {
        tr.snapshots.push_back({0.1 * k, rho, m});
        tr.floor_cells.push_back(0);
    }
    return tr;
}

} // namespace

TEST(WellPrepared, SmoothDatumVanishesAtWalls) {
    const WellPreparedData d;
    EXPECT_NEAR(d.u(0.0, 1.0), 0.0, 1e-300);
    EXPECT_NEAR(d.u(1.0, 1.0), 0.0, 1e-17);
    EXPECT_NEAR(d.rho(0.25, 1.0), 1.1, 1e-15);
}

TEST(WellPrepared, FlatDatumIsEquilibrium) {
    const Grid g = make_grid(1.0, 16);
    const InitialDatum d = well_prepared_init(g, flat());
    for (std::size_t i = 0; i < g.cells; ++i) {
        EXPECT_EQ(d.rho[i], 1.0);
        EXPECT_EQ(d.u[i], 0.0);
    }
}

TEST(WellPrepared, DensityTouchingZeroIsInvalid) {
    WellPreparedData d;
    d.density_amplitude = 1.5;
    try {
        well_prepared_init(make_grid(1.0, 16), d);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_data);
    }
}

TEST(Reference, EquilibriumIsConstantInTime) {
    const Grid g = make_grid(1.0, 16);
    const EulerReference ref = solve_reference(g, flat(), {}, 0.1, 4, {0.01, 0.5});
    EXPECT_EQ(ref.grid().cells, 64u);
    EXPECT_FALSE(ref.monitor.tripped);
    for (double v : ref.monitor.max_du) EXPECT_EQ(v, 0.0);
    const ReferenceSample s = sample(ref, g, 0.037);
    for (std::size_t i = 0; i < g.cells; ++i) {
        EXPECT_NEAR(s.rho[i], 1.0, 1e-14);
        for (const Field* f : {&s.u, &s.du, &s.d2u, &s.dt_u, &s.drho, &s.dlog, &s.d2log, &s.dt_dlog})
            EXPECT_NEAR((*f)[i], 0.0, 1e-12);
    }
}

TEST(Reference, SmoothRunInvariants) {
    const Grid g = make_grid(1.0, 32);
    const EosParams eos;
    const EulerReference ref = solve_reference(g, WellPreparedData{}, eos, 0.2, 4, {0.01, 0.5});
    for (const auto& s : ref.traj.snapshots) {
        EXPECT_EQ(s.m.front(), 0.0);
        EXPECT_EQ(s.m.back(), 0.0);
        for (double r : s.rho) {
            EXPECT_GT(r, 0.0);
            const double p = pressure(r, eos);
            EXPECT_NEAR(entropy_dH(r, eos) * r - entropy_H(r, eos), p, 1e-14 * p);
        }
    }
}

TEST(Reference, SmallAmplitudeEnergyDriftShrinksWithGrid) {
    auto drift = [](std::size_t n) {
        const EulerReference ref = solve_reference(make_grid(1.0, n), WellPreparedData{}, {}, 0.1, 4, {0.01, 0.5});
        FluidParams par;
        par.epsilon = 0.0;
        double worst = 0.0;
        for (double r : energy_report(ref.traj, par).residual) worst = std::max(worst, std::abs(r));
        return worst;
    };
    const double coarse = drift(32), fine = drift(64);
    EXPECT_LT(fine, coarse);
    EXPECT_GT(std::log2(coarse / fine), 0.8);
}

TEST(Reference, SteepeningTripsMonitor) {
    WellPreparedData d;
    d.velocity_amplitude = 8.0;
    try {
        solve_reference(make_grid(1.0, 64), d, {}, 0.5, 4, {0.01, 0.5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::horizon_too_long);
        ASSERT_TRUE(e.time());
        EXPECT_GT(*e.time(), 0.0);
        EXPECT_LT(*e.time(), 0.5);
    }
}

TEST(Reference, SelfConvergesUnderRefinement) {
    const Grid g = make_grid(1.0, 16);
    auto at_end = [&](std::size_t r) {
        return sample(solve_reference(g, WellPreparedData{}, {}, 0.1, r, {0.01, 0.5}), g, 0.1);
    };
    const ReferenceSample a = at_end(4), b = at_end(8), c = at_end(16);
    double d1 = 0, d2 = 0;
    for (std::size_t i = 0; i < g.cells; ++i) {
        d1 += std::abs(a.rho[i] - b.rho[i]) + std::abs(a.u[i] - b.u[i]);
        d2 += std::abs(b.rho[i] - c.rho[i]) + std::abs(b.u[i] - c.u[i]);
    }
    EXPECT_GE(std::log2(d1 / d2), 0.9);
}

TEST(Sample, StoredTimeIsExactAggregation) {
    const Grid g = make_grid(1.0, 8);
    const EulerReference ref = solve_reference(g, WellPreparedData{}, {}, 0.05, 4, {0.01, 0.5});
    const auto& snap = ref.traj.snapshots[2];
    const ReferenceSample s = sample(ref, g, snap.t);
    for (std::size_t i = 0; i < g.cells; ++i) {
        double avg = 0.0;
        for (std::size_t j = 4 * i; j < 4 * i + 4; ++j) avg += snap.rho[j];
        EXPECT_NEAR(s.rho[i], avg / 4, 1e-15);
    }
}

TEST(Sample, LogGradientOfExponential) {
    const Grid fine = make_grid(1.0, 512);
    Field rho(fine.cells);
    for (std::size_t i = 0; i < fine.cells; ++i) rho[i] = std::exp(fine.x[i]);
    const EulerReference ref = make_reference(frozen(fine, rho, Field(fine.cells, 0.0)), {}, 4);
    const ReferenceSample s = sample(ref, make_grid(1.0, 128), 0.1);
    for (double v : s.dlog) EXPECT_NEAR(v, 1.0, 10 * fine.dx * fine.dx);
}

TEST(Sample, OutsideHorizonIsRangeError) {
    const Grid g = make_grid(1.0, 8);
    const EulerReference ref = solve_reference(g, flat(), {}, 0.05, 4, {0.01, 0.5});
    try {
        sample(ref, g, 0.06);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::range);
    }
}

TEST(SmoothnessMonitor, EquilibriumDoesNotTrip) {
    const Grid g = make_grid(1.0, 16);
    const SmoothnessReport r = smoothness_monitor(frozen(g, Field(16, 1.0), Field(16, 0.0)), {});
    EXPECT_FALSE(r.tripped);
    for (double v : r.max_du) EXPECT_EQ(v, 0.0);
    for (double v : r.max_dlog) EXPECT_EQ(v, 0.0);
}

TEST(SmoothnessMonitor, LinearVelocitySlope) {
    const Grid g = make_grid(1.0, 16);
    Field m(16);
    for (std::size_t i = 0; i < 16; ++i) m[i] = 0.7 * g.x[i];
    const SmoothnessReport r = smoothness_monitor(frozen(g, Field(16, 1.0), m), {});
    EXPECT_NEAR(r.max_du.front(), 0.7, 1e-13);
}

TEST(TimeDerivative, QuadraticSeriesIsExact) {
    const std::vector<double> t{0.0, 0.1, 0.25, 0.3, 0.5};
    std::vector<Field> f;
    for (double s : t) f.push_back({s * s, 3.0 * s});
    const auto d = time_derivative(t, f);
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_NEAR(d[k][0], 2.0 * t[k], 1e-12);
        EXPECT_NEAR(d[k][1], 3.0, 1e-12);
    }
}
