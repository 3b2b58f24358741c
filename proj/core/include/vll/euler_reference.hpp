#pragma once

// Smooth compressible Euler reference: the viscous scheme run with eps = 0,
// r1 = 0 on an R-times refined grid, plus every derivative field the
// relative-energy terms consume.

#include <cstddef>
#include <vector>

#include "vll/eos.hpp"
#include "vll/field_core.hpp"
#include "vll/ns_solver.hpp"

namespace vll {

/// rho0(x) = background + density_amplitude * sin(2 pi k x / L)
/// u0(x)   = velocity_amplitude * sin(pi x / L) * x (L - x) / L^2
struct WellPreparedData {
    double background = 1.0;
    double density_amplitude = 0.1;
    int density_wavenumber = 1;
    double velocity_amplitude = 0.1;

    double rho(double x, double L) const;
    double u(double x, double L) const;
    double min_density() const;
};

struct InitialDatum {
    Field rho;
    Field u;
};

/// Samples the profiles at cell centers. Throws invalid_data if inf rho0 <= 0.
InitialDatum well_prepared_init(const Grid& grid, const WellPreparedData& spec);

struct SmoothnessReport {
    std::vector<double> t;
    std::vector<double> max_du;   // max |u_x| per snapshot
    std::vector<double> max_dlog; // max |(log rho)_x| per snapshot
    bool tripped = false;
    double trip_time = 0.0;
};

inline constexpr double smoothness_growth_limit = 50.0;

/// Tripped when a monitored maximum reaches 50x its initial value. A datum at
/// rest uses sound speed times max |(log rho)_x| as the velocity-gradient baseline.
SmoothnessReport smoothness_monitor(const Trajectory& traj, const EosParams& eos);

struct EulerReference {
    EosParams eos;
    Trajectory traj; // on the refined grid
    std::size_t refinement = 4;
    // Per-snapshot fine-grid derivative fields.
    std::vector<Field> du, d2u, dt_u, drho, dlog, d2log, dt_dlog;
    SmoothnessReport monitor;

    const Grid& grid() const { return traj.grid; }
    double t_begin() const { return traj.snapshots.front().t; }
    double t_end() const { return traj.snapshots.back().t; }
};

struct ReferenceOptions {
    double cadence = 0.002;
    double cfl = 0.5;
};

/// Throws horizon_too_long naming the trip time when the smoothness monitor trips.
EulerReference solve_reference(const Grid& coarse, const WellPreparedData& datum, const EosParams& eos,
                               double T, std::size_t refinement, const ReferenceOptions& options = {});

/// Builds the derivative series and monitor for an existing fine trajectory.
EulerReference make_reference(Trajectory fine, const EosParams& eos, std::size_t refinement);

/// Reference fields on a target grid.
struct ReferenceSample {
    double t = 0.0;
    Field rho, u, du, d2u, dt_u, drho, dlog, d2log, dt_dlog;
    Field p, dp, dH; // evaluated from the sampled density
};

/// Linear interpolation in time, averaging of each group of fine cells onto the
/// target grid. Throws range outside the stored horizon.
ReferenceSample sample(const EulerReference& ref, const Grid& grid, double t);

/// Second-order time derivative of a snapshot series at each stored time.
std::vector<Field> time_derivative(const std::vector<double>& t, const std::vector<Field>& f);

} // namespace vll
