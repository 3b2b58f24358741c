#pragma once

// Explicit solver for the 1D barotropic Navier-Stokes system with viscosity
// mu = eps * rho, lambda = 0 and quadratic drag:
//
//   rho_t + m_x = 0
//   m_t + (m^2/rho + p)_x = 2 eps (rho u_x)_x - r1 rho |u| u
//
// with no-slip momentum at the two boundary cells.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vll/eos.hpp"
#include "vll/field_core.hpp"

namespace vll {

enum class Convection { rusanov, centered };

struct FluidParams {
    EosParams eos;
    double epsilon = 0.01;
    double r1 = 0.0;
    double rho_floor = 1e-8;
    Convection convection = Convection::rusanov; // centered: order-of-accuracy tests only

    void validate() const;
};

/// 1e-8 times the mean of the initial density.
double default_floor(std::span<const double> rho0);

struct FluidState {
    double t = 0.0;
    Field rho;
    Field m;

    Field velocity() const;
};

/// Builds a state from density and velocity; zeroes the momentum at both
/// boundary cells.
FluidState make_state(double t, Field rho, std::span<const double> u);

struct Tendency {
    Field rho;
    Field m;
};

/// Throws numerical_blowup (with the state time) if any value is non-finite.
Tendency rhs(const Grid& grid, const FluidState& state, const FluidParams& params);

/// Largest stable step: cfl * min over cells of min(dx/(|u|+c), dx^2/(4 eps)).
double stable_dt(const Grid& grid, const FluidState& state, const FluidParams& params, double cfl);

struct StepStats {
    double dt = 0.0;
    std::size_t floor_hits = 0;
};

/// One SSP-RK2 step with the CFL step size.
FluidState step(const Grid& grid, const FluidState& state, const FluidParams& params, double cfl,
                StepStats* stats = nullptr);

/// One SSP-RK2 step with a prescribed dt (throws stiffness if dt < 1e-14).
FluidState step_with_dt(const Grid& grid, const FluidState& state, const FluidParams& params, double dt,
                        StepStats* stats = nullptr);

struct Trajectory {
    Grid grid;
    std::vector<FluidState> snapshots;
    std::size_t steps = 0;
    std::vector<double> dt_history;
    std::size_t floor_activations = 0;
    std::vector<std::size_t> floor_cells; // per snapshot, cells sitting at the floor

    std::vector<double> times() const;
    /// True when any snapshot has more than `fraction` of its cells at the floor.
    bool floor_dominated(double fraction = 0.01) const;
};

struct SimulateOptions {
    double cfl = 0.5;
    double dt_max = infinity; // optional cap, used by temporal refinement studies
};

/// Integrates to T, storing a snapshot every `cadence` (and exactly at T).
Trajectory simulate(const Grid& grid, const FluidState& init, const FluidParams& params, double T,
                    double cadence, const SimulateOptions& options = {});

struct EnergyBudget {
    std::vector<double> t;
    std::vector<double> kinetic;     // int 1/2 rho u^2
    std::vector<double> potential;   // int H(rho)
    std::vector<double> dissipation; // cumulative 2 eps int int rho |D(u)|^2
    std::vector<double> damping;     // cumulative r1 int int rho |u|^3
    std::vector<double> residual;    // left side minus initial energy

    double max_residual() const;
};

EnergyBudget energy_report(const Trajectory& traj, const FluidParams& params);

struct BDEntropyBudget {
    std::vector<double> t;
    std::vector<double> augmented_kinetic; // int 1/2 |sqrt(rho) u + 2 eps d_x sqrt(rho)|^2
    std::vector<double> potential;
    std::vector<double> antisymmetric;     // cumulative 2 eps int int |A|^2, zero in 1D
    std::vector<double> pressure_gradient; // cumulative eps int int p'(rho)/rho |rho_x|^2
    std::vector<double> damping;           // cumulative r1 int int rho |u|^3
    std::vector<double> damping_gradient;  // cumulative eps r1 int int |u| u rho_x
    std::vector<double> residual;
    bool unreliable = false;

    double max_residual() const;
};

BDEntropyBudget bd_entropy_report(const Trajectory& traj, const FluidParams& params);

struct LemmaCheck {
    std::vector<double> t_mid;    // midpoints of consecutive snapshot pairs
    std::vector<double> residual; // per pair
    double max_abs = 0.0;
    bool unreliable = false;
};

/// d/dt int 1/2 rho |(log rho)_x|^2 + int u_xx rho_x + int rho u_x |(log rho)_x|^2
/// with a centered time difference over each snapshot pair.
LemmaCheck lemma1_identity_check(const Trajectory& traj, const FluidParams& params);

/// Writes snap_<index><suffix>.csv with header t,x,rho,m,u.
void write_snapshots(const Trajectory& traj, const std::filesystem::path& dir,
                     const std::string& suffix = "");

} // namespace vll
