#pragma once

// Augmented variables v = u + w, w = eps (log rho)_x, the velocity-gradient
// split, weak-form residuals of the augmented system, its kinetic-entropy
// budget, and static 2D identity checks on manufactured fields.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vll/field_core.hpp"
#include "vll/ns_solver.hpp"

namespace vll {

struct AugmentedState {
    double t = 0.0;
    double epsilon = 0.0;
    Field rho, u, w, v;
    Field sqrt_rho, d_sqrt_rho;
    Field sym;     // sqrt(rho) D(u)
    Field antisym; // sqrt(rho) A(u), identically zero in 1D
    CellMask floor_cells;

    bool flagged() const { return floor_cells.count() > 0; }
    /// 2 eps (sqrt rho)_x / sqrt rho; agrees with w up to the gradient stencil error.
    Field w_from_sqrt() const;
};

/// Cells at or below `floor` are flagged and excluded from sym/antisym.
AugmentedState augment(const Grid& grid, const FluidState& state, double epsilon, double floor = 0.0);

/// Square tensor field stored component-wise, comp[i * dim + j] = T_ij.
struct TensorField {
    std::size_t dim = 1;
    std::vector<Field> comp;

    const Field& at(std::size_t i, std::size_t j) const { return comp[i * dim + j]; }
    Field& at(std::size_t i, std::size_t j) { return comp[i * dim + j]; }
};

struct SymAntisym {
    TensorField sym;
    TensorField antisym;
};

SymAntisym sym_antisym(const TensorField& grad);

// ---------------------------------------------------------------------------
// Static 2D checks.

/// Periodic n x n grid on [0, 2 pi)^2 (`periodic`) or cell centers of [0, 1]^2.
struct Grid2D {
    std::size_t n = 0;
    double h = 0.0;
    bool periodic = true;
    std::vector<double> coord; // 1D coordinates, shared by both axes

    std::size_t index(std::size_t i, std::size_t j) const { return i + n * j; }
};

Grid2D make_periodic_grid(std::size_t n);
Grid2D make_unit_square_grid(std::size_t n);

using Field2D = std::vector<double>;
using Scalar2D = std::function<double(double, double)>;

Field2D sample(const Grid2D& grid, const Scalar2D& f);

/// Centered differences; periodic wrap or one-sided-free interior (edges left 0).
Field2D diff_x(const Grid2D& grid, const Field2D& f);
Field2D diff_y(const Grid2D& grid, const Field2D& f);

struct VectorResidual {
    Field2D x, y;
    double max_abs = 0.0;
};

/// 2 eps grad div(rho u) minus
/// 2 eps div(rho u (x) grad log rho + rho grad log rho (x) u) - 2 eps lap(rho u) + 4 eps div(rho D(u)).
/// Periodic grid. Throws domain for rho <= 0.
VectorResidual derivation_identity_residual(const Grid2D& grid, const Field2D& rho, const Field2D& ux,
                                            const Field2D& uy, double epsilon);

/// div(u (x) grad rho) - div(rho u (x) grad log rho).
VectorResidual cancellation_residual(const Grid2D& grid, const Field2D& rho, const Field2D& ux, const Field2D& uy);

/// max |d_x d_y log rho - d_y d_x log rho|.
double hessian_symmetry_residual(const Grid2D& grid, const Field2D& rho);

/// Max over interior points of |curl(rho grad log rho)|. Throws domain for rho <= 0.
double curl_free_check(const Grid2D& grid, const Field2D& rho);

// ---------------------------------------------------------------------------
// Weak formulation.

/// phi(t, x) with analytic derivatives and its declared spatial support.
struct TestFunction {
    std::function<double(double, double)> phi, dt_phi, dx_phi, dxx_phi;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

/// (1 + rate t) * bump on (lo, hi).
TestFunction bump_test_function(double lo, double hi, double rate = 0.5);
TestFunction zero_test_function(double lo, double hi);

enum class WeakEquation { mass, momentum_v, momentum_w };

/// Signed residual of the chosen weak equation over the trajectory; viscous
/// integrals use the sqrt(rho) split forms. Throws invalid_test_function when
/// the support is not inside (0, L) or phi is nonzero outside it.
double weak_residual(const Trajectory& traj, const FluidParams& params, const TestFunction& phi,
                     WeakEquation which);

struct KEntropyBudget {
    std::vector<double> t;
    std::vector<double> kinetic;   // int 1/2 (|Lambda + 2 eps d sqrt rho|^2 + |2 eps d sqrt rho|^2)
    std::vector<double> potential; // int H(rho)
    std::vector<double> symmetric;         // cumulative eps int int |S|^2
    std::vector<double> antisymmetric;     // cumulative eps int int |A|^2
    std::vector<double> pressure_gradient; // cumulative eps int int p'/rho |rho_x|^2
    std::vector<double> damping;           // cumulative r1 int int rho |u|^3
    std::vector<double> damping_gradient;  // cumulative eps r1 int int |u| u rho_x
    std::vector<double> residual;
    bool unreliable = false;

    double max_residual() const;
};

KEntropyBudget k_entropy_report(const Trajectory& traj, const FluidParams& params);

struct DragAbsorption {
    double drag_gradient = 0.0; // |eps r1 int int |u| u rho_x|
    double bound = 0.0;         // 1/2 eps int int rho u_x^2 + r1/6 int int rho + r1/3 int int rho |u|^3
    bool holds = true;
};

DragAbsorption drag_absorption_check(const Trajectory& traj, const FluidParams& params);

} // namespace vll
