#pragma once

// Kato-type fake boundary layer v_bl = xi(d / delta) u^E with delta = c eps,
// its derivative calculus and the norm-scaling study.

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vll/field_core.hpp"

namespace vll {

struct CutoffFunction {
    std::function<double(double)> xi;
    std::function<double(double)> dxi;
    std::function<double(double)> d2xi;
};

/// xi(r) = exp(1 - 1/(1 - r^2)) on [0, 1), zero beyond.
CutoffFunction make_cutoff();

/// Euler velocity on the grid. `d2u` and `dt_u` may be empty; the matching
/// layer fields are then left zero.
struct LayerInput {
    std::span<const double> u;
    std::span<const double> du;
    std::span<const double> d2u = {};
    std::span<const double> dt_u = {};
};

struct LayerFields {
    double delta = 0.0;
    Field z;      // xi(d/delta)
    Field ztilde; // r xi'(r)
    Field zhat;   // r^2 xi'(r)
    Field zcheck; // r^2 xi''(r)
    Field dz;     // xi'(r) d_x(d) / delta
    Field d2z;    // xi''(r) / delta^2
    Field v_bl;
    Field dv_bl;  // z u_x + u dz
    Field d2v_bl; // z u_xx + 2 dz u_x + d2z u
    Field dt_v_bl;
};

/// Throws invalid_argument for eps <= 0 or c <= 0, under_resolved_layer when
/// delta < 2 dx or when the two strips overlap.
LayerFields fake_layer(const Grid& grid, const LayerInput& input, double epsilon, double c,
                       const CutoffFunction& cutoff = make_cutoff());

/// Max-norm residuals of the layer derivative identities against finite
/// differences of v_bl.
struct LayerCalculusResiduals {
    double first_derivative = 0.0;       // d_x v_bl  vs  z u_x + (xi'/delta) d_x(d) u
    double first_derivative_ztilde = 0.0; // same with xi'/delta written as ztilde/d
    double second_derivative = 0.0;      // d_xx v_bl vs the ztilde/d and zcheck/d^2 split
    double ztilde_identity = 0.0;        // |ztilde/d - xi'/delta|
};

/// `input` must carry analytic u, u_x and u_xx.
LayerCalculusResiduals layer_calculus_check(const Grid& grid, const LayerInput& input, double epsilon, double c,
                                            const CutoffFunction& cutoff = make_cutoff());

/// Velocity field u(t, x) with analytic space and time derivatives.
struct LayerProfile {
    std::function<double(double, double)> u;
    std::function<double(double, double)> dt_u;
    std::function<double(double, double)> dx_u;
};

/// u = (1 + t/2)(1 + sin^2(pi x / L) / 10): nonzero at the walls.
LayerProfile wall_tangential_profile(double length);

struct ScalingOptions {
    double length = 1.0;
    std::size_t min_cells = 64;
    double cells_per_layer = 64.0;
    std::vector<double> times{0.0, 0.5, 1.0};
};

struct ScalingRow {
    std::string norm_name;
    double epsilon = 0.0;
    double value = 0.0;
    double fitted_exponent = 0.0;
    double paper_exponent = 0.0;
};

struct ScalingTable {
    std::vector<ScalingRow> rows;

    /// Fitted exponent for one norm (first matching row).
    double fitted(const std::string& norm_name) const;
    double expected(const std::string& norm_name) const;
    std::vector<std::string> norm_names() const;
};

/// For each norm of the layer estimates, sup over `times` on a grid refined per
/// eps, then the least-squares log-log slope over eps. Throws
/// under_resolved_layer naming eps if a strip holds fewer than 8 cells.
ScalingTable layer_norm_scalings(const LayerProfile& profile, double c, std::span<const double> epsilons,
                                 std::span<const double> exponents_p, const ScalingOptions& options = {},
                                 const CutoffFunction& cutoff = make_cutoff());

/// CSV header norm_name,epsilon,value,fitted_exponent,paper_exponent.
std::string scaling_csv(const ScalingTable& table);
void write_scaling_csv(const ScalingTable& table, const std::filesystem::path& path);

} // namespace vll
