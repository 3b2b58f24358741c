#pragma once

// Refinement studies on manufactured fields and budget ladders. Shared by the
// `check` verb and the acceptance tests.

#include <cstddef>
#include <string>
#include <vector>

#include "vll/boundary_layer.hpp"
#include "vll/eos.hpp"

namespace vll {

struct OrderStudy {
    std::string name;
    std::vector<double> h;
    std::vector<double> error;
    double order = 0.0; // least-squares log-log slope of error against h

    bool converges_at(double min_order) const { return order >= min_order; }
};

/// rho = 2 + sin x sin y, u = (sin x cos y, -cos x sin y) on the periodic square.
OrderStudy derivation_identity_study(const std::vector<std::size_t>& points = {32, 64, 128, 256},
                                     double epsilon = 0.5);

/// rho = exp(x y) on the unit square, interior stencils.
OrderStudy curl_free_study(const std::vector<std::size_t>& points = {32, 64, 128, 256});

/// Manufactured density/momentum pair satisfying the continuity equation
/// exactly; time spacing shrinks with the grid.
OrderStudy lemma_identity_study(const std::vector<std::size_t>& cells = {64, 128, 256, 512});

/// Kind of layer derivative identity measured by layer_calculus_study.
enum class LayerIdentity { first_derivative, first_derivative_ztilde, second_derivative };

/// Constant u^E = 1, eps = 0.1, c = 1.
OrderStudy layer_calculus_study(LayerIdentity which,
                                const std::vector<std::size_t>& cells = {800, 1600, 3200, 6400},
                                const CutoffFunction& cutoff = make_cutoff());

struct BudgetLevel {
    std::size_t cells = 0;
    double dx = 0.0;
    double dt = 0.0;     // largest accepted step
    double energy = 0.0; // max |residual|
    double bd = 0.0;     // max residual (signed, one-sided)
    double k_entropy = 0.0;
    double seconds = 0.0;
};

struct BudgetLadder {
    std::vector<BudgetLevel> levels;
    // r_h / (dx + dt^2) per level.
    std::vector<double> c_energy, c_bd, c_k_entropy;

    static double drift(const std::vector<double>& c); // max / min, 1 when all zero
};

/// Smooth default datum, eps, T; snapshots every `cadence`.
BudgetLadder budget_ladder(const std::vector<std::size_t>& cells, double epsilon, double T, double cadence,
                           double cfl = 0.5);

} // namespace vll
