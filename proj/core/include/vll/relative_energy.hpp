#pragma once

// Relative energy between a viscous trajectory and the Euler comparator
// (u^E - v_bl, eps-weighted log-density gradient), the remainder terms of its
// evolution inequality, boundary-strip condition monitors, the convergence
// metric and the Gronwall closure.
//
// Discrete conventions, shared by every term below:
//   G      the field_core gradient (centered interior, one-sided ends)
//   lr     log rho;  w = eps G(lr);  v = u + w
//   u_x = G(u), v_x = G(v), w_x = G(w), rho_x = G(rho), s_x = G(sqrt rho)
//   comparator derivatives come from the reference sample and the layer
//   chain rule; second derivatives of comparator fields are G of the first.
//   Space integrals use the midpoint rule, time integrals the trapezoid over
//   snapshots.

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vll/boundary_layer.hpp"
#include "vll/euler_reference.hpp"
#include "vll/field_core.hpp"
#include "vll/ns_solver.hpp"

namespace vll {

struct ComparatorOptions {
    double layer_c = 1.0;
    double delta_tilde_factor = 1.0;        // delta~ = factor * eps
    bool layer = true;                      // false: v_bl forced to zero
    std::optional<double> layer_epsilon;    // layer width eps, defaults to the viscosity
};

struct Comparator {
    double t = 0.0;
    double delta_tilde = 0.0;
    Field u_bar, w_bar, v_bar;
    Field du_bar, dw_bar, dv_bar;
    Field dt_u_bar;
    Field v_bl, dv_bl, dt_v_bl; // zero when the layer is off
};

/// u_bar = u^E - v_bl (exactly zero at the boundary cells when the layer is
/// on), w_bar = delta~ (log rho^E)_x, v_bar = u_bar + w_bar.
Comparator build_comparator(const ReferenceSample& ref, const LayerFields* layer, double delta_tilde);

/// Comparator at the reference sample using the options' layer and delta~.
Comparator make_comparator(const Grid& grid, const ReferenceSample& ref, double epsilon,
                           const ComparatorOptions& options);

struct EnergySeries {
    std::vector<double> t;
    std::vector<double> kinetic;     // int 1/2 rho (|v - v_bar|^2 + |w - w_bar|^2)
    std::vector<double> relative_H;  // int H(rho | rho^E)
    std::vector<double> dissipation; // eps int_0^t int rho |u_x - u_bar_x|^2
    std::vector<double> total;
    bool unreliable = false;
};

/// Kinetic and potential parts of the functional at one snapshot (no history).
double energy_density_integral(const Grid& grid, const FluidState& state, const ReferenceSample& ref,
                               const Comparator& comp, const FluidParams& params);

/// Rate eps int rho |u_x - u_bar_x|^2 of the history term at one snapshot.
double energy_dissipation_rate(const Grid& grid, const FluidState& state, const Comparator& comp,
                               const FluidParams& params);

EnergySeries energy_series(const Trajectory& traj, std::span<const ReferenceSample> refs,
                           std::span<const Comparator> comps, const FluidParams& params);

/// E(0) from the first snapshot with an empty history.
double initial_energy(const Grid& grid, const FluidState& initial, const ReferenceSample& ref,
                      const Comparator& comp, const FluidParams& params);

struct RemainderTerms {
    std::array<double, 11> R{}; // R[0] is R_1

    // R_5 = r5_tilde + r5_layer_velocity + r5_layer_gradient
    double r5_tilde = 0.0;            // int int rho u_bar_x (u - u_bar)(u_bar - u)
    double r5_layer_velocity = 0.0;   // -int int rho (u_bar - u) u_bar_x v_bl
    double r5_layer_gradient = 0.0;   // -int int rho (u_bar - u) u^E v_bl_x
    std::array<double, 4> r5_sub{};   // the four layer estimates of the R_5 analysis

    // Seven viscous integrals of R_9 (sqrt(rho) split forms), their direct
    // counterparts, and split minus direct.
    std::array<double, 7> r9_parts{};
    double r9_direct = 0.0;
    double r9_boundary_residue = 0.0;

    double r10_pressure = 0.0;       // first display
    double r10_eps_density = 0.0;    // eps (rho/rho^E) p'(rho^E) rho^E_x (...) coupling
    double r10_eps_gradient = 0.0;   // -eps p'(rho) rho_x rho^E_x / rho^E coupling
    double r10_absorbable = 0.0;     // -int int [p - p^E - p'^E (rho - rho^E)] u^E_x
    double r10_absorbable_bound = 0.0; // (gamma - 1) max|u^E_x| int int H(rho|rho^E)

    double eta_raw = 0.0; // sum |R_i|
    double eta = 0.0;     // with R_10 replaced by its non-absorbable remainder
    bool unreliable = false;
};

RemainderTerms remainder_terms(const Trajectory& traj, std::span<const ReferenceSample> refs,
                               std::span<const Comparator> comps, const FluidParams& params);

struct PressureCross {
    std::vector<double> t;
    std::vector<double> total;       // per-snapshot eps int rho (p' lr_x - p'^E lr^E_x)(lr_x - lr^E_x)
    std::vector<double> coercive;    // eps int rho p' |lr_x - lr^E_x|^2
    std::vector<double> gradient;    // eps int d_x[p - p^E - p'^E (rho - rho^E)] lr^E_x
    std::vector<double> curvature;   // -eps int [rho (p' - p'^E) - p''^E (rho - rho^E) rho^E] |lr^E_x|^2
    double integral = 0.0;           // time integral of `total`
    bool coercive_nonnegative = true;
};

/// The gradient part uses the chain rule d_x[...] = (p' - p'^E) rho lr_x - p''^E (rho - rho^E) rho^E lr^E_x,
/// so the three parts sum to the total up to rounding.
PressureCross pressure_cross_term(const Trajectory& traj, std::span<const ReferenceSample> refs,
                                  const FluidParams& params);

struct ConditionReport {
    double strip_width = 0.0;
    double lgamma_norm = 0.0;      // ||rho||_{L^gamma(0,T; L^gamma(strip))}
    double lgamma_monitor = 0.0;   // lgamma_norm / eps^(1/gamma)
    double kato_integral = 0.0;    // int int_strip rho u^2 / d^2
    double kato_monitor = 0.0;     // eps^((gamma-1)/gamma) kato_integral
    double kato_consequence = 0.0; // eps kato_integral
    double sueur = 0.0;            // eps int int_strip (rho u^2/d^2 + rho^2 u^2/d^2 + 2 eps rho u_x^2)
    double sueur_raw = 0.0;        // same with u_x^2 in place of 2 eps rho u_x^2
    double bardos_nguyen = 0.0;    // int int_strip (rho^gamma/(gamma-1) + eps rho u^2/d^2 + 2 eps^2 rho u_x^2)
};

/// Throws under_resolved_layer when the strip of width c eps holds fewer than 2 cells per side.
ConditionReport condition_monitor(const Trajectory& traj, const FluidParams& params, double c);

struct MetricSeries {
    std::vector<double> t;
    std::vector<double> value; // ||rho - rho^E||_{L^gamma} + int rho |u - u^E|^2
    double sup = 0.0;
};

MetricSeries convergence_metric(const Trajectory& traj, std::span<const ReferenceSample> refs,
                                const EosParams& eos);

struct GronwallFit {
    double C = 0.0;
    double eta = 0.0;
    bool bound_holds = true; // a finite C exists
};

/// Smallest C >= 0 with E(t) <= (E0 + eta) e^{C t} on every sample.
GronwallFit gronwall_check(std::span<const double> t, std::span<const double> energy, double E0, double eta);

struct RelativeEnergyReport {
    double epsilon = 0.0;
    double r1 = 0.0;
    EnergySeries energy;
    double E0 = 0.0;
    RemainderTerms remainders;
    PressureCross press_cross;
    ConditionReport conditions;
    MetricSeries metric;
    GronwallFit gronwall;
    bool unreliable = false;
};

/// Samples the reference at every snapshot time (throws range on a horizon
/// mismatch) and evaluates every report above.
RelativeEnergyReport analyze(const Trajectory& traj, const EulerReference& ref, const FluidParams& params,
                             const ComparatorOptions& options = {});

/// Reference samples and comparators at the snapshot times.
std::vector<ReferenceSample> sample_series(const Trajectory& traj, const EulerReference& ref);
std::vector<Comparator> comparator_series(const Grid& grid, std::span<const ReferenceSample> refs, double epsilon,
                                          const ComparatorOptions& options);

std::string report_json(const RelativeEnergyReport& report);
/// Flat per-snapshot table: t,E,kinetic,relative_H,dissipation,press_cross,metric
std::string report_csv(const RelativeEnergyReport& report);
void write_report(const RelativeEnergyReport& report, const std::filesystem::path& dir);

} // namespace vll
