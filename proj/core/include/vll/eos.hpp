#pragma once

#include <span>

#include "vll/field_core.hpp"

namespace vll {

/// Power-law pressure p = a rho^gamma.
struct EosParams {
    double a = 1.0;
    double gamma = 1.4;

    void validate() const; // a > 0, gamma > 1
};

double pressure(double rho, const EosParams& eos);
double dpressure(double rho, const EosParams& eos);  // p'
double d2pressure(double rho, const EosParams& eos); // p''
double sound_speed(double rho, const EosParams& eos); // sqrt(p')

/// Internal-energy potential H with rho H' - H = p.
double entropy_H(double rho, const EosParams& eos);
double entropy_dH(double rho, const EosParams& eos);
/// H'' = p'/rho; only defined for rho > 0.
double entropy_d2H(double rho, const EosParams& eos);

/// H(rho | r) = H(rho) - H(r) - H'(r)(rho - r). Uses a series near rho = r so
/// small differences do not cancel catastrophically.
double relative_entropy(double rho, double r, const EosParams& eos);

struct EquivalenceReport {
    double integral_H = 0.0;    // integral of H(rho|r)
    double lgamma_norm = 0.0;   // ||rho - r||_{L^gamma}
    double quadratic_part = 0.0; // integral of |rho-r|^2 over |rho-r| < 1
    double power_part = 0.0;     // integral of |rho-r|^gamma over |rho-r| >= 1
    // Largest constant c for which each direction holds on this pair:
    //   c ||rho-r|| <= (int H)^gamma + int H
    //   c int H     <= ||rho-r||^gamma + ||rho-r||^2
    // Both are +infinity when rho == r.
    double c_norm_by_entropy = infinity;
    double c_entropy_by_norm = infinity;
    double lhs = 0.0; // ||rho-r||, left side of the first direction with c = 1
    double rhs = 0.0; // (int H)^gamma + int H
    bool holds = true;
};

/// Throws domain for any r <= 0 or rho < 0, invalid_argument on size mismatch.
EquivalenceReport entropy_equivalence_check(const Grid& grid, std::span<const double> rho,
                                            std::span<const double> r, const EosParams& eos);

} // namespace vll
