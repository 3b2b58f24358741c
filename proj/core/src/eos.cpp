#include "vll/eos.hpp"

#include <cmath>
#include <string>

#include "vll/error.hpp"

namespace vll {

void EosParams::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::invalid_configuration, "eos: a must be positive");
    if (!(gamma > 1.0) || !std::isfinite(gamma)) fail(ErrorKind::invalid_configuration, "eos: gamma must exceed 1");
}

static void require_nonneg(double rho, const char* what) {
    if (!(rho >= 0.0)) fail(ErrorKind::domain, std::string(what) + ": negative density " + std::to_string(rho));
}

double pressure(double rho, const EosParams& eos) {
    require_nonneg(rho, "pressure");
    return eos.a * std::pow(rho, eos.gamma);
}

double dpressure(double rho, const EosParams& eos) {
    require_nonneg(rho, "dpressure");
    return eos.a * eos.gamma * std::pow(rho, eos.gamma - 1.0);
}

double d2pressure(double rho, const EosParams& eos) {
    require_nonneg(rho, "d2pressure");
    return eos.a * eos.gamma * (eos.gamma - 1.0) * std::pow(rho, eos.gamma - 2.0);
}

double sound_speed(double rho, const EosParams& eos) { return std::sqrt(dpressure(rho, eos)); }

double entropy_H(double rho, const EosParams& eos) {
    require_nonneg(rho, "entropy");
    return eos.a * std::pow(rho, eos.gamma) / (eos.gamma - 1.0);
}

double entropy_dH(double rho, const EosParams& eos) {
    require_nonneg(rho, "entropy derivative");
    return eos.a * eos.gamma * std::pow(rho, eos.gamma - 1.0) / (eos.gamma - 1.0);
}

double entropy_d2H(double rho, const EosParams& eos) {
    if (!(rho > 0.0)) fail(ErrorKind::domain, "entropy second derivative needs rho > 0");
    return dpressure(rho, eos) / rho;
}

namespace {

// (1+s)^g - 1 - g s for s >= -1.
double binomial_remainder(double s, double g) {
    if (std::abs(s) < 0.05) {
        double coeff = g * (g - 1.0) / 2.0;
        double power = s * s;
        double sum = 0.0;
        for (int k = 2; k < 18; ++k) {
            sum += coeff * power;
            coeff *= (g - k) / (k + 1.0);
            power *= s;
        }
        return sum;
    }
    return std::expm1(g * std::log1p(s)) - g * s;
}

} // namespace

double relative_entropy(double rho, double r, const EosParams& eos) {
    if (!(r > 0.0)) fail(ErrorKind::domain, "relative entropy needs r > 0");
    require_nonneg(rho, "relative entropy");
    const double s = (rho - r) / r;
    const double phi = binomial_remainder(s, eos.gamma);
    return eos.a * std::pow(r, eos.gamma) / (eos.gamma - 1.0) * std::max(phi, 0.0);
}

EquivalenceReport entropy_equivalence_check(const Grid& grid, std::span<const double> rho,
                                            std::span<const double> r, const EosParams& eos) {
    if (rho.size() != r.size() || rho.size() != grid.cells)
        fail(ErrorKind::invalid_argument, "equivalence check: field sizes differ from grid");
    const double g = eos.gamma;
    EquivalenceReport rep;
    double sum_pow = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double diff = std::abs(rho[i] - r[i]);
        rep.integral_H += relative_entropy(rho[i], r[i], eos);
        sum_pow += std::pow(diff, g);
        if (diff < 1.0)
            rep.quadratic_part += diff * diff;
        else
            rep.power_part += std::pow(diff, g);
    }
    rep.integral_H *= grid.dx;
    rep.quadratic_part *= grid.dx;
    rep.power_part *= grid.dx;
    rep.lgamma_norm = std::pow(sum_pow * grid.dx, 1.0 / g);

    const double n = rep.lgamma_norm;
    const double h = rep.integral_H;
    rep.lhs = n;
    rep.rhs = std::pow(h, g) + h;
    if (n > 0.0) {
        rep.c_norm_by_entropy = rep.rhs / n;
        rep.c_entropy_by_norm = h > 0.0 ? (std::pow(n, g) + n * n) / h : infinity;
    }
    rep.holds = rep.c_norm_by_entropy > 0.0 && rep.c_entropy_by_norm > 0.0;
    return rep;
}

} // namespace vll
