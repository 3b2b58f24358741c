#include "vll/relative_energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "vll/eos.hpp"
#include "vll/error.hpp"
#include "vll/io.hpp"

namespace vll {

Comparator build_comparator(const ReferenceSample& ref, const LayerFields* layer, double delta_tilde) {
    const std::size_t n = ref.u.size();
    Comparator c;
    c.t = ref.t;
    c.delta_tilde = delta_tilde;
    c.v_bl = layer ? layer->v_bl : Field(n, 0.0);
    c.dv_bl = layer ? layer->dv_bl : Field(n, 0.0);
    c.dt_v_bl = layer ? layer->dt_v_bl : Field(n, 0.0);
    for (Field* f : {&c.u_bar, &c.w_bar, &c.v_bar, &c.du_bar, &c.dw_bar, &c.dv_bar, &c.dt_u_bar}) f->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.u_bar[i] = ref.u[i] - c.v_bl[i];
        c.du_bar[i] = ref.du[i] - c.dv_bl[i];
        c.dt_u_bar[i] = ref.dt_u[i] - c.dt_v_bl[i];
        c.w_bar[i] = delta_tilde * ref.dlog[i];
        c.dw_bar[i] = delta_tilde * ref.d2log[i];
    }
    if (layer && n > 0) {
        c.u_bar.front() = 0.0;
        c.u_bar.back() = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        c.v_bar[i] = c.u_bar[i] + c.w_bar[i];
        c.dv_bar[i] = c.du_bar[i] + c.dw_bar[i];
    }
    return c;
}

Comparator make_comparator(const Grid& grid, const ReferenceSample& ref, double eps, const ComparatorOptions& opt) {
    const double delta_tilde = opt.delta_tilde_factor * eps;
    if (!opt.layer) return build_comparator(ref, nullptr, delta_tilde);
    const LayerFields layer =
        fake_layer(grid, {ref.u, ref.du, ref.d2u, ref.dt_u}, opt.layer_epsilon.value_or(eps), opt.layer_c);
    return build_comparator(ref, &layer, delta_tilde);
}

namespace {

// Viscous-side fields of one snapshot, all on the trajectory grid.
struct Viscous {
    Field rho, u, lr_x, w, v, sq, sq_x, rho_x, u_x, v_x, w_x;
};

Viscous viscous_fields(const Grid& g, const FluidState& s, double eps) {
    const std::size_t n = g.cells;
    Viscous f;
    f.rho = s.rho;
    f.u = s.velocity();
    Field lr(n);
    f.sq.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.rho[i] > 0.0)) fail(ErrorKind::domain, "relative energy needs rho > 0", s.t);
        lr[i] = std::log(s.rho[i]);
        f.sq[i] = std::sqrt(s.rho[i]);
    }
    f.lr_x = gradient(g, lr);
    f.w.resize(n);
    f.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.w[i] = eps * f.lr_x[i];
        f.v[i] = f.u[i] + f.w[i];
    }
    f.sq_x = gradient(g, f.sq);
    f.rho_x = gradient(g, f.rho);
    f.u_x = gradient(g, f.u);
    f.v_x = gradient(g, f.v);
    f.w_x = gradient(g, f.w);
    return f;
}

void check_series(const Trajectory& traj, std::span<const ReferenceSample> refs, std::span<const Comparator> comps) {
    if (traj.snapshots.size() < 2) fail(ErrorKind::insufficient_data, "relative energy needs at least 2 snapshots");
    if (refs.size() != traj.snapshots.size() || (!comps.empty() && comps.size() != refs.size()))
        fail(ErrorKind::invalid_argument, "reference series does not match the snapshots");
    for (const auto& r : refs)
        if (r.rho.size() != traj.grid.cells) fail(ErrorKind::invalid_argument, "reference sample size differs from grid");
}

double kinetic_and_potential(const Grid& g, const Viscous& f, const ReferenceSample& ref, const Comparator& c,
                             const EosParams& eos, double* relative_h = nullptr) {
    double kin = 0.0, pot = 0.0;
    for (std::size_t i = 0; i < g.cells; ++i) {
        const double dv = f.v[i] - c.v_bar[i], dw = f.w[i] - c.w_bar[i];
        kin += 0.5 * f.rho[i] * (dv * dv + dw * dw);
        pot += relative_entropy(f.rho[i], ref.rho[i], eos);
    }
    if (relative_h) *relative_h = pot * g.dx;
    return (kin + pot) * g.dx;
}

double dissipation_rate(const Grid& g, const Viscous& f, const Comparator& c, double eps) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.cells; ++i) {
        const double d = f.u_x[i] - c.du_bar[i];
        s += f.rho[i] * d * d;
    }
    return eps * s * g.dx;
}

} // namespace

double energy_density_integral(const Grid& g, const FluidState& s, const ReferenceSample& ref, const Comparator& c,
                               const FluidParams& par) {
    return kinetic_and_potential(g, viscous_fields(g, s, par.epsilon), ref, c, par.eos);
}

double energy_dissipation_rate(const Grid& g, const FluidState& s, const Comparator& c, const FluidParams& par) {
    return dissipation_rate(g, viscous_fields(g, s, par.epsilon), c, par.epsilon);
}

double initial_energy(const Grid& g, const FluidState& s, const ReferenceSample& ref, const Comparator& c,
                      const FluidParams& par) {
    return energy_density_integral(g, s, ref, c, par);
}

EnergySeries energy_series(const Trajectory& traj, std::span<const ReferenceSample> refs,
                           std::span<const Comparator> comps, const FluidParams& par) {
    check_series(traj, refs, comps);
    const Grid& g = traj.grid;
    EnergySeries e;
    e.unreliable = traj.floor_dominated(0.01);
    std::vector<double> rate;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const Viscous f = viscous_fields(g, traj.snapshots[k], par.epsilon);
        double rel_h = 0.0;
        const double kp = kinetic_and_potential(g, f, refs[k], comps[k], par.eos, &rel_h);
        e.t.push_back(traj.snapshots[k].t);
        e.kinetic.push_back(kp - rel_h);
        e.relative_H.push_back(rel_h);
        rate.push_back(dissipation_rate(g, f, comps[k], par.epsilon));
    }
    e.dissipation = cumulative_time_integral(e.t, rate);
    for (std::size_t k = 0; k < e.t.size(); ++k) e.total.push_back(e.kinetic[k] + e.relative_H[k] + e.dissipation[k]);
    return e;
}

namespace {

// Space integrals of every remainder integrand at one snapshot.
struct RemainderRates {
    std::array<double, 11> R{};
    double r5_tilde = 0, r5_a = 0, r5_b = 0;
    std::array<double, 4> r5_sub{};
    std::array<double, 7> r9{};
    double r9_direct = 0;
    double r10_p = 0, r10_d = 0, r10_g = 0, r10_abs = 0;
    double rel_h = 0, max_du_e = 0;
};

RemainderRates remainder_rates(const Grid& g, const Viscous& f, const ReferenceSample& ref, const Comparator& c,
                               const FluidParams& par) {
    const double eps = par.epsilon, r1 = par.r1;
    const EosParams& eos = par.eos;
    const Field vbar_xx = gradient(g, c.dv_bar);
    const Field wbar_xx = gradient(g, c.dw_bar);
    RemainderRates r;
    for (std::size_t i = 0; i < g.cells; ++i) {
        const double rho = f.rho[i], u = f.u[i];
        const double x_u = c.u_bar[i] - u;                // u_bar - u
        const double x_l = ref.dlog[i] - f.lr_x[i];        // lr^E_x - lr_x
        r.R[0] += rho * c.dt_v_bl[i] * x_u;
        r.R[1] += eps * rho * c.dt_u_bar[i] * x_l;
        r.R[2] += eps * rho * ref.dt_dlog[i] * x_u;
        r.R[3] += 2.0 * eps * eps * rho * ref.dt_dlog[i] * x_l;
        r.R[4] += rho * c.du_bar[i] * u * x_u - rho * ref.du[i] * ref.u[i] * x_u;
        r.R[5] += eps * rho * c.du_bar[i] * u * x_l;
        r.R[6] += eps * rho * ref.d2log[i] * u * x_u;
        r.R[7] += 2.0 * eps * eps * rho * ref.d2log[i] * u * x_l;

        r.r5_tilde += rho * c.du_bar[i] * (u - c.u_bar[i]) * x_u;
        r.r5_a += -rho * x_u * c.du_bar[i] * c.v_bl[i];
        r.r5_b += -rho * x_u * ref.u[i] * c.dv_bl[i];
        r.r5_sub[0] += rho * ref.du[i] * c.v_bl[i] * x_u;
        r.r5_sub[1] += rho * ref.du[i] * (u - ref.u[i]) * x_u;
        r.r5_sub[2] += -rho * u * c.dv_bl[i] * x_u;
        r.r5_sub[3] += -rho * c.dv_bl[i] * (c.v_bl[i] - ref.u[i]) * x_u;

        // sqrt(rho) split of eps int rho f_x phi_x.
        const double sq = f.sq[i], sq_x = f.sq_x[i];
        auto split = [&](double fv, double phi_x, double phi_xx) {
            return -eps * sq * sq * fv * phi_xx - 2.0 * eps * sq * fv * sq_x * phi_x;
        };
        const double s_v = split(f.v[i], c.dv_bar[i], vbar_xx[i]);
        r.r9[0] += 0.5 * (s_v + s_v);
        r.r9[1] += 0.5 * (-s_v + s_v);
        r.r9[2] += -split(f.w[i], c.dv_bar[i], vbar_xx[i]);
        r.r9[3] += split(u, c.dw_bar[i], wbar_xx[i]);
        r.r9[4] += -2.0 * eps * rho * f.u_x[i] * c.du_bar[i];
        r.r9[5] += 0.0; // antisymmetric parts vanish in 1D
        r.r9[6] += eps * rho * c.du_bar[i] * c.du_bar[i];
        r.r9_direct += eps * rho * f.v_x[i] * c.dv_bar[i] - eps * rho * f.w_x[i] * c.dv_bar[i] +
                       eps * rho * f.u_x[i] * c.dw_bar[i] - 2.0 * eps * rho * f.u_x[i] * c.du_bar[i] +
                       eps * rho * c.du_bar[i] * c.du_bar[i];

        const double p = pressure(rho, eos), dp = dpressure(rho, eos);
        const double pe = ref.p[i], dpe = ref.dp[i], re = ref.rho[i], re_x = ref.drho[i];
        r.r10_p += -(-pe * ref.du[i] + p * c.dv_bar[i] - dpe * (rho - re) * ref.du[i]);
        r.r10_d += eps * (rho / re) * dpe * re_x * (re_x / re - f.rho_x[i] / rho);
        r.r10_g += -eps * dp * f.rho_x[i] * re_x / re;
        r.r10_abs += -(p - pe - dpe * (rho - re)) * ref.du[i];

        r.R[10] += r1 * rho * std::abs(u) * u * c.v_bar[i];
        r.rel_h += relative_entropy(rho, re, eos);
        r.max_du_e = std::max(r.max_du_e, std::abs(ref.du[i]));
    }
    const double dx = g.dx;
    for (double& v : r.R) v *= dx;
    for (double& v : r.r5_sub) v *= dx;
    for (double& v : r.r9) v *= dx;
    for (double* v : {&r.r5_tilde, &r.r5_a, &r.r5_b, &r.r9_direct, &r.r10_p, &r.r10_d, &r.r10_g, &r.r10_abs, &r.rel_h})
        *v *= dx;
    return r;
}

} // namespace

RemainderTerms remainder_terms(const Trajectory& traj, std::span<const ReferenceSample> refs,
                               std::span<const Comparator> comps, const FluidParams& par) {
    check_series(traj, refs, comps);
    const Grid& g = traj.grid;
    const std::size_t K = traj.snapshots.size();
    std::vector<double> t(K);
    std::vector<RemainderRates> rates(K);
    for (std::size_t k = 0; k < K; ++k) {
        t[k] = traj.snapshots[k].t;
        rates[k] = remainder_rates(g, viscous_fields(g, traj.snapshots[k], par.epsilon), refs[k], comps[k], par);
    }
    auto integral = [&](auto pick) {
        std::vector<double> v(K);
        for (std::size_t k = 0; k < K; ++k) v[k] = pick(rates[k]);
        return time_integral(t, v);
    };

    RemainderTerms out;
    out.unreliable = traj.floor_dominated(0.01);
    for (std::size_t i = 0; i < 11; ++i)
        if (i != 8 && i != 9) out.R[i] = integral([i](const RemainderRates& r) { return r.R[i]; });
    out.r5_tilde = integral([](const RemainderRates& r) { return r.r5_tilde; });
    out.r5_layer_velocity = integral([](const RemainderRates& r) { return r.r5_a; });
    out.r5_layer_gradient = integral([](const RemainderRates& r) { return r.r5_b; });
    for (std::size_t j = 0; j < 4; ++j) out.r5_sub[j] = integral([j](const RemainderRates& r) { return r.r5_sub[j]; });
    for (std::size_t j = 0; j < 7; ++j) out.r9_parts[j] = integral([j](const RemainderRates& r) { return r.r9[j]; });
    out.R[8] = 0.0;
    for (double v : out.r9_parts) out.R[8] += v;
    out.r9_direct = integral([](const RemainderRates& r) { return r.r9_direct; });
    out.r9_boundary_residue = out.R[8] - out.r9_direct;

    out.r10_pressure = integral([](const RemainderRates& r) { return r.r10_p; });
    out.r10_eps_density = integral([](const RemainderRates& r) { return r.r10_d; });
    out.r10_eps_gradient = integral([](const RemainderRates& r) { return r.r10_g; });
    out.R[9] = out.r10_pressure + out.r10_eps_density + out.r10_eps_gradient;
    out.r10_absorbable = integral([](const RemainderRates& r) { return r.r10_abs; });
    double max_du_e = 0.0;
    for (const auto& r : rates) max_du_e = std::max(max_du_e, r.max_du_e);
    out.r10_absorbable_bound =
        (par.eos.gamma - 1.0) * max_du_e * integral([](const RemainderRates& r) { return r.rel_h; });

    for (std::size_t i = 0; i < 11; ++i) {
        out.eta_raw += std::abs(out.R[i]);
        out.eta += i == 9 ? std::abs(out.R[i] - out.r10_absorbable) : std::abs(out.R[i]);
    }
    return out;
}

PressureCross pressure_cross_term(const Trajectory& traj, std::span<const ReferenceSample> refs,
                                  const FluidParams& par) {
    check_series(traj, refs, {});
    const Grid& g = traj.grid;
    const double eps = par.epsilon;
    PressureCross pc;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const auto& s = traj.snapshots[k];
        const auto& ref = refs[k];
        const Viscous f = viscous_fields(g, s, eps);
        double total = 0, coer = 0, grad = 0, curv = 0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            const double rho = f.rho[i], re = ref.rho[i];
            const double dp = dpressure(rho, par.eos), dpe = dpressure(re, par.eos), d2pe = d2pressure(re, par.eos);
            const double l = f.lr_x[i], le = ref.dlog[i];
            total += rho * (dp * l - dpe * le) * (l - le);
            coer += rho * dp * (l - le) * (l - le);
            grad += ((dp - dpe) * rho * l - d2pe * (rho - re) * re * le) * le;
            curv += -(rho * (dp - dpe) - d2pe * (rho - re) * re) * le * le;
        }
        pc.t.push_back(s.t);
        pc.total.push_back(eps * total * g.dx);
        pc.coercive.push_back(eps * coer * g.dx);
        pc.gradient.push_back(eps * grad * g.dx);
        pc.curvature.push_back(eps * curv * g.dx);
        pc.coercive_nonnegative = pc.coercive_nonnegative && pc.coercive.back() >= 0.0;
    }
    pc.integral = time_integral(pc.t, pc.total);
    return pc;
}

ConditionReport condition_monitor(const Trajectory& traj, const FluidParams& par, double c) {
    if (traj.snapshots.size() < 2) fail(ErrorKind::insufficient_data, "condition monitor needs at least 2 snapshots");
    const Grid& g = traj.grid;
    const double eps = par.epsilon, gamma = par.eos.gamma;
    if (!(eps > 0.0) || !(c > 0.0)) fail(ErrorKind::invalid_argument, "condition monitor needs eps > 0 and c > 0");
    ConditionReport rep;
    rep.strip_width = c * eps;
    const CellMask strip = boundary_strip(g, rep.strip_width);
    if (strip.count() < 4)
        fail(ErrorKind::under_resolved_layer, "strip of width " + format_double(rep.strip_width) + " is under-resolved");

    std::vector<double> t, pg, kato, sueur, sueur_raw, bn;
    for (const auto& s : traj.snapshots) {
        const Field u = s.velocity();
        const Field du = gradient(g, u);
        double a = 0, b = 0, su = 0, sr = 0, bnr = 0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            if (!strip[i]) continue;
            const double rho = s.rho[i], d2 = g.dist[i] * g.dist[i];
            const double rg = std::pow(rho, gamma);
            const double ku = rho * u[i] * u[i] / d2;
            const double normal = rho * rho * u[i] * u[i] / d2;
            const double visc = 2.0 * eps * rho * du[i] * du[i];
            a += rg;
            b += ku;
            su += ku + normal + visc;
            sr += ku + normal + du[i] * du[i];
            bnr += rg / (gamma - 1.0) + eps * ku + eps * visc;
        }
        t.push_back(s.t);
        pg.push_back(a * g.dx);
        kato.push_back(b * g.dx);
        sueur.push_back(eps * su * g.dx);
        sueur_raw.push_back(eps * sr * g.dx);
        bn.push_back(bnr * g.dx);
    }
    rep.lgamma_norm = std::pow(time_integral(t, pg), 1.0 / gamma);
    rep.lgamma_monitor = rep.lgamma_norm / std::pow(eps, 1.0 / gamma);
    rep.kato_integral = time_integral(t, kato);
    rep.kato_monitor = std::pow(eps, (gamma - 1.0) / gamma) * rep.kato_integral;
    rep.kato_consequence = eps * rep.kato_integral;
    rep.sueur = time_integral(t, sueur);
    rep.sueur_raw = time_integral(t, sueur_raw);
    rep.bardos_nguyen = time_integral(t, bn);
    return rep;
}

MetricSeries convergence_metric(const Trajectory& traj, std::span<const ReferenceSample> refs, const EosParams& eos) {
    if (refs.size() != traj.snapshots.size())
        fail(ErrorKind::range, "reference series does not cover the trajectory snapshots");
    const Grid& g = traj.grid;
    MetricSeries m;
    for (std::size_t k = 0; k < refs.size(); ++k) {
        const auto& s = traj.snapshots[k];
        if (refs[k].rho.size() != g.cells) fail(ErrorKind::range, "reference sample grid differs from trajectory");
        const Field u = s.velocity();
        Field diff(g.cells);
        double kin = 0.0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            diff[i] = s.rho[i] - refs[k].rho[i];
            const double du = u[i] - refs[k].u[i];
            kin += s.rho[i] * du * du;
        }
        const double value = lp_norm(g, diff, eos.gamma) + kin * g.dx;
        m.t.push_back(s.t);
        m.value.push_back(value);
        m.sup = std::max(m.sup, value);
    }
    return m;
}

GronwallFit gronwall_check(std::span<const double> t, std::span<const double> energy, double E0, double eta) {
    if (t.size() != energy.size()) fail(ErrorKind::invalid_argument, "Gronwall fit needs matching series");
    GronwallFit fit;
    fit.eta = eta;
    const double base = E0 + eta;
    const double t0 = t.empty() ? 0.0 : t.front();
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double e = energy[k];
        if (!(e > 0.0)) continue;
        const double dt = t[k] - t0;
        if (e <= base) continue;
        if (!(dt > 0.0) || !(base > 0.0)) {
            fit.C = infinity;
            fit.bound_holds = false;
            return fit;
        }
        fit.C = std::max(fit.C, std::log(e / base) / dt);
    }
    return fit;
}

std::vector<ReferenceSample> sample_series(const Trajectory& traj, const EulerReference& ref) {
    std::vector<ReferenceSample> out;
    out.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) out.push_back(sample(ref, traj.grid, s.t));
    return out;
}

std::vector<Comparator> comparator_series(const Grid& grid, std::span<const ReferenceSample> refs, double eps,
                                          const ComparatorOptions& opt) {
    std::vector<Comparator> out;
    out.reserve(refs.size());
    for (const auto& r : refs) out.push_back(make_comparator(grid, r, eps, opt));
    return out;
}

RelativeEnergyReport analyze(const Trajectory& traj, const EulerReference& ref, const FluidParams& par,
                             const ComparatorOptions& opt) {
    const auto refs = sample_series(traj, ref);
    const auto comps = comparator_series(traj.grid, refs, par.epsilon, opt);
    RelativeEnergyReport rep;
    rep.epsilon = par.epsilon;
    rep.r1 = par.r1;
    rep.energy = energy_series(traj, refs, comps, par);
    rep.E0 = initial_energy(traj.grid, traj.snapshots.front(), refs.front(), comps.front(), par);
    rep.remainders = remainder_terms(traj, refs, comps, par);
    rep.press_cross = pressure_cross_term(traj, refs, par);
    rep.conditions = condition_monitor(traj, par, opt.layer_c);
    rep.metric = convergence_metric(traj, refs, par.eos);
    rep.gronwall = gronwall_check(rep.energy.t, rep.energy.total, rep.E0, rep.remainders.eta);
    rep.unreliable = rep.energy.unreliable || rep.remainders.unreliable;
    return rep;
}

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

} // namespace

std::string report_json(const RelativeEnergyReport& r) {
    using nlohmann::json;
    json j;
    j["epsilon"] = r.epsilon;
    j["r1"] = r.r1;
    j["E_series"] = {{"t", r.energy.t},
                     {"E", r.energy.total},
                     {"kinetic", r.energy.kinetic},
                     {"relative_H", r.energy.relative_H},
                     {"dissipation", r.energy.dissipation}};
    j["E0"] = r.E0;
    json R = json::object();
    for (std::size_t i = 0; i < 11; ++i) R["R" + std::to_string(i + 1)] = r.remainders.R[i];
    const auto& rm = r.remainders;
    R["R5_split"] = {{"tilde", rm.r5_tilde},
                     {"layer_velocity", rm.r5_layer_velocity},
                     {"layer_gradient", rm.r5_layer_gradient},
                     {"sub", rm.r5_sub}};
    R["R9_parts"] = rm.r9_parts;
    R["R9_direct"] = rm.r9_direct;
    R["R9_boundary_residue"] = rm.r9_boundary_residue;
    R["R10_parts"] = {{"pressure", rm.r10_pressure},
                      {"eps_density", rm.r10_eps_density},
                      {"eps_gradient", rm.r10_eps_gradient},
                      {"absorbable", rm.r10_absorbable},
                      {"absorbable_bound", rm.r10_absorbable_bound}};
    R["eta"] = rm.eta;
    R["eta_raw"] = rm.eta_raw;
    j["R"] = R;
    const auto& pc = r.press_cross;
    j["press_cross"] = {{"t", pc.t},
                        {"total", pc.total},
                        {"coercive", pc.coercive},
                        {"gradient", pc.gradient},
                        {"curvature", pc.curvature},
                        {"integral", pc.integral},
                        {"coercive_nonnegative", pc.coercive_nonnegative}};
    const auto& c = r.conditions;
    j["conditions"] = {{"strip_width", c.strip_width},   {"lgamma_norm", c.lgamma_norm},
                       {"lgamma_monitor", c.lgamma_monitor}, {"kato_integral", c.kato_integral},
                       {"kato_monitor", c.kato_monitor}, {"kato_consequence", c.kato_consequence},
                       {"sueur", c.sueur},               {"sueur_raw", c.sueur_raw},
                       {"bardos_nguyen", c.bardos_nguyen}};
    j["gronwall"] = {{"C", finite_or_null(r.gronwall.C)},
                     {"eta", r.gronwall.eta},
                     {"bound_holds", r.gronwall.bound_holds}};
    j["metric"] = {{"t", r.metric.t}, {"value", r.metric.value}, {"sup", r.metric.sup}};
    j["unreliable"] = r.unreliable;
    return j.dump(2) + "\n";
}

std::string report_csv(const RelativeEnergyReport& r) {
    std::ostringstream os;
    os << "t,E,kinetic,relative_H,dissipation,press_cross,metric\n";
    for (std::size_t k = 0; k < r.energy.t.size(); ++k) {
        os << format_double(r.energy.t[k]) << ',' << format_double(r.energy.total[k]) << ','
           << format_double(r.energy.kinetic[k]) << ',' << format_double(r.energy.relative_H[k]) << ','
           << format_double(r.energy.dissipation[k]) << ','
           << format_double(k < r.press_cross.total.size() ? r.press_cross.total[k] : 0.0) << ','
           << format_double(k < r.metric.value.size() ? r.metric.value[k] : 0.0) << '\n';
    }
    return os.str();
}

void write_report(const RelativeEnergyReport& r, const std::filesystem::path& dir) {
    write_file_atomic(dir / "report.json", report_json(r));
    write_file_atomic(dir / "report.csv", report_csv(r));
}

} // namespace vll
