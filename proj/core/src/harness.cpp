#include "vll/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <toml.hpp>

#include "vll/augmented.hpp"
#include "vll/eos.hpp"
#include "vll/error.hpp"
#include "vll/io.hpp"
#include "vll/studies.hpp"

namespace vll {

double RunConfig::drag_for(double eps) const {
    return drag == DragMode::fixed ? r1 : coupling_kappa * std::pow(eps, coupling_alpha);
}

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
    fail(ErrorKind::invalid_configuration, field + ": " + what);
}

} // namespace

void RunConfig::validate() const {
    if (!(length > 0.0) || !std::isfinite(length)) config_error("grid.length", "must be positive");
    if (cells < 4) config_error("grid.cells", "need at least 4 cells, got " + std::to_string(cells));
    if (!(eos.a > 0.0)) config_error("eos.a", "must be positive");
    if (!(eos.gamma > 1.0)) config_error("eos.gamma", "must exceed 1");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) config_error("physics.epsilon", "must be >= 0");
    if (drag == DragMode::fixed && !(r1 >= 0.0)) config_error("physics.r1", "must be >= 0");
    if (drag == DragMode::coupled && !(coupling_kappa >= 0.0)) config_error("physics.kappa", "must be >= 0");
    if (!(comparator.layer_c > 0.0)) config_error("layer.c", "must be positive");
    if (!(comparator.delta_tilde_factor >= 0.0)) config_error("layer.delta_tilde_factor", "must be >= 0");
    if (comparator.layer && !(epsilon > 0.0)) config_error("layer.enabled", "the layer needs physics.epsilon > 0");
    if (!(horizon > 0.0)) config_error("time.horizon", "must be positive");
    if (!(cadence > 0.0) || cadence > horizon) config_error("time.cadence", "must lie in (0, horizon]");
    if (!(cfl > 0.0 && cfl <= 1.0)) config_error("time.cfl", "must lie in (0, 1]");
    if (refinement < 1) config_error("reference.refinement", "must be >= 1");
    if (!(datum.min_density() > 0.0))
        config_error("datum", "initial density reaches " + format_double(datum.min_density()));
    if (sweep_epsilons.empty()) config_error("sweep.epsilons", "must not be empty");
    for (std::size_t i = 0; i < sweep_epsilons.size(); ++i) {
        if (!(sweep_epsilons[i] > 0.0)) config_error("sweep.epsilons", "entries must be positive");
        if (i > 0 && !(sweep_epsilons[i] < sweep_epsilons[i - 1]))
            config_error("sweep.epsilons", "must be strictly decreasing");
    }
    if (!(cells_per_layer >= 8.0)) config_error("sweep.cells_per_layer", "must be >= 8");
    for (double e : layer_epsilons)
        if (!(e > 0.0)) config_error("layer_scaling.epsilons", "entries must be positive");
}

namespace {

double number(const toml::table& t, const char* section, const char* key, double fallback) {
    const auto node = t[section][key];
    if (!node) return fallback;
    if (auto v = node.value<double>()) return *v;
    config_error(std::string(section) + "." + key, "expected a number");
}

std::size_t count(const toml::table& t, const char* section, const char* key, std::size_t fallback) {
    const auto node = t[section][key];
    if (!node) return fallback;
    const auto v = node.value<std::int64_t>();
    if (!v || *v < 0) config_error(std::string(section) + "." + key, "expected a non-negative integer");
    return static_cast<std::size_t>(*v);
}

bool flag(const toml::table& t, const char* section, const char* key, bool fallback) {
    const auto node = t[section][key];
    if (!node) return fallback;
    if (auto v = node.value<bool>()) return *v;
    config_error(std::string(section) + "." + key, "expected a boolean");
}

std::vector<double> numbers(const toml::table& t, const char* section, const char* key,
                            std::vector<double> fallback) {
    const auto node = t[section][key];
    if (!node) return fallback;
    const toml::array* arr = node.as_array();
    if (!arr) config_error(std::string(section) + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *arr) {
        auto v = e.value<double>();
        if (!v) config_error(std::string(section) + "." + key, "expected an array of numbers");
        out.push_back(*v);
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    toml::table t;
    try {
        t = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "line " << e.source().begin.line << ": " << e.description();
        fail(ErrorKind::invalid_configuration, "TOML: " + os.str());
    }
    RunConfig c;
    c.length = number(t, "grid", "length", c.length);
    c.cells = count(t, "grid", "cells", c.cells);
    c.eos.a = number(t, "eos", "a", c.eos.a);
    c.eos.gamma = number(t, "eos", "gamma", c.eos.gamma);
    c.epsilon = number(t, "physics", "epsilon", c.epsilon);
    if (const auto mode = t["physics"]["drag"]) {
        const auto s = mode.value<std::string>();
        if (s == "fixed")
            c.drag = DragMode::fixed;
        else if (s == "coupled")
            c.drag = DragMode::coupled;
        else
            config_error("physics.drag", "expected \"fixed\" or \"coupled\"");
    }
    c.r1 = number(t, "physics", "r1", c.r1);
    c.coupling_kappa = number(t, "physics", "kappa", c.coupling_kappa);
    c.coupling_alpha = number(t, "physics", "alpha", c.coupling_alpha);
    c.comparator.layer_c = number(t, "layer", "c", c.comparator.layer_c);
    c.comparator.delta_tilde_factor = number(t, "layer", "delta_tilde_factor", c.comparator.delta_tilde_factor);
    c.comparator.layer = flag(t, "layer", "enabled", c.comparator.layer);
    c.horizon = number(t, "time", "horizon", c.horizon);
    c.cadence = number(t, "time", "cadence", c.cadence);
    c.cfl = number(t, "time", "cfl", c.cfl);
    c.datum.background = number(t, "datum", "background", c.datum.background);
    c.datum.density_amplitude = number(t, "datum", "density_amplitude", c.datum.density_amplitude);
    c.datum.density_wavenumber =
        static_cast<int>(count(t, "datum", "density_wavenumber", static_cast<std::size_t>(c.datum.density_wavenumber)));
    c.datum.velocity_amplitude = number(t, "datum", "velocity_amplitude", c.datum.velocity_amplitude);
    c.refinement = count(t, "reference", "refinement", c.refinement);
    c.sweep_epsilons = numbers(t, "sweep", "epsilons", c.sweep_epsilons);
    c.cells_per_layer = number(t, "sweep", "cells_per_layer", c.cells_per_layer);
    c.layer_epsilons = numbers(t, "layer_scaling", "epsilons", c.layer_epsilons);
    c.seed = count(t, "output", "seed", c.seed);
    c.write_snapshots = flag(t, "output", "snapshots", c.write_snapshots);
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::invalid_configuration, "cannot read config " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

namespace {

FluidParams fluid_params(const RunConfig& c, const Field& rho0) {
    FluidParams p;
    p.eos = c.eos;
    p.epsilon = c.epsilon;
    p.r1 = c.drag_for(c.epsilon);
    p.rho_floor = default_floor(rho0);
    return p;
}

std::string budgets_csv(const EnergyBudget& e, const BDEntropyBudget& bd, const KEntropyBudget& k) {
    std::ostringstream os;
    os << "t,kinetic,potential,dissipation,damping,energy_residual,bd_kinetic,bd_pressure_gradient,"
          "bd_damping_gradient,bd_residual,k_kinetic,k_symmetric,k_residual\n";
    for (std::size_t i = 0; i < e.t.size(); ++i) {
        const double row[] = {e.t[i],
                              e.kinetic[i],
                              e.potential[i],
                              e.dissipation[i],
                              e.damping[i],
                              e.residual[i],
                              bd.augmented_kinetic[i],
                              bd.pressure_gradient[i],
                              bd.damping_gradient[i],
                              bd.residual[i],
                              k.kinetic[i],
                              k.symmetric[i],
                              k.residual[i]};
        for (std::size_t j = 0; j < std::size(row); ++j) os << (j ? "," : "") << format_double(row[j]);
        os << '\n';
    }
    return os.str();
}

std::string run_json(const RunResult& r) {
    nlohmann::json j;
    const RunConfig& c = r.config;
    j["config"] = {{"length", c.length},       {"cells", c.cells},         {"a", c.eos.a},
                   {"gamma", c.eos.gamma},     {"epsilon", c.epsilon},     {"r1", c.drag_for(c.epsilon)},
                   {"layer_c", c.comparator.layer_c}, {"layer", c.comparator.layer},
                   {"horizon", c.horizon},     {"cadence", c.cadence},     {"cfl", c.cfl},
                   {"refinement", c.refinement}, {"seed", c.seed}};
    j["steps"] = r.trajectory.steps;
    j["floor_activations"] = r.trajectory.floor_activations;
    j["floor_active"] = r.floor_active;
    j["unreliable"] = r.report.unreliable;
    j["exit_code"] = r.exit_code;
    return j.dump(2) + "\n";
}

} // namespace

RunResult run_single(const RunConfig& config, const std::optional<std::filesystem::path>& out) {
    config.validate();
    const Grid grid = make_grid(config.length, config.cells);
    const EulerReference ref =
        solve_reference(grid, config.datum, config.eos, config.horizon, config.refinement, {config.cadence, config.cfl});
    return run_single(config, ref, out);
}

RunResult run_single(const RunConfig& config, const EulerReference& ref,
                     const std::optional<std::filesystem::path>& out) {
    config.validate();
    const Grid grid = make_grid(config.length, config.cells);
    const InitialDatum d = well_prepared_init(grid, config.datum);
    const FluidParams par = fluid_params(config, d.rho);

    RunResult r;
    r.config = config;
    r.trajectory = simulate(grid, make_state(0.0, d.rho, d.u), par, config.horizon, config.cadence, {config.cfl});
    r.report = analyze(r.trajectory, ref, par, config.comparator);
    r.energy = energy_report(r.trajectory, par);
    r.bd_entropy = bd_entropy_report(r.trajectory, par);
    r.floor_active = r.trajectory.floor_activations > 0;
    r.monitor_tripped = ref.monitor.tripped;
    r.exit_code = (r.floor_active || r.monitor_tripped || r.report.unreliable) ? 1 : 0;

    if (out) {
        const KEntropyBudget k = k_entropy_report(r.trajectory, par);
        if (config.write_snapshots) write_snapshots(r.trajectory, *out / "snapshots");
        write_file_atomic(*out / "budgets.csv", budgets_csv(r.energy, r.bd_entropy, k));
        write_report(r.report, *out);
        write_file_atomic(*out / "run.json", run_json(r));
    }
    return r;
}

std::size_t sweep_cells(const RunConfig& c, double eps) {
    const double wanted = std::ceil(c.cells_per_layer * c.length / (c.comparator.layer_c * eps) - 1e-9);
    return std::max(c.cells, static_cast<std::size_t>(wanted));
}

namespace {

// Fine reference grid shared by every sweep entry, if one exists.
std::optional<std::size_t> shared_fine_cells(const RunConfig& c) {
    std::size_t n_max = 0;
    for (double e : c.sweep_epsilons) n_max = std::max(n_max, sweep_cells(c, e));
    const std::size_t fine = c.refinement * n_max;
    for (double e : c.sweep_epsilons)
        if (fine % sweep_cells(c, e) != 0) return std::nullopt;
    return fine;
}

} // namespace

RunConfig sweep_entry_config(const RunConfig& c, double eps) {
    RunConfig e = c;
    e.epsilon = eps;
    e.cells = sweep_cells(c, eps);
    e.sweep_epsilons = {eps};
    if (const auto fine = shared_fine_cells(c)) e.refinement = *fine / e.cells;
    return e;
}

std::size_t sweep_threads(std::size_t jobs, std::size_t entries) {
    std::size_t n = std::max<std::size_t>(1, jobs);
    if (const char* env = std::getenv("VLL_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(1, std::min(n, entries));
}

std::string sweep_csv(const SweepResult& s) {
    std::ostringstream os;
    os << "epsilon,r1,metric,E0,ET,kato_monitor,lgamma_monitor,gronwall_C\n";
    for (const auto& r : s.rows)
        os << format_double(r.epsilon) << ',' << format_double(r.r1) << ',' << format_double(r.metric) << ','
           << format_double(r.E0) << ',' << format_double(r.ET) << ',' << format_double(r.kato_monitor) << ','
           << format_double(r.lgamma_monitor) << ',' << format_double(r.gronwall_C) << '\n';
    return os.str();
}

namespace {

void summarize(SweepResult& s) {
    const auto& rows = s.rows;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        s.metric_strictly_decreasing = s.metric_strictly_decreasing && rows[i].metric < rows[i - 1].metric;
        s.kato_monotone = s.kato_monotone && rows[i].kato_monitor < rows[i - 1].kato_monitor;
        s.lgamma_monotone = s.lgamma_monotone && rows[i].lgamma_monitor < rows[i - 1].lgamma_monitor;
    }
    if (rows.size() >= 2 && std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.metric > 0.0; })) {
        std::vector<double> e, m;
        for (const auto& r : rows) {
            e.push_back(r.epsilon);
            m.push_back(r.metric);
        }
        s.metric_slope = loglog_slope(e, m);
    }
    std::vector<double> cs;
    for (const auto& r : rows) cs.push_back(r.gronwall_C);
    s.gronwall_ratio = BudgetLadder::drift(cs);
}

std::string sweep_summary_json(const SweepResult& s) {
    nlohmann::json j;
    j["rows"] = s.rows.size();
    j["metric_slope"] = s.metric_slope ? nlohmann::json(*s.metric_slope) : nlohmann::json(nullptr);
    j["metric_strictly_decreasing"] = s.metric_strictly_decreasing;
    j["kato_monotone"] = s.kato_monotone;
    j["lgamma_monotone"] = s.lgamma_monotone;
    j["gronwall_ratio"] = std::isfinite(s.gronwall_ratio) ? nlohmann::json(s.gronwall_ratio) : nlohmann::json(nullptr);
    return j.dump(2) + "\n";
}

void write_sweep(const SweepResult& s, const std::filesystem::path& dir) {
    write_file_atomic(dir / "sweep.csv", sweep_csv(s));
    write_file_atomic(dir / "sweep_summary.json", sweep_summary_json(s));
}

} // namespace

SweepResult sweep(const RunConfig& config, std::size_t jobs, const std::optional<std::filesystem::path>& out) {
    config.validate();
    const auto& eps_list = config.sweep_epsilons;
    const std::size_t n = eps_list.size();

    std::optional<EulerReference> shared;
    if (const auto fine = shared_fine_cells(config)) {
        const RunConfig first = sweep_entry_config(config, eps_list.front());
        shared = solve_reference(make_grid(first.length, first.cells), first.datum, first.eos, first.horizon,
                                 first.refinement, {first.cadence, first.cfl});
    }

    std::vector<std::optional<SweepRow>> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                RunConfig entry = sweep_entry_config(config, eps_list[i]);
                entry.write_snapshots = false;
                std::optional<std::filesystem::path> dir;
                if (out) dir = *out / ("eps_" + std::to_string(i));
                const RunResult r = shared ? run_single(entry, *shared, dir) : run_single(entry, dir);
                SweepRow row;
                row.epsilon = entry.epsilon;
                row.r1 = entry.drag_for(entry.epsilon);
                row.cells = entry.cells;
                row.metric = r.report.metric.sup;
                row.E0 = r.report.E0;
                row.ET = r.report.energy.total.back();
                row.kato_monitor = r.report.conditions.kato_monitor;
                row.lgamma_monitor = r.report.conditions.lgamma_monitor;
                row.gronwall_C = r.report.gronwall.C;
                row.eta = r.report.remainders.eta;
                row.unreliable = r.report.unreliable;
                rows[i] = row;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = sweep_threads(jobs, n);
    std::vector<std::jthread> pool;
    for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    pool.clear();

    SweepResult result;
    for (const auto& r : rows)
        if (r) result.rows.push_back(*r);
    summarize(result);
    if (out) write_sweep(result, *out);
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return result;
}

bool CheckReport::all_passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed; });
}

namespace {

CheckItem order_item(const OrderStudy& s, double min_order) {
    return {s.name + " order", s.converges_at(min_order),
            "observed " + format_double(s.order) + ", required >= " + format_double(min_order)};
}

CheckItem cutoff_item(const CutoffFunction& c) {
    std::string issue;
    if (c.xi(0.0) != 1.0) issue += "xi(0)=" + format_double(c.xi(0.0)) + " ";
    if (c.dxi(0.0) != 0.0) issue += "xi'(0)=" + format_double(c.dxi(0.0)) + " ";
    for (double r : {1.0, 1.5, 2.0, 3.0})
        if (c.xi(r) != 0.0 || c.dxi(r) != 0.0 || c.d2xi(r) != 0.0) issue += "nonzero at r=" + format_double(r) + " ";
    for (int k = 0; k <= 1000; ++k) {
        const double r = k / 1000.0;
        if (!std::isfinite(c.xi(r)) || !std::isfinite(c.dxi(r)) || !std::isfinite(c.d2xi(r))) {
            issue += "unbounded near r=" + format_double(r) + " ";
            break;
        }
    }
    return {"cutoff invariants", issue.empty(), issue.empty() ? "xi(0)=1, support in [0,1), bounded" : issue};
}

CheckItem entropy_item(const EosParams& eos) {
    double worst = 0.0;
    for (int k = 0; k <= 600; ++k) {
        const double rho = std::pow(10.0, -3.0 + k / 100.0);
        const double p = pressure(rho, eos);
        const double res = rho * entropy_dH(rho, eos) - entropy_H(rho, eos) - p;
        worst = std::max(worst, std::abs(res) / p);
    }
    return {"entropy algebra a=" + format_double(eos.a) + " gamma=" + format_double(eos.gamma), worst <= 1e-14,
            "max relative residual " + format_double(worst)};
}

CheckItem gamma2_item() {
    const EosParams eos{1.5, 2.0};
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k)
        for (int j = 1; j <= 50; ++j) {
            const double rho = 0.1 * k, r = 0.1 * j;
            const double exact = eos.a * (rho - r) * (rho - r);
            worst = std::max(worst, std::abs(relative_entropy(rho, r, eos) - exact) / std::max(exact, 1e-300));
        }
    return {"relative entropy closed form at gamma=2", worst <= 1e-12, "max relative error " + format_double(worst)};
}

CheckItem augment_item(const RunConfig& c) {
    const Grid g = make_grid(c.length, 256);
    const InitialDatum d = well_prepared_init(g, c.datum);
    const AugmentedState a = augment(g, make_state(0.0, d.rho, d.u), std::max(c.epsilon, 0.01));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.cells; ++i) {
        const double scale = std::abs(a.u[i]) + std::abs(a.w[i]);
        if (scale > 0.0) worst = std::max(worst, std::abs((a.v[i] - a.w[i]) - a.u[i]) / scale);
    }
    return {"augmented v - w = u", worst <= 4e-16, "max relative deviation " + format_double(worst)};
}

} // namespace

CheckReport check_suite(const RunConfig& config, const CutoffFunction& cutoff) {
    config.validate();
    CheckReport rep;
    rep.items.push_back(cutoff_item(cutoff));
    rep.items.push_back(entropy_item(config.eos));
    rep.items.push_back(entropy_item({1.0, 2.0}));
    rep.items.push_back(gamma2_item());
    rep.items.push_back(augment_item(config));
    rep.items.push_back(order_item(derivation_identity_study(), 1.8));
    {
        const Grid2D g = make_periodic_grid(64);
        const Field2D rho = sample(g, [](double x, double y) { return 2.0 + std::sin(x) * std::sin(y); });
        const double sym = hessian_symmetry_residual(g, rho);
        rep.items.push_back({"log-density Hessian symmetry", sym <= 1e-12, "max residual " + format_double(sym)});
    }
    rep.items.push_back(order_item(curl_free_study(), 1.8));
    rep.items.push_back(order_item(lemma_identity_study(), 1.8));
    for (auto which : {LayerIdentity::first_derivative, LayerIdentity::first_derivative_ztilde,
                       LayerIdentity::second_derivative})
        rep.items.push_back(order_item(layer_calculus_study(which, {800, 1600, 3200, 6400}, cutoff), 1.8));

    const BudgetLadder ladder = budget_ladder({128, 256, 512}, 0.01, 0.05, 0.001);
    const double de = BudgetLadder::drift(ladder.c_energy), dk = BudgetLadder::drift(ladder.c_k_entropy);
    rep.items.push_back({"energy budget ladder", de < 2.0, "C drift " + format_double(de)});
    rep.items.push_back({"kinetic-entropy budget ladder", dk < 2.0, "C drift " + format_double(dk)});
    return rep;
}

ScalingTable layer_scaling(const RunConfig& config, const std::optional<std::filesystem::path>& out) {
    config.validate();
    ScalingOptions opt;
    opt.length = config.length;
    const std::vector<double> ps{1.0, 2.0, 4.0};
    ScalingTable table = layer_norm_scalings(wall_tangential_profile(config.length), config.comparator.layer_c,
                                             config.layer_epsilons, ps, opt);
    if (out) write_scaling_csv(table, *out / "layer_scaling.csv");
    return table;
}

} // namespace vll
