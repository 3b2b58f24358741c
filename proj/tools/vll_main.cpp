#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vll/error.hpp"
#include "vll/harness.hpp"
#include "vll/io.hpp"

namespace {

enum Exit : int { ok = 0, check_failure = 1, config_error = 2, runtime_error = 3 };

struct Options {
    std::string config;
    std::string out;
    std::vector<double> epsilons;
    std::size_t jobs = 1;
};

vll::RunConfig load(const Options& o) {
    vll::RunConfig c = o.config.empty() ? vll::RunConfig{} : vll::load_config(o.config);
    if (!o.epsilons.empty()) {
        c.sweep_epsilons = o.epsilons;
        c.layer_epsilons = o.epsilons;
        if (o.epsilons.size() == 1) c.epsilon = o.epsilons.front();
    }
    c.validate();
    return c;
}

std::optional<std::filesystem::path> out_dir(const Options& o) {
    if (o.out.empty()) return std::nullopt;
    std::filesystem::create_directories(o.out);
    return std::filesystem::path(o.out);
}

int run(const Options& o) {
    const auto r = vll::run_single(load(o), out_dir(o));
    const auto& rep = r.report;
    std::cout << "E0 " << vll::format_double(rep.E0) << "\n"
              << "E(T) " << vll::format_double(rep.energy.total.back()) << "\n"
              << "metric " << vll::format_double(rep.metric.sup) << "\n"
              << "eta " << vll::format_double(rep.remainders.eta) << "\n"
              << "gronwall C " << vll::format_double(rep.gronwall.C) << "\n";
    if (r.floor_active) std::cout << "warning: density floor was active\n";
    if (r.monitor_tripped) std::cout << "warning: reference smoothness monitor tripped\n";
    if (rep.unreliable) std::cout << "warning: report flagged unreliable\n";
    return r.exit_code == 0 ? ok : check_failure;
}

int sweep(const Options& o) {
    const auto s = vll::sweep(load(o), o.jobs, out_dir(o));
    std::cout << vll::sweep_csv(s);
    if (s.metric_slope) std::cout << "metric slope " << vll::format_double(*s.metric_slope) << "\n";
    std::cout << "gronwall C ratio " << vll::format_double(s.gronwall_ratio) << "\n";
    const bool flagged = std::any_of(s.rows.begin(), s.rows.end(), [](const auto& r) { return r.unreliable; });
    return flagged ? check_failure : ok;
}

int check(const Options& o) {
    const auto rep = vll::check_suite(load(o));
    for (const auto& item : rep.items)
        std::cout << (item.passed ? "PASS " : "FAIL ") << item.name << ": " << item.detail << "\n";
    return rep.all_passed() ? ok : check_failure;
}

int layer_scaling(const Options& o) {
    const auto table = vll::layer_scaling(load(o), out_dir(o));
    for (const auto& name : table.norm_names())
        std::cout << name << " fitted " << vll::format_double(table.fitted(name)) << " expected "
                  << vll::format_double(table.expected(name)) << "\n";
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vanishing-viscosity relative-energy harness"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "TOML configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "Artifact directory");
        sub->add_option("--epsilon", opt.epsilons, "Viscosity list, overrides the config")->delimiter(',');
    };
    auto* run_cmd = app.add_subcommand("run", "Single viscous run against the Euler reference");
    auto* sweep_cmd = app.add_subcommand("sweep", "Viscosity sweep");
    auto* check_cmd = app.add_subcommand("check", "Identity, entropy and budget checks");
    auto* layer_cmd = app.add_subcommand("layer-scaling", "Boundary-layer norm scalings");
    for (auto* sub : {run_cmd, sweep_cmd, check_cmd, layer_cmd}) add_common(sub);
    sweep_cmd->add_option("--jobs", opt.jobs, "Concurrent sweep entries")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*run_cmd) return run(opt);
        if (*sweep_cmd) return sweep(opt);
        if (*check_cmd) return check(opt);
        return layer_scaling(opt);
    } catch (const vll::Error& e) {
        std::cerr << "error (" << vll::to_string(e.kind()) << "): " << e.what();
        if (e.time()) std::cerr << " at t=" << vll::format_double(*e.time());
        std::cerr << "\n";
        switch (e.kind()) {
        case vll::ErrorKind::invalid_configuration:
        case vll::ErrorKind::invalid_data:
        case vll::ErrorKind::under_resolved_layer:
            return config_error;
        default:
            return runtime_error;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return runtime_error;
    }
}
