#include "swarmstab/cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "swarmstab/errors.hpp"
#include "swarmstab/harness.hpp"

namespace swarmstab {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string algo;
    std::optional<std::uint64_t> seed;
    bool parallel = false;
};

fs::path output_dir(const Options& o, const std::optional<std::string>& from_config) {
    if (!o.out.empty()) return o.out;
    if (from_config) return *from_config;
    if (const char* env = std::getenv("SWARMSTAB_OUT"); env && *env) return env;
    return "out";
}

void apply_overrides(RunConfig& cfg, const Options& o) {
    if (o.seed) cfg.seed = cfg.pso.seed = cfg.bfo.seed = *o.seed;
    if (o.parallel) cfg.parallel = true;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const auto cfg = load_run_config(o.config);
    const auto dir = output_dir(o, cfg.output_dir);
    const auto res = run_simulation(cfg);
    write_trace_csv(dir / "trace.csv", res.trace);
    write_json(dir / "metrics.json", metrics_json(res, cfg.scenario, cfg.baseline_pid, cfg.baseline_stabilizer));
    out << "scenario " << cfg.scenario.label << ": ITAE " << res.itae << ", settling(delta_omega) "
        << res.metric("delta_omega").settling_time << " s, max Re(eig) " << res.max_re_eig << "\n";
    out << "wrote " << (dir / "trace.csv").string() << " and " << (dir / "metrics.json").string() << "\n";
    return exit_ok;
}

int cmd_tune(const Options& o, std::ostream& out) {
    auto cfg = load_run_config(o.config);
    if (!o.algo.empty()) cfg.optimizer = parse_algorithm(o.algo);
    if (cfg.optimizer == Algorithm::none) throw ConfigError("optimizer", "choose --algo pso or --algo bfo");
    apply_overrides(cfg, o);
    const auto dir = output_dir(o, cfg.output_dir);
    const auto res = run_tuning(cfg, dir);
    out << report_text(res.report);
    out << "evaluations: " << res.opt.evaluations << "\nwrote " << (dir / "report.json").string() << "\n";
    return exit_ok;
}

int cmd_compare(const Options& o, std::ostream& out) {
    auto cc = load_compare_config(o.config);
    for (auto& r : cc.runs) apply_overrides(r, o);
    const auto dir = output_dir(o, cc.output_dir);
    const auto reports = compare(cc.runs, dir);
    for (const auto& r : reports) out << report_text(r) << "\n";
    out << "wrote " << reports.size() << " report(s) under " << dir.string() << "\n";
    return exit_ok;
}

int report_diagnostics(const std::string& what, const std::vector<Diagnostic>& diags, std::ostream& out) {
    for (const auto& d : diags) out << what << ": " << d.to_string() << "\n";
    return has_errors(diags) ? exit_config_error : exit_ok;
}

int validate_run(const RunConfig& r, std::ostream& out) {
    int code = report_diagnostics(r.scenario.label, validate_config(r.scenario.plant), out);
    const ItaeObjective objective(r.scenario);
    const auto ev = objective.evaluate(r.baseline_pid, r.baseline_stabilizer);
    if (!ev.stable)
        out << r.scenario.label << ": warning: baseline closed loop is unstable (max Re(eig) = " << ev.max_re_eig
            << ")\n";
    return code;
}

int cmd_validate(const Options& o, std::ostream& out) {
    const Json j = read_json_file(o.config);
    int code = exit_ok;
    switch (detect_kind(j)) {
        case ConfigKind::plant: {
            const auto plant = load_plant_config(o.config);
            code = report_diagnostics(o.config, validate_config(plant), out);
            break;
        }
        case ConfigKind::scenario:
        case ConfigKind::run: code = validate_run(load_run_config(o.config), out); break;
        case ConfigKind::compare:
            for (const auto& r : load_compare_config(o.config).runs) code = std::max(code, validate_run(r, out));
            break;
    }
    if (code == exit_ok) out << "ok: " << o.config << "\n";
    return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tune a PID voltage controller and a lead-lag damping stabilizer for a linearized\n"
                 "single-machine infinite-bus system with a STATCOM, using PSO and BFO.",
                 "swarmstab"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Configuration file (JSON)")->required()->type_name("FILE");
        sub->add_option("--out", o.out,
                        "Output directory (default: output_dir in the config, then $SWARMSTAB_OUT, then ./out)")
            ->type_name("DIR");
    };
    auto* simulate = app.add_subcommand("simulate", "Simulate the baseline controller; writes trace.csv and metrics.json");
    add_common(simulate);
    auto* tune = app.add_subcommand("tune", "Tune the controllers; writes convergence.csv, report.json and report.txt");
    add_common(tune);
    tune->add_option("--algo", o.algo, "Optimizer (overrides the config)")->check(CLI::IsMember({"pso", "bfo"}));
    tune->add_option("--seed", o.seed, "RNG seed (overrides the config)");
    tune->add_flag("--parallel", o.parallel, "Evaluate candidates on several threads (same results)");
    auto* cmp = app.add_subcommand("compare", "Baseline vs PSO-PID vs BFO-PID for every scenario in the config");
    add_common(cmp);
    cmp->add_option("--seed", o.seed, "RNG seed for both optimizers (overrides the config)");
    cmp->add_flag("--parallel", o.parallel, "Evaluate candidates on several threads (same results)");
    auto* validate = app.add_subcommand("validate", "Check a plant, scenario, run or compare config");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return exit_ok;
        }
        err << "error: " << e.what() << "\n\n";
        const CLI::App* shown = &app;
        for (const auto* sub : {simulate, tune, cmp, validate})
            if (sub->parsed()) shown = sub;
        err << shown->help();
        return exit_config_error;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(o, out);
        if (tune->parsed()) return cmd_tune(o, out);
        if (cmp->parsed()) return cmd_compare(o, out);
        return cmd_validate(o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime_error;
    }
}

}  // namespace swarmstab
