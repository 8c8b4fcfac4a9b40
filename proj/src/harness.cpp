#include "swarmstab/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "swarmstab/errors.hpp"

namespace swarmstab {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string directory_name(const std::string& label) {
    std::string out;
    for (char c : label) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? "scenario" : out;
}

}  // namespace

const ResponseMetrics<double>& SimulationResult::metric(const std::string& channel) const {
    for (const auto& [name, m] : metrics)
        if (name == channel) return m;
    throw std::out_of_range("no metrics for channel '" + channel + "'");
}

ResponseMetrics<double> channel_metrics(const SimTrace<double>& trace, const std::string& channel) {
    return response_metrics(trace.channel(channel), trace.dt(), 0.0, 0.0);
}

SimulationResult run_simulation(const Scenario& s, const PidGains& pid, const StabilizerParams& stab) {
    const ItaeObjective objective(s);
    const auto closed = assemble_closed_loop(objective.plant(), pid, stab, s.wiring);
    SimulationResult r{simulate(s, objective.plant(), pid, stab), {}, 0, 0, false};
    r.max_re_eig = spectral_abscissa(closed.a, "closed-loop state matrix");
    r.stable = r.max_re_eig < 0.0;
    r.itae = itae(r.trace, s.weights);
    for (const char* ch : metric_channels) r.metrics.emplace_back(ch, channel_metrics(r.trace, ch));
    return r;
}

SimulationResult run_simulation(const RunConfig& cfg) {
    return run_simulation(cfg.scenario, cfg.baseline_pid, cfg.baseline_stabilizer);
}

ReportRow make_row(const std::string& label, const Scenario& s, const PidGains& pid, const StabilizerParams& stab) {
    const ItaeObjective objective(s);
    const auto ev = objective.evaluate(pid, stab);
    ReportRow row{label, pid, stab, ev.cost, std::nullopt, std::nullopt, true, ev.max_re_eig, ev.stable};
    if (ev.stable && !ev.diverged) {
        const auto trace = simulate(s, objective.plant(), pid, stab);
        row.settling_time_domega = channel_metrics(trace, "delta_omega").settling_time;
        const auto vm = channel_metrics(trace, "delta_vm");
        row.peak_overshoot_vm = vm.peak_overshoot;
        row.peak_overshoot_vm_absolute = vm.overshoot_absolute;
    }
    return row;
}

OptResult run_optimizer(const RunConfig& cfg, Algorithm algo) {
    const ItaeObjective objective(cfg.scenario);
    const CostFunction f = [&objective](const VectorX<double>& x) { return objective(x); };
    switch (algo) {
        case Algorithm::pso: {
            auto pc = cfg.pso;
            pc.parallel = cfg.parallel;
            return pso_run(pc, f, cfg.bounds);
        }
        case Algorithm::bfo: {
            auto bc = cfg.bfo;
            bc.parallel = cfg.parallel;
            return bfo_run(bc, f, cfg.bounds);
        }
        case Algorithm::none: break;
    }
    throw ConfigError("optimizer", "no optimizer selected (use pso or bfo)");
}

namespace {

const char* tuned_label(Algorithm a) { return a == Algorithm::pso ? "PSO-PID" : "BFO-PID"; }

ReportRow tuned_row(Algorithm a, const RunConfig& cfg, const OptResult& opt) {
    const auto [pid, stab] = controllers_from(opt.best.values, cfg.scenario);
    return make_row(tuned_label(a), cfg.scenario, pid, stab);
}

Json optimizer_summary(const OptResult& r, const std::string& algo) {
    return {{"algorithm", algo},
            {"seed", r.seed},
            {"best_cost", r.best_cost},
            {"evaluations", r.evaluations},
            {"iterations", r.history.size()}};
}

}  // namespace

TuningResult run_tuning(const RunConfig& cfg, const fs::path& out_dir) {
    if (cfg.optimizer == Algorithm::none) throw ConfigError("optimizer", "tuning needs pso or bfo");
    TuningResult res;
    res.opt = run_optimizer(cfg, cfg.optimizer);
    res.report.scenario_label = cfg.scenario.label;
    res.report.seed = res.opt.seed;
    res.report.rows.push_back(make_row("PID (baseline)", cfg.scenario, cfg.baseline_pid, cfg.baseline_stabilizer));
    res.report.rows.push_back(tuned_row(cfg.optimizer, cfg, res.opt));
    res.report.config = to_json(cfg);

    write_convergence_csv(out_dir / "convergence.csv", res.opt);
    write_json(out_dir / "report.json", report_json(res.report, &res.opt, to_string(cfg.optimizer)));
    auto txt = open_out(out_dir / "report.txt");
    txt << report_text(res.report);
    return res;
}

std::vector<ComparisonReport> compare(const std::vector<RunConfig>& runs, const fs::path& out_dir) {
    if (runs.empty()) throw ConfigError("runs", "at least one run config is required");
    std::vector<ComparisonReport> reports;
    std::set<std::string> used;
    std::string summary;
    Json index = Json::array();
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto& cfg = runs[k];
        std::string dir = directory_name(cfg.scenario.label);
        if (!used.insert(dir).second) dir += "_" + std::to_string(k);
        const fs::path sub = out_dir / dir;

        const auto pso = run_optimizer(cfg, Algorithm::pso);
        const auto bfo = run_optimizer(cfg, Algorithm::bfo);
        ComparisonReport rep;
        rep.scenario_label = cfg.scenario.label;
        rep.seed = cfg.seed;
        rep.rows.push_back(make_row("PID (baseline)", cfg.scenario, cfg.baseline_pid, cfg.baseline_stabilizer));
        rep.rows.push_back(tuned_row(Algorithm::pso, cfg, pso));
        rep.rows.push_back(tuned_row(Algorithm::bfo, cfg, bfo));
        rep.config = to_json(cfg);

        write_convergence_csv(sub / "convergence_pso.csv", pso);
        write_convergence_csv(sub / "convergence_bfo.csv", bfo);
        Json rj = report_json(rep);
        rj["optimizers"] = Json::array({optimizer_summary(pso, "pso"), optimizer_summary(bfo, "bfo")});
        write_json(sub / "report.json", rj);
        const std::string table = report_text(rep);
        open_out(sub / "report.txt") << table;
        summary += table + "\n";

        // Voltage in absolute pu (nominal 1.0) next to the deviation channels;
        // unstable rows are left empty.
        const auto plant = build_plant(cfg.scenario.plant);
        std::vector<std::optional<SimTrace<double>>> traces;
        for (const auto& row : rep.rows) {
            if (row.stable && row.settling_time_domega) traces.emplace_back(simulate(cfg.scenario, plant, row.pid, row.stabilizer));
            else traces.emplace_back();
        }
        auto csv = open_out(sub / "responses.csv");
        const char* tags[] = {"baseline", "pso", "bfo"};
        csv << "t";
        for (const char* tag : tags) csv << ",delta_omega_" << tag << ",vm_" << tag << ",delta_vdc_" << tag;
        csv << "\n";
        const auto samples = step_count(cfg.scenario.weights.t_sim, cfg.scenario.dt) + 1;
        for (Eigen::Index i = 0; i < samples; ++i) {
            csv << fmt(static_cast<double>(i) * cfg.scenario.dt);
            for (const auto& tr : traces) {
                if (tr)
                    csv << ',' << fmt(tr->channel("delta_omega")(i)) << ',' << fmt(1.0 + tr->channel("delta_vm")(i))
                        << ',' << fmt(tr->channel("delta_vdc")(i));
                else
                    csv << ",,,";
            }
            csv << "\n";
        }
        index.push_back({{"scenario_label", rep.scenario_label}, {"directory", dir}});
        reports.push_back(std::move(rep));
    }
    write_json(out_dir / "compare.json", Json{{"reports", index}});
    open_out(out_dir / "summary.txt") << summary;
    return reports;
}

// ---------------------------------------------------------------------------
// Files

void write_trace_csv(const fs::path& path, const SimTrace<double>& trace) {
    auto out = open_out(path);
    out << "t";
    for (const auto& c : trace_columns) out << ',' << c.column;
    out << "\n";
    std::vector<Eigen::Index> cols;
    for (const auto& c : trace_columns) {
        const auto it = std::find(trace.names().begin(), trace.names().end(), c.channel);
        if (it == trace.names().end()) throw std::out_of_range(std::string("trace lacks channel ") + c.channel);
        cols.push_back(it - trace.names().begin());
    }
    const auto& v = trace.values();
    for (Eigen::Index k = 0; k < trace.samples(); ++k) {
        out << fmt(trace.time(k));
        for (auto c : cols) out << ',' << fmt(v(k, c));
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

SimTrace<double> read_trace_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.empty() || header.front() != "t") throw std::runtime_error(path.string() + ": first column must be t");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != header.size()) throw std::runtime_error(path.string() + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw std::runtime_error(path.string() + ": need at least two samples");
    const double dt = rows[1][0] - rows[0][0];
    SimTrace<double> trace(dt, static_cast<Eigen::Index>(rows.size()), {header.begin() + 1, header.end()});
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t c = 1; c < header.size(); ++c)
            trace.values()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c - 1)) = rows[k][c];
    return trace;
}

Json metrics_json(const SimulationResult& r, const Scenario& s, const PidGains& pid, const StabilizerParams& stab) {
    Json j;
    j["scenario_label"] = s.label;
    j["pid"] = to_json(pid);
    j["stabilizer"] = to_json(stab);
    j["dt"] = r.trace.dt();
    j["t_sim"] = r.trace.t_end();
    j["samples"] = r.trace.samples();
    j["itae"] = r.itae;
    j["max_re_eig"] = r.max_re_eig;
    j["stable"] = r.stable;
    j["settling_band"] = 0.02;
    Json ch = Json::object();
    for (const auto& [name, m] : r.metrics)
        ch[name] = {{"settling_time", m.settling_time},
                    {"peak_overshoot", m.peak_overshoot},
                    {"overshoot_absolute", m.overshoot_absolute},
                    {"peak_time", m.peak_time},
                    {"itae_contribution", m.itae_contribution}};
    j["channels"] = ch;
    return j;
}

void write_convergence_csv(const fs::path& path, const OptResult& r) {
    auto out = open_out(path);
    out << "iteration,best_cost,mean_cost,dispersal_probability_used\n";
    for (const auto& h : r.history)
        out << h.iteration << ',' << fmt(h.best_cost) << ',' << fmt(h.mean_cost) << ','
            << fmt(h.dispersal_probability_used) << "\n";
}

Json report_json(const ComparisonReport& r, const OptResult* opt, const std::string& algo) {
    Json j;
    j["scenario_label"] = r.scenario_label;
    j["seed"] = r.seed;
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"label", row.label},
                        {"kp", row.pid.kp},
                        {"ki", row.pid.ki},
                        {"kd", row.pid.kd},
                        {"kc", row.stabilizer.kc},
                        {"t1c", row.stabilizer.t1c},
                        {"t3c", row.stabilizer.t3c},
                        {"itae", row.itae},
                        {"settling_time_domega", optional_json(row.settling_time_domega)},
                        {"peak_overshoot_vm", optional_json(row.peak_overshoot_vm)},
                        {"peak_overshoot_vm_absolute", row.peak_overshoot_vm_absolute},
                        {"max_re_eig", row.max_re_eig},
                        {"stable", row.stable}});
    j["rows"] = rows;
    if (opt) j["optimizer"] = optimizer_summary(*opt, algo);
    j["config"] = r.config;
    return j;
}

std::string report_text(const ComparisonReport& r) {
    std::ostringstream os;
    os << "scenario: " << r.scenario_label << "   seed: " << r.seed << "\n";
    os << std::left << std::setw(16) << "controller" << std::right << std::setw(9) << "kp" << std::setw(9) << "ki"
       << std::setw(9) << "kd" << std::setw(9) << "kc" << std::setw(8) << "t1c" << std::setw(8) << "t3c"
       << std::setw(12) << "ITAE" << std::setw(10) << "Ts_dw[s]" << std::setw(11) << "OS_vm[pu]" << std::setw(11)
       << "maxRe" << "  stable\n";
    os << std::fixed;
    for (const auto& row : r.rows) {
        os << std::left << std::setw(16) << row.label << std::right << std::setprecision(3) << std::setw(9)
           << row.pid.kp << std::setw(9) << row.pid.ki << std::setw(9) << row.pid.kd << std::setw(9)
           << row.stabilizer.kc << std::setprecision(3) << std::setw(8) << row.stabilizer.t1c << std::setw(8)
           << row.stabilizer.t3c << std::setprecision(6) << std::setw(12) << row.itae;
        if (row.settling_time_domega) os << std::setprecision(3) << std::setw(10) << *row.settling_time_domega;
        else os << std::setw(10) << "-";
        if (row.peak_overshoot_vm) os << std::setprecision(5) << std::setw(11) << *row.peak_overshoot_vm;
        else os << std::setw(11) << "-";
        os << std::setprecision(4) << std::setw(11) << row.max_re_eig << "  " << (row.stable ? "yes" : "NO") << "\n";
    }
    return os.str();
}

void write_json(const fs::path& path, const Json& j) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace swarmstab
