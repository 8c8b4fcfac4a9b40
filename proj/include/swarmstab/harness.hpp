#ifndef SWARMSTAB_HARNESS_HPP
#define SWARMSTAB_HARNESS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "swarmstab/config_io.hpp"
#include "swarmstab/metrics.hpp"

namespace swarmstab {

/// Channels written to trace.csv, in column order after t, with their trace source.
struct TraceColumn {
    const char* column;
    const char* channel;
};
inline constexpr TraceColumn trace_columns[] = {
    {"delta_delta", "delta_delta"}, {"delta_omega", "delta_omega"}, {"delta_eq", "x_eq"},
    {"delta_efd", "x_efd"},         {"delta_vdc", "delta_vdc"},     {"delta_vm", "delta_vm"},
    {"u_pid", "u_pid"},             {"u_stab", "u_stab"},
};

/// Channels summarized in metrics.json and reports.
inline constexpr const char* metric_channels[] = {"delta_omega", "delta_vm", "delta_vdc"};

struct SimulationResult {
    SimTrace<double> trace;
    std::vector<std::pair<std::string, ResponseMetrics<double>>> metrics;
    double itae = 0;
    double max_re_eig = 0;
    bool stable = false;

    const ResponseMetrics<double>& metric(const std::string& channel) const;
};

/// Deviation channels settle to 0 and have reference 0.
ResponseMetrics<double> channel_metrics(const SimTrace<double>& trace, const std::string& channel);

SimulationResult run_simulation(const Scenario& s, const PidGains& pid, const StabilizerParams& stab);
/// Baseline controller of the run config.
SimulationResult run_simulation(const RunConfig& cfg);

struct ReportRow {
    std::string label;
    PidGains pid;
    StabilizerParams stabilizer;
    double itae = 0;
    std::optional<double> settling_time_domega;
    std::optional<double> peak_overshoot_vm;
    bool peak_overshoot_vm_absolute = true;
    double max_re_eig = 0;
    bool stable = false;
};

struct ComparisonReport {
    std::string scenario_label;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    Json config;  ///< resolved run config(s)
};

ReportRow make_row(const std::string& label, const Scenario& s, const PidGains& pid, const StabilizerParams& stab);

struct TuningResult {
    OptResult opt;
    ComparisonReport report;
};

OptResult run_optimizer(const RunConfig& cfg, Algorithm algo);

/// Tunes with cfg.optimizer and writes convergence.csv, report.json and report.txt into out_dir.
TuningResult run_tuning(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Baseline, PSO-PID and BFO-PID per run config. Each scenario gets its own
/// subdirectory with report.json, report.txt, responses.csv and both
/// convergence files; summary.txt lists all tables.
std::vector<ComparisonReport> compare(const std::vector<RunConfig>& runs, const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Files

void write_trace_csv(const std::filesystem::path& path, const SimTrace<double>& trace);
/// Reads any single-header CSV whose first column is t on a uniform grid.
SimTrace<double> read_trace_csv(const std::filesystem::path& path);

Json metrics_json(const SimulationResult& r, const Scenario& s, const PidGains& pid, const StabilizerParams& stab);
void write_convergence_csv(const std::filesystem::path& path, const OptResult& r);
Json report_json(const ComparisonReport& r, const OptResult* opt = nullptr, const std::string& algo = {});
std::string report_text(const ComparisonReport& r);

/// Compact-but-stable JSON text written to disk (two-space indent, trailing newline).
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace swarmstab

#endif  // SWARMSTAB_HARNESS_HPP
