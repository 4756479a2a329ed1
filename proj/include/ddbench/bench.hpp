#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ddbench/dd.hpp"
#include "ddbench/metrics.hpp"

namespace ddbench {

enum class OutputFormat { table, csv, json };

const char* to_string(OutputFormat format);
OutputFormat output_format_from_string(const std::string& s);

struct ExperimentConfig {
    int nx = 0;
    int ny = 0;
    std::vector<std::pair<int, int>> partitions;  // (px, py); a 1x1 entry folds into the monolithic run
    int workers = 0;                              // worker threads for the parallel protocol, 0 = hardware count
    int repetitions = 3;
    double tol = 1e-8;
    std::vector<TimingKind> protocols{TimingKind::monolithic, TimingKind::parallel,
                                      TimingKind::single_local};
    std::uint64_t seed = 1;  // load vectors are reproducible across runs and machines
    std::string out_dir = ".";
    std::vector<OutputFormat> formats{OutputFormat::table};
};

// One repetition of one timing cell.  residual is NaN when the solver failed;
// failure rows are persisted but never aggregated.
struct RawRow {
    TimingKind kind = TimingKind::monolithic;
    int p = 1;
    std::int64_t n = 0;        // global problem size the cell belongs to
    std::int64_t local_n = 0;  // size of the system the cell actually solved
    int workers = 1;
    int rep = 0;
    double seconds = 0.0;
    int iterations = 0;  // CG iterations; 0 for direct solves
    double residual = 0.0;
};

struct EnvironmentStamp {
    std::string hostname;
    std::string cpu_model;
    int logical_cores = 0;
    std::string timestamp_utc;
    double timer_resolution = 0.0;  // measured smallest positive clock step, seconds
};

EnvironmentStamp capture_environment();
double measure_timer_resolution();

struct ResultSet {
    ExperimentConfig config;
    EnvironmentStamp stamp;
    std::vector<RawRow> rows;

    // Minimum over valid repetitions, keyed (kind, p, n); sorted by (n, kind, p).
    std::vector<TimingRecord> records() const;
};

// Runs the requested protocols single-threaded (only solve_dd fans out
// internally).  A non-converging cell is recorded as a failure row and the
// run continues.
ResultSet run_experiment(const ExperimentConfig& config);

// Builds the derived-metric rows from aggregated records.  Every group of
// records sharing n needs its monolithic time; single-local records feed the
// divide-and-conquer columns and rows lacking them keep those cells empty.
// timer_resolution > 0 flags cells measured below 100x the clock step.
EfficiencyReport derive_report(std::span<const TimingRecord> records,
                               double timer_resolution = 0.0);
EfficiencyReport derive_report(const ResultSet& rs);

// Renderings are deterministic functions of the report alone; no hostnames,
// timestamps or other run identity leak in, so equal reports give equal bytes.
std::string render_table(const EfficiencyReport& report);
std::string render_csv(const EfficiencyReport& report);
std::string render_json(const EfficiencyReport& report);

// Writes report.txt / report.csv / report.json into dir; returns the path.
std::filesystem::path emit(const EfficiencyReport& report, OutputFormat format,
                           const std::filesystem::path& dir);

// timings.csv holds one line per repetition in the exact raw schema
// (kind,p,n,local_n,workers,rep,seconds,iterations,residual); run.json mirrors
// the rows plus the config and environment stamp.  Returns the paths written.
std::vector<std::filesystem::path> save_results(const ResultSet& rs,
                                                const std::filesystem::path& dir);

// Reads a timings.csv back.  The raw schema carries no config or environment;
// both are restored from a run.json sitting next to the csv when present,
// otherwise inferred conservatively from the rows (repetitions, protocols).
ResultSet load_results(const std::filesystem::path& path);

// Flag/config-file value parsing.  Lists are comma separated; partitions look
// like "2x2,4x4"; protocol names accept '-' or '_'.
std::vector<std::pair<int, int>> parse_partitions(const std::string& text);
std::vector<TimingKind> parse_protocols(const std::string& text);
std::vector<OutputFormat> parse_formats(const std::string& text);

// One key=value assignment, shared by the config-file reader and the CLI.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value, int line = 0);
ExperimentConfig load_config_file(const std::filesystem::path& path);

}  // namespace ddbench
