#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddbench/bench.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::optional<int>& nx,
            const std::optional<int>& ny, const std::optional<std::string>& partitions,
            const std::optional<int>& reps, const std::optional<double>& tol,
            const std::optional<int>& workers, const std::optional<std::string>& protocols,
            const std::optional<std::string>& out_dir, const std::optional<std::string>& formats) {
    ddbench::ExperimentConfig config;
    if (!config_path.empty()) config = ddbench::load_config_file(config_path);
    if (nx) config.nx = *nx;
    if (ny) config.ny = *ny;
    if (partitions) config.partitions = ddbench::parse_partitions(*partitions);
    if (reps) config.repetitions = *reps;
    if (tol) config.tol = *tol;
    if (workers) config.workers = *workers;
    if (protocols) config.protocols = ddbench::parse_protocols(*protocols);
    if (out_dir) config.out_dir = *out_dir;
    if (formats) config.formats = ddbench::parse_formats(*formats);

    ddbench::ResultSet rs = ddbench::run_experiment(config);
    std::vector<std::filesystem::path> written = ddbench::save_results(rs, config.out_dir);
    ddbench::EfficiencyReport report = ddbench::derive_report(rs);
    for (ddbench::OutputFormat f : config.formats)
        written.push_back(ddbench::emit(report, f, config.out_dir));

    for (const auto& p : written) std::printf("wrote %s\n", p.string().c_str());
    std::fputs("\n", stdout);
    std::fputs(ddbench::render_table(report).c_str(), stdout);
    return 0;
}

int cmd_report(const std::string& in_path, const std::optional<std::string>& out_dir,
               const std::optional<std::string>& formats) {
    ddbench::ResultSet rs = ddbench::load_results(in_path);
    ddbench::EfficiencyReport report = ddbench::derive_report(rs);

    std::filesystem::path dir =
        out_dir ? std::filesystem::path(*out_dir) : std::filesystem::path(in_path).parent_path();
    if (dir.empty()) dir = ".";

    std::vector<ddbench::OutputFormat> fmts{ddbench::OutputFormat::table};
    if (formats) fmts = ddbench::parse_formats(*formats);

    for (ddbench::OutputFormat f : fmts)
        std::printf("wrote %s\n", ddbench::emit(report, f, dir).string().c_str());
    std::fputs("\n", stdout);
    std::fputs(ddbench::render_table(report).c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"substructured Dirichlet solver benchmark"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "time the solver and emit reports");
    std::string config_path;
    std::optional<int> nx, ny, reps, workers;
    std::optional<double> tol;
    std::optional<std::string> partitions, protocols, out_dir, formats;
    run->add_option("--config", config_path, "key=value config file; flags override it");
    run->add_option("--nx", nx, "interior grid nodes in x");
    run->add_option("--ny", ny, "interior grid nodes in y");
    run->add_option("--partitions", partitions, "comma list like 2x2,4x4");
    run->add_option("--reps", reps, "repetitions per timing cell");
    run->add_option("--tol", tol, "CG relative tolerance");
    run->add_option("--workers", workers, "worker threads, 0 = hardware count");
    run->add_option("--protocols", protocols, "subset of monolithic,parallel,single-local");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--format", formats, "subset of table,csv,json");

    auto* rep = app.add_subcommand("report", "rebuild reports from a saved timings.csv");
    std::string in_path;
    std::optional<std::string> rep_out, rep_formats;
    rep->add_option("--in", in_path, "timings.csv to load")->required();
    rep->add_option("--out", rep_out, "output directory (default: next to --in)");
    rep->add_option("--format", rep_formats, "subset of table,csv,json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, nx, ny, partitions, reps, tol, workers, protocols, out_dir,
                           formats);
        return cmd_report(in_path, rep_out, rep_formats);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
