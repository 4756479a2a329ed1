#include "ddbench/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace ddbench {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kRawHeader = "kind,p,n,local_n,workers,rep,seconds,iterations,residual";

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string g17(double v) { return fmt("%.17g", v); }

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

long long parse_ll(const std::string& s, const char* what, int line) {
    long long v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last || s.empty())
        throw ParseError(std::string("bad ") + what + " '" + s + "'", line);
    return v;
}

double parse_num(const std::string& s, const char* what, int line) {
    if (s.empty()) throw ParseError(std::string("missing ") + what, line);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw ParseError(std::string("bad ") + what + " '" + s + "'", line);
    return v;
}

bool has_kind(const std::vector<TimingKind>& kinds, TimingKind k) {
    return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

}  // namespace

const char* to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::table: return "table";
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
    }
    return "?";
}

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "table") return OutputFormat::table;
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ParseError("unknown output format '" + s + "'", 0);
}

double measure_timer_resolution() {
    using clock = std::chrono::steady_clock;
    double best = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 200; ++trial) {
        auto t0 = clock::now();
        auto t1 = t0;
        do {
            t1 = clock::now();
        } while (t1 == t0);
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

EnvironmentStamp capture_environment() {
    EnvironmentStamp s;

    char host[256] = {};
    s.hostname = gethostname(host, sizeof host - 1) == 0 ? host : "unknown";

    s.cpu_model = "unknown";
    std::ifstream cpuinfo("/proc/cpuinfo");
    for (std::string line; std::getline(cpuinfo, line);) {
        if (line.rfind("model name", 0) == 0) {
            std::size_t colon = line.find(':');
            if (colon != std::string::npos) s.cpu_model = trim(line.substr(colon + 1));
            break;
        }
    }

    s.logical_cores = static_cast<int>(std::thread::hardware_concurrency());

    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    s.timestamp_utc = buf;

    s.timer_resolution = measure_timer_resolution();
    return s;
}

std::vector<TimingRecord> ResultSet::records() const {
    struct Cell {
        RawRow best;
        int valid = 0;
    };
    std::map<std::tuple<std::int64_t, int, int>, Cell> cells;
    for (const RawRow& row : rows) {
        if (std::isnan(row.residual) || !std::isfinite(row.seconds)) continue;
        Cell& cell = cells[{row.n, static_cast<int>(row.kind), row.p}];
        if (cell.valid == 0 || row.seconds < cell.best.seconds) cell.best = row;
        ++cell.valid;
    }
    std::vector<TimingRecord> out;
    out.reserve(cells.size());
    for (const auto& [key, cell] : cells) {
        TimingRecord rec;
        rec.kind = static_cast<TimingKind>(std::get<1>(key));
        rec.p = cell.best.p;
        rec.n = cell.best.n;
        rec.seconds = cell.best.seconds;
        rec.workers = cell.best.workers;
        rec.repetitions = cell.valid;
        rec.local_n = cell.best.local_n;
        out.push_back(rec);
    }
    return out;
}

ResultSet run_experiment(const ExperimentConfig& config) {
    if (config.repetitions < 1) throw InvalidTimingError("repetitions must be at least 1");
    if (config.protocols.empty()) throw InvalidTimingError("no timing protocols requested");

    GridSpec grid = build_grid(config.nx, config.ny);
    const std::int64_t n = grid.n();

    bool want_mono = has_kind(config.protocols, TimingKind::monolithic);
    const bool want_par = has_kind(config.protocols, TimingKind::parallel);
    const bool want_single = has_kind(config.protocols, TimingKind::single_local);

    // A 1x1 partition has no interface: its parallel and single-local timings
    // are the monolithic one, so it only promotes that protocol.
    struct Job {
        int px, py;
        Partition part;
    };
    std::vector<Job> jobs;
    for (auto [px, py] : config.partitions) {
        if (px == 1 && py == 1) {
            want_mono = true;
            continue;
        }
        jobs.push_back({px, py, make_partition(grid, px, py)});
    }

    ResultSet rs;
    rs.config = config;
    rs.stamp = capture_environment();

    const int eff_workers = WorkerPool::resolve(config.workers);
    const std::vector<double> f = random_load(n, config.seed);

    if (want_mono) {
        for (int rep = 0; rep < config.repetitions; ++rep) {
            auto [u, report] = solve_monolithic(grid, f);
            rs.rows.push_back({TimingKind::monolithic, 1, n, n, 1, rep, report.total_seconds,
                               report.iterations, report.final_relative_residual});
        }
    }

    for (const Job& job : jobs) {
        const int p = job.px * job.py;
        if (want_par) {
            const NodeClassification cls = classify_nodes(grid, job.part);
            SolveOptions opts;
            opts.tol = config.tol;
            opts.workers = eff_workers;
            for (int rep = 0; rep < config.repetitions; ++rep) {
                DerivedSystem ds = decompose(grid, job.part, cls);
                auto t0 = std::chrono::steady_clock::now();
                try {
                    auto [u, report] = solve_dd(ds, f, opts);
                    rs.rows.push_back({TimingKind::parallel, p, n, n, eff_workers, rep,
                                       report.total_seconds, report.iterations,
                                       report.final_relative_residual});
                } catch (const NonConvergenceError& e) {
                    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                      .count();
                    rs.rows.push_back({TimingKind::parallel, p, n, n, eff_workers, rep, secs,
                                       e.iterations, std::numeric_limits<double>::quiet_NaN()});
                }
            }
        }
        if (want_single) {
            const int sub = job.part.subdomain_of_element((config.nx + 1) / 2, (config.ny + 1) / 2);
            const int bx = sub % job.px;
            const int by = sub / job.px;
            const int w = job.part.x_internal_hi(bx) - job.part.x_internal_lo(bx) + 1;
            const int h = job.part.y_internal_hi(by) - job.part.y_internal_lo(by) + 1;
            const std::int64_t local_n = static_cast<std::int64_t>(w) * h;
            const std::vector<double> f_local = random_load(local_n, config.seed);
            for (int rep = 0; rep < config.repetitions; ++rep) {
                auto [u, report] = solve_single_local(grid, job.part, sub, f_local);
                rs.rows.push_back({TimingKind::single_local, p, n, local_n, 1, rep,
                                   report.total_seconds, report.iterations,
                                   report.final_relative_residual});
            }
        }
    }
    return rs;
}

EfficiencyReport derive_report(std::span<const TimingRecord> records, double timer_resolution) {
    struct Group {
        const TimingRecord* mono = nullptr;
        std::map<int, const TimingRecord*> par;
        std::map<int, const TimingRecord*> single;
    };
    std::map<std::int64_t, Group> groups;
    for (const TimingRecord& rec : records) {
        Group& g = groups[rec.n];
        switch (rec.kind) {
            case TimingKind::monolithic:
                if (!g.mono || rec.seconds < g.mono->seconds) g.mono = &rec;
                break;
            case TimingKind::parallel:
                g.par[rec.p] = &rec;
                break;
            case TimingKind::single_local:
                g.single[rec.p] = &rec;
                break;
        }
    }
    if (groups.empty()) throw MissingMonolithicError("no timings to derive a report from");

    EfficiencyReport report;
    for (const auto& [n, g] : groups) {
        if (!g.mono)
            throw MissingMonolithicError("no monolithic timing for n = " + std::to_string(n));
        const double t1 = g.mono->seconds;

        std::set<int> ps{1};
        for (const auto& kv : g.par) ps.insert(kv.first);
        for (const auto& kv : g.single) ps.insert(kv.first);

        for (int p : ps) {
            EfficiencyRow row;
            row.p = p;
            row.n = n;
            row.p_squared = static_cast<double>(p) * static_cast<double>(p);

            auto it_par = g.par.find(p);
            const TimingRecord* par =
                it_par != g.par.end() ? it_par->second : (p == 1 ? g.mono : nullptr);
            auto it_single = g.single.find(p);
            const TimingRecord* single =
                it_single != g.single.end() ? it_single->second : (p == 1 ? g.mono : nullptr);

            if (par) {
                row.t = par->seconds;
                row.workers = par->workers;
                const double s = speedup(t1, par->seconds);
                row.s = s;
                row.s_over_p = speedup_multiple_of_p(s, p);
                row.p_over_s = static_cast<double>(p) / s;
                row.e_s = standard_efficiency(s, p);
                row.t_unreliable = timer_resolution > 0 && par->seconds < 100 * timer_resolution;
            }
            if (single) {
                row.local_n = single->local_n;
                const double t_dc = single->seconds;
                row.t_dc = t_dc;
                const double s_dc = dc_speedup_goal(t1, t_dc);
                row.s_dc = s_dc;
                row.p2_dev = p_squared_deviation(p, s_dc);
                row.sdc_over_p = s_dc / p;
                row.p_over_sdc = standard_bound_on_dc_efficiency(p, s_dc);
                row.e_dc_std_bound = row.p_over_sdc;
                if (row.s) row.e_dc = dc_efficiency(*row.s, s_dc);
                row.t_dc_unreliable = timer_resolution > 0 && t_dc < 100 * timer_resolution;
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

EfficiencyReport derive_report(const ResultSet& rs) {
    const std::vector<TimingRecord> recs = rs.records();
    EfficiencyReport report = derive_report(recs, rs.stamp.timer_resolution);

    report.notes.push_back("times are the minimum over " + std::to_string(rs.config.repetitions) +
                           " repetition(s)");
    if (rs.stamp.timer_resolution > 0)
        report.notes.push_back("timer resolution " + fmt("%.3g", rs.stamp.timer_resolution) +
                               " s; times under 100x it are marked *");

    std::set<int> par_workers;
    for (const RawRow& row : rs.rows)
        if (row.kind == TimingKind::parallel) par_workers.insert(row.workers);
    if (!par_workers.empty()) {
        std::string list;
        for (int w : par_workers) list += (list.empty() ? "" : ", ") + std::to_string(w);
        report.notes.push_back("parallel solves ran on w = " + list +
                               " worker thread(s); speedups are against logical p");
    }

    std::map<std::tuple<std::int64_t, int, int>, int> failed;
    for (const RawRow& row : rs.rows)
        if (std::isnan(row.residual)) ++failed[{row.n, static_cast<int>(row.kind), row.p}];
    for (const auto& [key, count] : failed) {
        report.notes.push_back(std::string(to_string(static_cast<TimingKind>(std::get<1>(key)))) +
                               " p=" + std::to_string(std::get<2>(key)) +
                               " n=" + std::to_string(std::get<0>(key)) + ": " +
                               std::to_string(count) + " failed repetition(s) excluded");
    }
    return report;
}

namespace {

std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++w;
    return w;
}

void append_aligned(std::string& out, const std::vector<std::vector<std::string>>& cells) {
    if (cells.empty()) return;
    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], display_width(row[i]));
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += " | ";
            out.append(width[i] - display_width(row[i]), ' ');
            out += row[i];
        }
        out += '\n';
    }
}

std::string cell_time(const std::optional<double>& v, bool unreliable) {
    if (!v) return "-";
    return fmt("%.2f", *v) + (unreliable ? std::string("*") : std::string());
}

std::string cell_speedup(const std::optional<double>& v) { return v ? fmt("%.1f", *v) : "-"; }

std::string cell_pct(const std::optional<double>& v) {
    return v ? fmt("%.1f", *v * 100.0) + "%" : "-";
}

}  // namespace

std::string render_table(const EfficiencyReport& report) {
    if (report.rows.empty()) return "(no rows)\n";

    std::vector<std::int64_t> ns;
    for (const EfficiencyRow& row : report.rows)
        if (ns.empty() || ns.back() != row.n) ns.push_back(row.n);
    const bool multi = ns.size() > 1;

    std::string out;
    bool flagged = false;
    for (const EfficiencyRow& row : report.rows) flagged |= row.t_unreliable || row.t_dc_unreliable;

    out += "solve timings\n";
    {
        std::vector<std::vector<std::string>> cells;
        cells.push_back({"p", "n", "w", "T(p,n)", "S(p,n)", "S/p", "E_S"});
        for (const EfficiencyRow& row : report.rows) {
            cells.push_back({std::to_string(row.p), std::to_string(row.n),
                             std::to_string(row.workers), cell_time(row.t, row.t_unreliable),
                             cell_speedup(row.s), cell_speedup(row.s_over_p), cell_pct(row.e_s)});
        }
        append_aligned(out, cells);
    }

    out += "\ndivide-and-conquer goal\n";
    for (std::int64_t n : ns) {
        if (multi) out += "n = " + std::to_string(n) + "\n";
        std::vector<std::vector<std::string>> cells;
        cells.push_back({"p", "p²", "T(p,n)", "S(p,n)", "T_DC", "S_DC", "E_DC", "S/p²"});
        for (const EfficiencyRow& row : report.rows) {
            if (row.n != n) continue;
            std::optional<double> s_over_p2;
            if (row.s) s_over_p2 = *row.s / row.p_squared;
            cells.push_back({std::to_string(row.p),
                             std::to_string(static_cast<long long>(std::llround(row.p_squared))),
                             cell_time(row.t, row.t_unreliable), cell_speedup(row.s),
                             cell_time(row.t_dc, row.t_dc_unreliable), cell_speedup(row.s_dc),
                             cell_pct(row.e_dc), cell_pct(s_over_p2)});
        }
        append_aligned(out, cells);
    }

    out += "\nefficiency against the standard bound\n";
    for (std::int64_t n : ns) {
        if (multi) out += "n = " + std::to_string(n) + "\n";
        std::vector<std::vector<std::string>> cells;
        cells.push_back({"p", "S_DC/p", "(p²-S_DC)/p²", "E_DC", "p/S_DC"});
        for (const EfficiencyRow& row : report.rows) {
            if (row.n != n) continue;
            cells.push_back({std::to_string(row.p), cell_speedup(row.sdc_over_p),
                             cell_pct(row.p2_dev), cell_pct(row.e_dc),
                             cell_pct(row.e_dc_std_bound)});
        }
        append_aligned(out, cells);
    }

    if (flagged) out += "\n* time below 100x the timer resolution\n";
    if (!report.notes.empty()) {
        out += "\nnotes\n";
        for (const std::string& note : report.notes) out += "- " + note + "\n";
    }
    return out;
}

std::string render_csv(const EfficiencyReport& report) {
    std::string out =
        "p,n,local_n,workers,p_squared,t,s,s_over_p,p_over_s,e_s,t_dc,s_dc,e_dc,"
        "p2_deviation,sdc_over_p,p_over_sdc,e_dc_standard_bound,t_unreliable,t_dc_unreliable\n";
    auto opt = [](const std::optional<double>& v) { return v ? g17(*v) : std::string(); };
    for (const EfficiencyRow& row : report.rows) {
        out += std::to_string(row.p) + ',' + std::to_string(row.n) + ',' +
               std::to_string(row.local_n) + ',' + std::to_string(row.workers) + ',' +
               g17(row.p_squared) + ',' + opt(row.t) + ',' + opt(row.s) + ',' +
               opt(row.s_over_p) + ',' + opt(row.p_over_s) + ',' + opt(row.e_s) + ',' +
               opt(row.t_dc) + ',' + opt(row.s_dc) + ',' + opt(row.e_dc) + ',' +
               opt(row.p2_dev) + ',' + opt(row.sdc_over_p) + ',' + opt(row.p_over_sdc) + ',' +
               opt(row.e_dc_std_bound) + ',' + (row.t_unreliable ? "1" : "0") + ',' +
               (row.t_dc_unreliable ? "1" : "0") + '\n';
    }
    return out;
}

std::string render_json(const EfficiencyReport& report) {
    ordered_json doc;
    ordered_json rows = ordered_json::array();
    for (const EfficiencyRow& row : report.rows) {
        ordered_json j;
        j["p"] = row.p;
        j["n"] = row.n;
        j["local_n"] = row.local_n;
        j["workers"] = row.workers;
        j["p_squared"] = row.p_squared;
        auto put = [&j](const char* key, const std::optional<double>& v) {
            if (v) j[key] = *v;
        };
        put("t", row.t);
        put("s", row.s);
        put("s_over_p", row.s_over_p);
        put("p_over_s", row.p_over_s);
        put("e_s", row.e_s);
        put("t_dc", row.t_dc);
        put("s_dc", row.s_dc);
        put("e_dc", row.e_dc);
        put("p2_deviation", row.p2_dev);
        put("sdc_over_p", row.sdc_over_p);
        put("p_over_sdc", row.p_over_sdc);
        put("e_dc_standard_bound", row.e_dc_std_bound);
        j["t_unreliable"] = row.t_unreliable;
        j["t_dc_unreliable"] = row.t_dc_unreliable;
        rows.push_back(std::move(j));
    }
    doc["rows"] = std::move(rows);
    doc["notes"] = report.notes;
    return doc.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    if (dir.empty()) return;  // current directory
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec && !std::filesystem::is_directory(dir))
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

std::filesystem::path emit(const EfficiencyReport& report, OutputFormat format,
                           const std::filesystem::path& dir) {
    if (report.rows.empty()) throw EmptyReportError("refusing to emit an empty report");
    ensure_dir(dir);
    std::filesystem::path path = dir;
    std::string text;
    switch (format) {
        case OutputFormat::table:
            path /= "report.txt";
            text = render_table(report);
            break;
        case OutputFormat::csv:
            path /= "report.csv";
            text = render_csv(report);
            break;
        case OutputFormat::json:
            path /= "report.json";
            text = render_json(report);
            break;
    }
    write_file(path, text);
    return path;
}

namespace {

std::string raw_rows_csv(const std::vector<RawRow>& rows) {
    std::string out = std::string(kRawHeader) + "\n";
    for (const RawRow& row : rows) {
        out += std::string(to_string(row.kind)) + ',' + std::to_string(row.p) + ',' +
               std::to_string(row.n) + ',' + std::to_string(row.local_n) + ',' +
               std::to_string(row.workers) + ',' + std::to_string(row.rep) + ',' +
               g17(row.seconds) + ',' + std::to_string(row.iterations) + ',' +
               (std::isnan(row.residual) ? "nan" : g17(row.residual)) + '\n';
    }
    return out;
}

ordered_json config_json(const ExperimentConfig& config) {
    ordered_json j;
    j["nx"] = config.nx;
    j["ny"] = config.ny;
    ordered_json parts = ordered_json::array();
    for (auto [px, py] : config.partitions)
        parts.push_back(std::to_string(px) + "x" + std::to_string(py));
    j["partitions"] = std::move(parts);
    j["workers"] = config.workers;
    j["repetitions"] = config.repetitions;
    j["tol"] = config.tol;
    ordered_json protos = ordered_json::array();
    for (TimingKind k : config.protocols) protos.push_back(to_string(k));
    j["protocols"] = std::move(protos);
    j["seed"] = config.seed;
    j["out_dir"] = config.out_dir;
    ordered_json fmts = ordered_json::array();
    for (OutputFormat f : config.formats) fmts.push_back(to_string(f));
    j["formats"] = std::move(fmts);
    return j;
}

ordered_json stamp_json(const EnvironmentStamp& stamp) {
    ordered_json j;
    j["hostname"] = stamp.hostname;
    j["cpu_model"] = stamp.cpu_model;
    j["logical_cores"] = stamp.logical_cores;
    j["timestamp_utc"] = stamp.timestamp_utc;
    j["timer_resolution"] = stamp.timer_resolution;
    return j;
}

void read_run_json(const std::filesystem::path& path, ResultSet& rs) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
    if (doc.contains("config")) {
        const auto& c = doc["config"];
        rs.config.nx = c.value("nx", 0);
        rs.config.ny = c.value("ny", 0);
        rs.config.partitions.clear();
        if (c.contains("partitions"))
            for (const auto& s : c["partitions"]) {
                auto one = parse_partitions(s.get<std::string>());
                rs.config.partitions.insert(rs.config.partitions.end(), one.begin(), one.end());
            }
        rs.config.workers = c.value("workers", 0);
        rs.config.repetitions = c.value("repetitions", 1);
        rs.config.tol = c.value("tol", 1e-8);
        if (c.contains("protocols")) {
            rs.config.protocols.clear();
            for (const auto& s : c["protocols"])
                rs.config.protocols.push_back(timing_kind_from_string(s.get<std::string>()));
        }
        rs.config.seed = c.value("seed", std::uint64_t{1});
        rs.config.out_dir = c.value("out_dir", std::string("."));
        if (c.contains("formats")) {
            rs.config.formats.clear();
            for (const auto& s : c["formats"])
                rs.config.formats.push_back(output_format_from_string(s.get<std::string>()));
        }
    }
    if (doc.contains("environment")) {
        const auto& e = doc["environment"];
        rs.stamp.hostname = e.value("hostname", std::string());
        rs.stamp.cpu_model = e.value("cpu_model", std::string());
        rs.stamp.logical_cores = e.value("logical_cores", 0);
        rs.stamp.timestamp_utc = e.value("timestamp_utc", std::string());
        rs.stamp.timer_resolution = e.value("timer_resolution", 0.0);
    }
}

}  // namespace

std::vector<std::filesystem::path> save_results(const ResultSet& rs,
                                                const std::filesystem::path& dir) {
    ensure_dir(dir);

    std::filesystem::path csv_path = dir / "timings.csv";
    write_file(csv_path, raw_rows_csv(rs.rows));

    ordered_json doc;
    doc["config"] = config_json(rs.config);
    doc["environment"] = stamp_json(rs.stamp);
    ordered_json rows = ordered_json::array();
    for (const RawRow& row : rs.rows) {
        ordered_json j;
        j["kind"] = to_string(row.kind);
        j["p"] = row.p;
        j["n"] = row.n;
        j["local_n"] = row.local_n;
        j["workers"] = row.workers;
        j["rep"] = row.rep;
        j["seconds"] = row.seconds;
        j["iterations"] = row.iterations;
        j["residual"] = row.residual;  // NaN serializes as null
        rows.push_back(std::move(j));
    }
    doc["rows"] = std::move(rows);
    std::filesystem::path json_path = dir / "run.json";
    write_file(json_path, doc.dump(2) + "\n");

    return {csv_path, json_path};
}

ResultSet load_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    ResultSet rs;
    int line_no = 0;
    bool saw_header = false;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!saw_header) {
            if (line != kRawHeader)
                throw ParseError(std::string("expected header '") + kRawHeader + "'", line_no);
            saw_header = true;
            continue;
        }
        if (line.empty()) continue;

        std::vector<std::string> f = split(line, ',');
        if (f.size() != 9)
            throw ParseError("expected 9 fields, got " + std::to_string(f.size()), line_no);

        RawRow row;
        try {
            row.kind = timing_kind_from_string(f[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        row.p = static_cast<int>(parse_ll(f[1], "p", line_no));
        row.n = parse_ll(f[2], "n", line_no);
        row.local_n = parse_ll(f[3], "local_n", line_no);
        row.workers = static_cast<int>(parse_ll(f[4], "workers", line_no));
        row.rep = static_cast<int>(parse_ll(f[5], "rep", line_no));
        row.seconds = parse_num(f[6], "seconds", line_no);
        row.iterations = static_cast<int>(parse_ll(f[7], "iterations", line_no));
        row.residual = parse_num(f[8], "residual", line_no);

        if (row.p < 1) throw ParseError("p must be >= 1", line_no);
        if (row.n < 1) throw ParseError("n must be >= 1", line_no);
        if (row.local_n < 0) throw ParseError("local_n must be >= 0", line_no);
        if (row.workers < 1) throw ParseError("workers must be >= 1", line_no);
        if (row.rep < 0) throw ParseError("rep must be >= 0", line_no);
        if (!std::isfinite(row.seconds) || row.seconds < 0)
            throw ParseError("seconds must be finite and >= 0", line_no);
        if (row.iterations < 0) throw ParseError("iterations must be >= 0", line_no);
        if (!std::isnan(row.residual) && (!std::isfinite(row.residual) || row.residual < 0))
            throw ParseError("residual must be >= 0 or nan", line_no);

        rs.rows.push_back(row);
    }
    if (!saw_header) throw ParseError(std::string("expected header '") + kRawHeader + "'", 1);

    // The raw schema does not carry the config or the environment; both are
    // restored from the run.json that save_results writes next to the csv,
    // or conservatively inferred from the rows for hand-written files.
    std::filesystem::path meta = path.parent_path() / "run.json";
    if (std::filesystem::exists(meta)) {
        read_run_json(meta, rs);
    } else {
        int max_rep = -1;
        std::set<TimingKind> kinds;
        for (const RawRow& row : rs.rows) {
            max_rep = std::max(max_rep, row.rep);
            kinds.insert(row.kind);
        }
        if (max_rep >= 0) rs.config.repetitions = max_rep + 1;
        if (!kinds.empty()) rs.config.protocols.assign(kinds.begin(), kinds.end());
    }
    return rs;
}

std::vector<std::pair<int, int>> parse_partitions(const std::string& text) {
    std::vector<std::pair<int, int>> out;
    for (const std::string& raw : split(text, ',')) {
        std::string tok = trim(raw);
        if (tok.empty()) throw ParseError("empty partition entry in '" + text + "'", 0);
        std::size_t x = tok.find('x');
        if (x == std::string::npos || x == 0 || x + 1 >= tok.size())
            throw ParseError("partition '" + tok + "' is not of the form PXxPY", 0);
        int px = static_cast<int>(parse_ll(tok.substr(0, x), "partition px", 0));
        int py = static_cast<int>(parse_ll(tok.substr(x + 1), "partition py", 0));
        if (px < 1 || py < 1) throw ParseError("partition '" + tok + "' must be positive", 0);
        out.emplace_back(px, py);
    }
    return out;
}

std::vector<TimingKind> parse_protocols(const std::string& text) {
    std::vector<TimingKind> out;
    for (const std::string& raw : split(text, ',')) {
        std::string tok = trim(raw);
        std::replace(tok.begin(), tok.end(), '_', '-');
        out.push_back(timing_kind_from_string(tok));
    }
    return out;
}

std::vector<OutputFormat> parse_formats(const std::string& text) {
    std::vector<OutputFormat> out;
    for (const std::string& raw : split(text, ','))
        out.push_back(output_format_from_string(trim(raw)));
    return out;
}

void apply_config_entry(ExperimentConfig& config, const std::string& key, const std::string& value,
                        int line) {
    if (key == "nx") {
        config.nx = static_cast<int>(parse_ll(value, "nx", line));
    } else if (key == "ny") {
        config.ny = static_cast<int>(parse_ll(value, "ny", line));
    } else if (key == "partitions") {
        config.partitions = parse_partitions(value);
    } else if (key == "workers") {
        config.workers = static_cast<int>(parse_ll(value, "workers", line));
    } else if (key == "reps") {
        config.repetitions = static_cast<int>(parse_ll(value, "reps", line));
    } else if (key == "tol") {
        config.tol = parse_num(value, "tol", line);
    } else if (key == "protocols") {
        config.protocols = parse_protocols(value);
    } else if (key == "out") {
        config.out_dir = value;
    } else if (key == "format") {
        config.formats = parse_formats(value);
    } else {
        throw ParseError("unknown config key '" + key + "'", line);
    }
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    ExperimentConfig config;
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
    }
    return config;
}

}  // namespace ddbench
