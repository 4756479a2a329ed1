#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddbench/errors.hpp"

namespace ddbench {

enum class TimingKind { monolithic, parallel, single_local };

const char* to_string(TimingKind kind);
TimingKind timing_kind_from_string(const std::string& s);  // ParseError on unknown

// One aggregated timing cell.  seconds is the minimum over repetitions.
struct TimingRecord {
    int p = 1;
    std::int64_t n = 0;
    double seconds = 0.0;
    TimingKind kind = TimingKind::monolithic;
    int workers = 1;
    int repetitions = 1;
    std::int64_t local_n = 0;  // actual size of the local problem this cell solved
};

// --- ratio algebra -------------------------------------------------------
// Speedups are plain time ratios against the undecomposed solve; efficiencies
// are stored as fractions (formatting to percent happens at emission only).

double speedup(double t1, double tp);                    // T(1,n) / T(p,n)
double standard_efficiency(double s, int p);             // S / p
double speedup_multiple_of_p(double s, int p);           // S expressed in units of p
double relative_efficiency(double s, double s_goal);     // S / S_G
double relative_efficiency_from_time(double t_goal, double t);  // T_G / T
double dc_speedup_goal(double t1_n, double t1_n_over_p); // T(1,n) / T(1,n/p)
double dc_efficiency(double s, double s_dc);             // S / S_DC
double standard_bound_on_dc_efficiency(int p, double s_dc);  // p / S_DC
double p_squared_deviation(int p, double s_dc);          // (p^2 - S_DC) / p^2

// --- speedup goals -------------------------------------------------------
// A goal stores, per (p, n), a target speedup or the time that realizes it.
// The two sides are duals through T_G * S_G = T(1, n); dualize_goal fills the
// missing side and rejects stored pairs that violate the identity.

enum class GoalKind { standard, divide_and_conquer, absolute };

struct PN {
    int p = 0;
    std::int64_t n = 0;
    friend auto operator<=>(const PN&, const PN&) = default;
};

struct GoalSpec {
    std::string name;
    GoalKind kind = GoalKind::absolute;
    std::map<PN, double> speedup_goals;
    std::map<PN, double> time_goals;

    // standard goals need no table: S_G(p, n) = p
    std::optional<double> speedup_goal_at(int p, std::int64_t n) const;
    std::optional<double> time_goal_at(int p, std::int64_t n) const;
};

GoalSpec make_standard_goal();
GoalSpec make_absolute_goal(std::string name, std::map<PN, double> speedups);
GoalSpec make_dc_goal(std::map<PN, double> single_local_times);

double relative_efficiency(double s, const GoalSpec& goal, int p, std::int64_t n);

// Fills whichever side is missing using t1 = T(1, n); entries present on both
// sides must satisfy t_G * s_G = t1 within 1e-9 relative.
GoalSpec dualize_goal(double t1, GoalSpec goal);

// --- scaling fit ---------------------------------------------------------

struct ComplexityFit {
    double exponent = 0.0;     // slope of log t over log n
    double constant = 0.0;     // multiplier: t ~ constant * n^exponent
    double max_rel_residual = 0.0;
};

// Least squares in log-log space; needs at least three points.
ComplexityFit fit_complexity(std::span<const double> sizes, std::span<const double> times);

// --- derived report ------------------------------------------------------
// One row per (p, n).  Optional cells stay empty when the timing that feeds
// them was not measured; *_unreliable flags mark cells whose time is below
// 100x the timer resolution.

struct EfficiencyRow {
    int p = 1;
    std::int64_t n = 0;
    std::int64_t local_n = 0;
    int workers = 1;
    double p_squared = 1.0;

    std::optional<double> t;           // T(p,n)
    std::optional<double> s;           // S(p,n)
    std::optional<double> s_over_p;    // S as a multiple of p
    std::optional<double> p_over_s;
    std::optional<double> e_s;         // standard efficiency, fraction

    std::optional<double> t_dc;        // T(1, n/p)
    std::optional<double> s_dc;
    std::optional<double> e_dc;        // fraction
    std::optional<double> p2_dev;      // (p^2 - S_DC)/p^2, fraction
    std::optional<double> sdc_over_p;
    std::optional<double> p_over_sdc;
    std::optional<double> e_dc_std_bound;  // fraction; equals p_over_sdc

    bool t_unreliable = false;
    bool t_dc_unreliable = false;
};

struct EfficiencyReport {
    std::vector<EfficiencyRow> rows;  // sorted by (n, p)
    std::vector<std::string> notes;
};

}  // namespace ddbench
