#include "ddbench/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace ddbench {

const char* to_string(TimingKind kind) {
    switch (kind) {
        case TimingKind::monolithic: return "monolithic";
        case TimingKind::parallel: return "parallel";
        case TimingKind::single_local: return "single-local";
    }
    return "?";
}

TimingKind timing_kind_from_string(const std::string& s) {
    if (s == "monolithic") return TimingKind::monolithic;
    if (s == "parallel") return TimingKind::parallel;
    if (s == "single-local") return TimingKind::single_local;
    throw ParseError("unknown timing kind '" + s + "'", 0);
}

namespace {

void require_positive_time(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidTimingError(std::string(what) + " must be a positive finite time");
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidTimingError(std::string(what) + " must be positive and finite");
}

void require_positive_p(int p) {
    if (p < 1) throw InvalidTimingError("p must be at least 1");
}

}  // namespace

double speedup(double t1, double tp) {
    require_positive_time(t1, "T(1,n)");
    require_positive_time(tp, "T(p,n)");
    return t1 / tp;
}

double standard_efficiency(double s, int p) {
    require_positive(s, "speedup");
    require_positive_p(p);
    return s / p;
}

double speedup_multiple_of_p(double s, int p) {
    require_positive(s, "speedup");
    require_positive_p(p);
    return s / p;
}

double relative_efficiency(double s, double s_goal) {
    require_positive(s, "speedup");
    require_positive(s_goal, "speedup goal");
    return s / s_goal;
}

double relative_efficiency_from_time(double t_goal, double t) {
    require_positive_time(t_goal, "goal time");
    require_positive_time(t, "measured time");
    return t_goal / t;
}

double dc_speedup_goal(double t1_n, double t1_n_over_p) {
    require_positive_time(t1_n, "T(1,n)");
    require_positive_time(t1_n_over_p, "T(1,n/p)");
    return t1_n / t1_n_over_p;
}

double dc_efficiency(double s, double s_dc) {
    require_positive(s, "speedup");
    require_positive(s_dc, "DC speedup goal");
    return s / s_dc;
}

double standard_bound_on_dc_efficiency(int p, double s_dc) {
    require_positive_p(p);
    require_positive(s_dc, "DC speedup goal");
    return p / s_dc;
}

double p_squared_deviation(int p, double s_dc) {
    require_positive_p(p);
    require_positive(s_dc, "DC speedup goal");
    const double p2 = static_cast<double>(p) * p;
    return (p2 - s_dc) / p2;
}

std::optional<double> GoalSpec::speedup_goal_at(int p, std::int64_t n) const {
    if (kind == GoalKind::standard) return static_cast<double>(p);
    auto it = speedup_goals.find(PN{p, n});
    if (it != speedup_goals.end()) return it->second;
    return std::nullopt;
}

std::optional<double> GoalSpec::time_goal_at(int p, std::int64_t n) const {
    auto it = time_goals.find(PN{p, n});
    if (it != time_goals.end()) return it->second;
    return std::nullopt;
}

GoalSpec make_standard_goal() {
    GoalSpec g;
    g.name = "standard";
    g.kind = GoalKind::standard;
    return g;
}

GoalSpec make_absolute_goal(std::string name, std::map<PN, double> speedups) {
    GoalSpec g;
    g.name = std::move(name);
    g.kind = GoalKind::absolute;
    g.speedup_goals = std::move(speedups);
    return g;
}

GoalSpec make_dc_goal(std::map<PN, double> single_local_times) {
    GoalSpec g;
    g.name = "divide-and-conquer";
    g.kind = GoalKind::divide_and_conquer;
    g.time_goals = std::move(single_local_times);
    return g;
}

double relative_efficiency(double s, const GoalSpec& goal, int p, std::int64_t n) {
    auto sg = goal.speedup_goal_at(p, n);
    if (!sg)
        throw MissingGoalError("goal '" + goal.name + "' has no speedup entry for p=" +
                               std::to_string(p) + ", n=" + std::to_string(n));
    return relative_efficiency(s, *sg);
}

GoalSpec dualize_goal(double t1, GoalSpec goal) {
    require_positive_time(t1, "T(1,n)");
    for (const auto& [pn, sg] : goal.speedup_goals) {
        require_positive(sg, "speedup goal");
        const double tg = t1 / sg;
        auto it = goal.time_goals.find(pn);
        if (it == goal.time_goals.end()) {
            goal.time_goals[pn] = tg;
        } else if (std::abs(it->second * sg - t1) > 1e-9 * t1) {
            throw InconsistentGoalError("goal '" + goal.name + "' at p=" + std::to_string(pn.p) +
                                        " stores a (time, speedup) pair violating T_G*S_G = T(1,n)");
        }
    }
    for (const auto& [pn, tg] : goal.time_goals) {
        require_positive_time(tg, "goal time");
        if (!goal.speedup_goals.count(pn)) goal.speedup_goals[pn] = t1 / tg;
    }
    return goal;
}

ComplexityFit fit_complexity(std::span<const double> sizes, std::span<const double> times) {
    if (sizes.size() != times.size())
        throw DimensionMismatchError("sizes and times must have equal length");
    const std::size_t m = sizes.size();
    if (m < 3)
        throw InsufficientDataError("complexity fit needs at least 3 points, got " +
                                    std::to_string(m));
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        require_positive(sizes[i], "size");
        require_positive_time(times[i], "time");
        sx += std::log(sizes[i]);
        sy += std::log(times[i]);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(sizes[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(times[i]) - my);
    }
    if (sxx == 0.0) throw InsufficientDataError("complexity fit needs distinct sizes");

    ComplexityFit fit;
    fit.exponent = sxy / sxx;
    fit.constant = std::exp(my - fit.exponent * mx);
    for (std::size_t i = 0; i < m; ++i) {
        const double model = fit.constant * std::pow(sizes[i], fit.exponent);
        fit.max_rel_residual = std::max(fit.max_rel_residual,
                                        std::abs(model - times[i]) / times[i]);
    }
    return fit;
}

}  // namespace ddbench
