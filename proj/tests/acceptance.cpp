// Acceptance gate.  Each criterion exercises the shipped library end to end
// and prints exactly one verdict line; the process exits nonzero if any
// non-skipped criterion fails.  Lines starting with '#' are context, not
// verdicts.
//
// Criteria 3-6 share one timing campaign (512x512 grid, partitions 2x2, 4x4,
// 8x8, three repetitions, minimum per cell) so the scaling claims are judged
// against a single consistent measurement.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "ddbench/banded.hpp"
#include "ddbench/bench.hpp"
#include "ddbench/dd.hpp"
#include "ddbench/errors.hpp"
#include "ddbench/grid.hpp"
#include "ddbench/metrics.hpp"
#include "ddbench/worker_pool.hpp"
#include "golden_tables.hpp"
#include "oracles.hpp"

using namespace ddbench;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Verdict {
    bool pass = false;
    bool skip = false;
    std::string detail;
};

DerivedSystem make_system(const GridSpec& g, int px, int py) {
    Partition part = make_partition(g, px, py);
    NodeClassification cls = classify_nodes(g, part);
    return decompose(g, part, cls);
}

std::int64_t internal_global(const GridSpec& g, const SubdomainBlock& sub, std::int64_t local) {
    const int w = sub.width();
    const int i = sub.ix0 + static_cast<int>(local % w);
    const int j = sub.iy0 + static_cast<int>(local / w);
    return g.index(i, j);
}

// Sum of every subdomain share, expanded densely.  a_ig holds one entry per
// edge and stands for both off-diagonal blocks, so it lands symmetrically.
oracle::Dense reconstruct(const DerivedSystem& ds) {
    oracle::Dense a(ds.grid.n());
    for (const SubdomainBlock& sub : ds.subs) {
        for (std::int64_t r = 0; r < sub.internal_dim; ++r)
            for (std::int64_t c = 0; c < sub.internal_dim; ++c) {
                const double v = sub.a_ii.entry(static_cast<int>(r), static_cast<int>(c));
                if (v != 0.0)
                    a.at(internal_global(ds.grid, sub, r), internal_global(ds.grid, sub, c)) += v;
            }
        for (const Triplet& t : sub.a_ig) {
            const std::int64_t gi = internal_global(ds.grid, sub, t.r);
            const std::int64_t gc = sub.iface_nodes[t.c];
            a.at(gi, gc) += t.v;
            a.at(gc, gi) += t.v;
        }
        for (const Triplet& t : sub.a_gg)
            a.at(sub.iface_nodes[t.r], sub.iface_nodes[t.c]) += t.v;
    }
    return a;
}

// --- criterion 1: the frozen reference study reproduces ------------------

Verdict check_golden_tables() {
    using namespace golden;
    const auto t0 = Clock::now();
    int cells = 0, bad = 0;
    for (int k = 0; k < kN; ++k) {
        const int p = kP[k];
        const double s = speedup(kT1, kT[k]);
        const double s_dc = dc_speedup_goal(kT1, kTdc[k]);
        const Cell* col[12] = {&kSpeedup[k], &kSpeedupOverP[k], &kPOverS[k],  &kEs[k],
                               &kSdc[k],     &kP2Dev[k],        &kEdc[k],     &kSOverP2[k],
                               &kSdcOverP[k], &kPOverSdc[k],    &kEdcBound[k], &kTsBound[k]};
        const double val[12] = {s,
                                speedup_multiple_of_p(s, p),
                                p / s,
                                100.0 * standard_efficiency(s, p),
                                s_dc,
                                100.0 * p_squared_deviation(p, s_dc),
                                100.0 * dc_efficiency(s, s_dc),
                                100.0 * s / (static_cast<double>(p) * p),
                                speedup_multiple_of_p(s_dc, p),
                                standard_bound_on_dc_efficiency(p, s_dc),
                                100.0 * standard_bound_on_dc_efficiency(p, s_dc),
                                kT1 / p};
        for (int c = 0; c < 12; ++c) {
            ++cells;
            if (!matches(*col[c], val[c])) ++bad;
        }
    }

    // the contradictory tabulated cells must be pinned recomputed and annotated
    int annotations = 0;
    bool p25_annotated = false;
    for (const char* a : kAnnotations) {
        ++annotations;
        if (std::strstr(a, "596.1") && std::strstr(a, "569.1")) p25_annotated = true;
    }
    const bool p25_pinned = kSdc[2].typo && std::fabs(kSdc[2].pin - kT1 / kTdc[2]) <= kSdc[2].tol;

    const double el = seconds_since(t0);
    Verdict v;
    v.pass = bad == 0 && p25_annotated && p25_pinned && el < 1.0;
    v.detail = fmt("%d/%d derived cells within print tolerance, %d annotated contradictions, "
                   "p=25 goal cell pinned recomputed (%.3gs)",
                   cells - bad, cells, annotations, el);
    return v;
}

// --- criterion 2: solver oracle equivalence ------------------------------

Verdict check_oracle_equivalence() {
    const auto t0 = Clock::now();
    const std::pair<int, int> parts[] = {{1, 1}, {2, 1}, {2, 2}, {4, 4}};
    const int loads = 50;
    long configs = 0, solves = 0;
    double worst_mono = 0.0, worst_dense_mono = 0.0, worst_dense_dd = 0.0;

    for (int nx = 1; nx <= 32; ++nx) {
        for (int ny = 1; ny <= 32; ++ny) {
            GridSpec g = build_grid(nx, ny);
            BandedLU mono = factor(assemble_monolithic(g));
            const bool dense_scope = nx <= 16 && ny <= 16;
            std::optional<oracle::Dense> dense;
            if (dense_scope) dense.emplace(oracle::dense_laplacian(g));

            std::vector<DerivedSystem> systems;
            for (auto [px, py] : parts) {
                try {
                    systems.push_back(make_system(g, px, py));
                    ++configs;
                } catch (const InvalidPartitionError&) {
                    // partition wider than the element grid; not a valid config
                }
            }

            for (int l = 0; l < loads; ++l) {
                const auto f = random_load(g.n(), 40000u + 64u * (nx * 33u + ny) + l);
                const auto um = mono.solve(f);
                std::vector<double> ud;
                if (dense_scope) {
                    ud = oracle::dense_solve(*dense, f);
                    worst_dense_mono = std::max(worst_dense_mono, oracle::rel_diff_2norm(um, ud));
                }
                for (auto& ds : systems) {
                    SolveOptions opts;
                    opts.tol = 1e-10;
                    auto [u, rep] = solve_dd(ds, f, opts);
                    ++solves;
                    worst_mono = std::max(worst_mono, oracle::rel_diff_2norm(u, um));
                    if (dense_scope)
                        worst_dense_dd = std::max(worst_dense_dd, oracle::rel_diff_2norm(u, ud));
                }
            }
        }
    }

    const double el = seconds_since(t0);
    Verdict v;
    v.pass = worst_mono <= 1e-8 && worst_dense_mono <= 1e-10 && worst_dense_dd <= 1e-10 &&
             el < 60.0;
    v.detail = fmt("%ld configs, %ld dd solves; worst dd-vs-mono %.2e (<=1e-8), "
                   "mono-vs-dense %.2e, dd-vs-dense %.2e (<=1e-10, grids <=16x16) (%.1fs)",
                   configs, solves, worst_mono, worst_dense_mono, worst_dense_dd, el);
    return v;
}

// --- shared timing campaign ----------------------------------------------

struct Campaign {
    EfficiencyReport rep;
    std::vector<double> fit_sizes;
    std::vector<double> fit_times;
    double wall = 0.0;
};

const EfficiencyRow* row_at(const EfficiencyReport& rep, std::int64_t n, int p) {
    for (const EfficiencyRow& r : rep.rows)
        if (r.n == n && r.p == p) return &r;
    return nullptr;
}

Campaign run_campaign() {
    const auto t0 = Clock::now();
    Campaign c;

    ExperimentConfig direct;
    direct.nx = direct.ny = 512;
    direct.partitions = {{2, 2}, {4, 4}, {8, 8}};
    direct.repetitions = 4;
    direct.protocols = {TimingKind::monolithic, TimingKind::single_local};

    ExperimentConfig parallel = direct;
    parallel.repetitions = 2;
    parallel.protocols = {TimingKind::parallel};

    // The direct-solve cells run before and after the parallel block: on a
    // shared host the long monolithic solve can only dodge contention bursts
    // by sampling minutes apart, while the sub-second local cells find quiet
    // windows easily.  Spreading the samples keeps the two sides of every
    // speedup ratio comparable.
    const ResultSet before = run_experiment(direct);
    const ResultSet middle = run_experiment(parallel);
    const ResultSet after = run_experiment(direct);

    std::map<std::tuple<int, int, std::int64_t>, TimingRecord> best;
    for (const ResultSet* rs : {&before, &middle, &after})
        for (const TimingRecord& rec : rs->records()) {
            const auto key = std::make_tuple(static_cast<int>(rec.kind), rec.p, rec.n);
            auto it = best.find(key);
            if (it == best.end() || rec.seconds < it->second.seconds) best[key] = rec;
        }
    std::vector<TimingRecord> records;
    records.reserve(best.size());
    for (const auto& [key, rec] : best) records.push_back(rec);
    c.rep = derive_report(records, before.stamp.timer_resolution);

    // monolithic-only runs at the smaller sizes feed the complexity fit
    for (int size : {64, 128, 256}) {
        ExperimentConfig small;
        small.nx = small.ny = size;
        small.partitions = {{1, 1}};
        small.protocols = {TimingKind::monolithic};
        small.repetitions = 5;
        ResultSet rs = run_experiment(small);
        for (const TimingRecord& rec : rs.records())
            if (rec.kind == TimingKind::monolithic) {
                c.fit_sizes.push_back(static_cast<double>(rec.n));
                c.fit_times.push_back(rec.seconds);
            }
    }
    for (const TimingRecord& rec : records)
        if (rec.kind == TimingKind::monolithic) {
            c.fit_sizes.push_back(static_cast<double>(rec.n));
            c.fit_times.push_back(rec.seconds);
        }

    c.wall = seconds_since(t0);
    return c;
}

// --- criterion 3: monolithic cost scales like the band model -------------

Verdict check_complexity_fit(const Campaign& c) {
    Verdict v;
    if (c.fit_sizes.size() < 4) {
        v.detail = "campaign produced fewer than 4 monolithic timings";
        return v;
    }
    const ComplexityFit fit = fit_complexity(c.fit_sizes, c.fit_times);
    v.pass = fit.exponent >= 1.7 && fit.exponent <= 2.3;
    std::string pts;
    for (std::size_t i = 0; i < c.fit_sizes.size(); ++i)
        pts += fmt("%s%d:%.3gs", i ? " " : "", static_cast<int>(c.fit_sizes[i]), c.fit_times[i]);
    v.detail = fmt("T(1,n) ~ n^%.3f (target [1.7, 2.3]), max rel residual %.2f; %s",
                   fit.exponent, fit.max_rel_residual, pts.c_str());
    return v;
}

// --- criterion 4: measured goal speedup tracks p^2 ------------------------

Verdict check_dc_speedup_tracks_p2(const Campaign& c) {
    Verdict v;
    v.pass = true;
    std::string parts;
    for (int p : {4, 16, 64}) {
        const EfficiencyRow* r = row_at(c.rep, 512 * 512, p);
        if (!r || !r->s_dc) {
            v.pass = false;
            parts += fmt("%sp=%d missing", parts.empty() ? "" : "; ", p);
            continue;
        }
        const double dev = std::fabs(*r->p2_dev);
        if (dev > 0.35) v.pass = false;
        parts += fmt("%sp=%d: S_DC %.1f vs p^2 %d (dev %.1f%%)", parts.empty() ? "" : "; ", p,
                     *r->s_dc, p * p, 100.0 * dev);
    }
    v.detail = parts + " (bound 35%)";
    return v;
}

// --- criterion 5: superlinear standard speedup under real parallelism -----

Verdict check_superlinear_speedup(const Campaign& c) {
    Verdict v;
    const int threads = WorkerPool::resolve(0);
    const EfficiencyRow* r = row_at(c.rep, 512 * 512, 16);
    const double s16 = r && r->s ? *r->s : 0.0;

    // total factor work shrinks with decomposition; this ratio is what makes
    // S > p reachable once the iterate phase runs on >= 4 real cores
    const std::int64_t local_n = r ? r->local_n : 0;
    const int local_b = static_cast<int>(std::lround(std::sqrt(static_cast<double>(local_n))));
    const double work_ratio =
        local_n > 0 ? static_cast<double>(flop_model(512 * 512, 512)) /
                          (16.0 * static_cast<double>(flop_model(local_n, local_b)))
                    : 0.0;

    if (threads < 4) {
        v.skip = true;
        v.detail = fmt("host exposes %d hardware thread(s), criterion needs >= 4 physical "
                       "cores; at w=1 measured S(16, 512^2) = %.2f; monolithic factor work / "
                       "summed local factor work = %.1f, so the factor phase alone leaves "
                       "headroom for S > 16 under real parallelism",
                       threads, s16, work_ratio);
        return v;
    }

    v.pass = s16 > 16.0;
    v.detail = fmt("S(16, 512^2) = %.2f at w=%d (needs > 16); factor work ratio %.1f", s16,
                   threads, work_ratio);
    return v;
}

// --- criterion 6: relative efficiency is a sane, decaying fraction --------

Verdict check_dc_efficiency_decay(const Campaign& c) {
    Verdict v;
    std::vector<std::pair<int, const EfficiencyRow*>> rows;
    for (int p : {4, 16, 64}) rows.emplace_back(p, row_at(c.rep, 512 * 512, p));

    std::string parts;
    bool range_ok = true;
    for (auto [p, r] : rows) {
        if (!r || !r->e_dc) {
            v.detail = fmt("p=%d row missing", p);
            return v;
        }
        const double e = *r->e_dc;
        if (!(e > 0.0 && e <= 1.0)) range_ok = false;
        parts += fmt("%sE_DC(%d) = %.4f%s", parts.empty() ? "" : ", ", p, e,
                     (r->t_unreliable || r->t_dc_unreliable) ? "*" : "");
    }

    int inversions = 0;
    bool inversion_flagged = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double prev = *rows[i - 1].second->e_dc;
        const double cur = *rows[i].second->e_dc;
        if (cur > prev) {
            ++inversions;
            const auto* a = rows[i - 1].second;
            const auto* b = rows[i].second;
            if (!(a->t_unreliable || a->t_dc_unreliable || b->t_unreliable || b->t_dc_unreliable))
                inversion_flagged = false;
        }
    }

    v.pass = range_ok && (inversions == 0 || (inversions == 1 && inversion_flagged));
    v.detail = parts + fmt("; in (0,1] and non-increasing, %d inversion(s)", inversions);
    return v;
}

// --- criterion 7: determinism across worker counts -----------------------

Verdict check_determinism() {
    GridSpec g = build_grid(96, 96);
    const auto f = random_load(g.n(), 7);

    auto solve_with = [&](int workers) {
        DerivedSystem ds = make_system(g, 4, 4);
        SolveOptions opts;
        opts.workers = workers;
        return solve_dd(ds, f, opts);
    };

    auto [u1, r1] = solve_with(1);
    auto [u1b, r1b] = solve_with(1);
    auto [u2, r2] = solve_with(2);
    auto [umax, rmax] = solve_with(0);

    auto bitwise = [](const std::vector<double>& a, const std::vector<double>& b) {
        return a.size() == b.size() &&
               std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
    };
    const bool solutions_ok = bitwise(u1, u1b) && bitwise(u1, u2) && bitwise(u1, umax);
    const bool iterations_ok =
        r1.iterations == r1b.iterations && r1.iterations == r2.iterations &&
        r1.iterations == rmax.iterations;

    // identical result sets must emit byte-identical reports
    ExperimentConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.partitions = {{2, 2}};
    cfg.repetitions = 1;
    ResultSet rs = run_experiment(cfg);
    ResultSet copy = rs;
    const EfficiencyReport rep_a = derive_report(rs);
    const EfficiencyReport rep_b = derive_report(copy);
    const bool reports_ok = render_table(rep_a) == render_table(rep_b) &&
                            render_csv(rep_a) == render_csv(rep_b) &&
                            render_json(rep_a) == render_json(rep_b);

    Verdict v;
    v.pass = solutions_ok && iterations_ok && reports_ok;
    v.detail = fmt("solutions bit-identical across w in {1, 1, 2, max}: %s; iterations %d "
                   "everywhere: %s; table/csv/json byte-identical for equal result sets: %s",
                   solutions_ok ? "yes" : "NO", r1.iterations, iterations_ok ? "yes" : "NO",
                   reports_ok ? "yes" : "NO");
    return v;
}

// --- criterion 8: invariant property suites ------------------------------

Verdict check_property_suites() {
    const auto t0 = Clock::now();
    const int trials = 1000;
    std::mt19937_64 eng(2026);
    std::string fail;

    // assembly identity: subdomain shares sum back to the monolithic matrix
    for (int t = 0; t < trials && fail.empty(); ++t) {
        const int nx = 1 + static_cast<int>(eng() % 9), ny = 1 + static_cast<int>(eng() % 9);
        const int px = 1 + static_cast<int>(eng() % std::min<int>(4, nx + 1));
        const int py = 1 + static_cast<int>(eng() % std::min<int>(4, ny + 1));
        GridSpec g = build_grid(nx, ny);
        DerivedSystem ds = make_system(g, px, py);
        oracle::Dense got = reconstruct(ds);
        oracle::Dense want = oracle::dense_laplacian(g);
        for (std::int64_t i = 0; i < g.n() && fail.empty(); ++i)
            for (std::int64_t j = 0; j < g.n(); ++j)
                if (std::fabs(got.at(i, j) - want.at(i, j)) > 1e-12) {
                    fail = fmt("assembly identity broke on (%d,%d) %dx%d", nx, ny, px, py);
                    break;
                }
    }

    // the interface operator is symmetric positive definite
    for (int t = 0; t < trials && fail.empty(); ++t) {
        const int nx = 2 + static_cast<int>(eng() % 8), ny = 2 + static_cast<int>(eng() % 8);
        int px = 1, py = 1;
        while (px * py == 1) {
            px = 1 + static_cast<int>(eng() % std::min<int>(4, nx + 1));
            py = 1 + static_cast<int>(eng() % std::min<int>(4, ny + 1));
        }
        GridSpec g = build_grid(nx, ny);
        DerivedSystem ds = make_system(g, px, py);
        factor_internals(ds);
        const std::size_t dim = ds.interface_nodes.size();
        if (dim == 0) continue;

        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> x(dim);
        for (double& xi : x) xi = u(eng);
        const auto sx = schur_apply(ds, x);
        double quad = 0.0, xx = 0.0;
        for (std::size_t i = 0; i < dim; ++i) quad += x[i] * sx[i], xx += x[i] * x[i];
        if (!(xx == 0.0 || quad > 0.0)) fail = fmt("x'Sx <= 0 on (%d,%d) %dx%d", nx, ny, px, py);

        if (dim >= 2 && fail.empty()) {
            const std::size_t i = eng() % dim;
            std::size_t j = eng() % dim;
            while (j == i) j = eng() % dim;
            std::vector<double> ei(dim, 0.0), ej(dim, 0.0);
            ei[i] = 1.0;
            ej[j] = 1.0;
            const double sij = schur_apply(ds, ej)[i];
            const double sji = schur_apply(ds, ei)[j];
            if (std::fabs(sij - sji) > 1e-12)
                fail = fmt("S not symmetric at (%zu,%zu) on (%d,%d) %dx%d", i, j, nx, ny, px, py);
        }
    }

    // goal duality: dualize fills the missing side and round-trips exactly
    for (int t = 0; t < trials && fail.empty(); ++t) {
        std::uniform_real_distribution<double> ut(0.01, 1000.0);
        const int p = 2 + static_cast<int>(eng() % 511);
        const std::int64_t n = 1 + static_cast<std::int64_t>(eng() % 1000000);
        const double t1 = ut(eng);
        const double s_goal = ut(eng);

        GoalSpec fwd = dualize_goal(t1, make_absolute_goal("a", {{PN{p, n}, s_goal}}));
        const double t_goal = *fwd.time_goal_at(p, n);
        GoalSpec back;
        back.kind = GoalKind::absolute;
        back.time_goals[PN{p, n}] = t_goal;
        back = dualize_goal(t1, back);
        if (std::fabs(*back.speedup_goal_at(p, n) - s_goal) > 1e-12 * s_goal)
            fail = fmt("goal duality round trip drifted at p=%d", p);

        GoalSpec dc = dualize_goal(t1, make_dc_goal({{PN{p, n}, t_goal}}));
        if (std::fabs(*dc.speedup_goal_at(p, n) - t1 / t_goal) > 1e-12 * (t1 / t_goal))
            fail = fmt("dc goal dualization drifted at p=%d", p);
    }

    // relative efficiency: the speedup-ratio and time-ratio forms agree
    for (int t = 0; t < trials && fail.empty(); ++t) {
        std::uniform_real_distribution<double> ut(1e-6, 1e6);
        const double t1 = ut(eng), tp = ut(eng), tdc = ut(eng);
        const double via_speedups = dc_efficiency(speedup(t1, tp), dc_speedup_goal(t1, tdc));
        const double via_times = relative_efficiency_from_time(tdc, tp);
        if (std::fabs(via_speedups - via_times) > 1e-12 * via_times)
            fail = "relative-efficiency forms disagree";
    }

    // band factorization matches the dense elimination oracle
    for (int t = 0; t < trials && fail.empty(); ++t) {
        const int n = 1 + static_cast<int>(eng() % 48);
        const int kl = static_cast<int>(eng() % std::min(n, 9));
        const int ku = static_cast<int>(eng() % std::min(n, 9));
        std::uniform_real_distribution<double> u(-1.0, 1.0);

        BandedMatrix m(n, kl, ku);
        oracle::Dense a(n);
        for (int i = 0; i < n; ++i) {
            double row_sum = 0.0;
            for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
                if (j != i) {
                    const double val = u(eng);
                    m.ref(i, j) = val;
                    a.at(i, j) = val;
                    row_sum += std::fabs(val);
                }
            const double d = row_sum + 1.0 + std::fabs(u(eng));
            m.ref(i, i) = d;
            a.at(i, i) = d;
        }
        std::vector<double> rhs(n);
        for (double& r : rhs) r = u(eng);

        const auto got = factor(std::move(m)).solve(rhs);
        const auto want = oracle::dense_solve(a, rhs);
        if (oracle::rel_diff_2norm(got, want) > 1e-10)
            fail = fmt("band solve drifted from dense oracle at n=%d kl=%d ku=%d", n, kl, ku);
    }

    const double el = seconds_since(t0);
    Verdict v;
    v.pass = fail.empty() && el < 120.0;
    v.detail = fail.empty()
                   ? fmt("5 suites x %d randomized instances: assembly identity, interface SPD, "
                         "goal duality, efficiency two-form, band-vs-dense (%.1fs)",
                         trials, el)
                   : fail;
    return v;
}

}  // namespace

int main() {
    std::printf("# acceptance gate: %d hardware thread(s), timer resolution %.2e s\n",
                WorkerPool::resolve(0), measure_timer_resolution());

    int failures = 0;
    auto report = [&](int idx, const char* name, const Verdict& v) {
        const char* tag = v.skip ? "SKIP" : v.pass ? "PASS" : "FAIL";
        if (!v.pass && !v.skip) ++failures;
        std::printf("[%s] %d %s: %s\n", tag, idx, name, v.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "reference-study reproduction", check_golden_tables());
    report(2, "solver oracle equivalence", check_oracle_equivalence());

    std::printf("# timing campaign: 512x512, partitions 2x2/4x4/8x8; direct-solve cells "
                "sampled 8x bracketing the parallel block...\n");
    std::fflush(stdout);
    const Campaign campaign = run_campaign();
    std::printf("# campaign done in %.0fs\n", campaign.wall);

    report(3, "monolithic complexity fit", check_complexity_fit(campaign));
    report(4, "goal speedup tracks p^2", check_dc_speedup_tracks_p2(campaign));
    report(5, "superlinear speedup at hardware width", check_superlinear_speedup(campaign));
    report(6, "relative efficiency decays in (0,1]", check_dc_efficiency_decay(campaign));
    report(7, "deterministic solutions and reports", check_determinism());
    report(8, "invariant property suites", check_property_suites());

    return failures == 0 ? 0 : 1;
}
