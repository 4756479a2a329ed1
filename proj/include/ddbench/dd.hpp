#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ddbench/banded.hpp"
#include "ddbench/grid.hpp"
#include "ddbench/worker_pool.hpp"

namespace ddbench {

struct Triplet {
    std::int32_t r;
    std::int32_t c;
    double v;
};

// One subdomain's share of the split operator.  Internal unknowns form a
// rectangle ordered row-major, so a_ii is the plain five-point matrix of that
// rectangle.  Couplings that lie on a cut are divided between the sharing
// closures (halved on a cut line, quartered at cut crossings), which makes
// the subdomain matrices sum back to the monolithic operator exactly.
struct SubdomainBlock {
    int bx = 0, by = 0;
    int ix0 = 0, ix1 = -1, iy0 = 0, iy1 = -1;  // internal node rect, inclusive
    std::int64_t internal_dim = 0;
    int band = 0;

    BandedMatrix a_ii;             // pristine until factor_internals moves it into lu
    BandedLU lu;
    bool factored = false;
    std::vector<Triplet> a_ig;     // r: internal local, c: interface local, one entry per edge
    std::vector<Triplet> a_gg;     // interface-interface share, both triangles stored
    std::vector<std::int64_t> iface_nodes;  // global node ids, ascending
    std::vector<std::int32_t> iface_assembled;  // position in the assembled interface vector

    // solve-time scratch, sized by decompose
    std::vector<double> f_int, w_int, u_int, x_if, y_if;

    int width() const { return ix1 - ix0 + 1; }
    std::int64_t internal_local(int i, int j) const {
        return static_cast<std::int64_t>(j - iy0) * width() + (i - ix0);
    }
};

struct DerivedSystem {
    GridSpec grid;
    Partition part;
    std::int64_t interface_dim = 0;
    std::vector<std::int64_t> interface_nodes;  // assembled ordering (ascending global)
    std::vector<double> interface_diag;         // assembled interface-block diagonal (Jacobi)
    std::vector<SubdomainBlock> subs;
    bool factored = false;

    std::uint64_t factor_flops() const;
};

DerivedSystem decompose(const GridSpec& grid, const Partition& part,
                        const NodeClassification& cls);

// Factor every interior block in place (parallel across subdomains).
void factor_internals(DerivedSystem& ds, WorkerPool& pool);
void factor_internals(DerivedSystem& ds, int workers = 1);

// y = S x with S the assembled Schur complement; requires factored internals.
// Per-subdomain work may run in parallel, the assembly of contributions is
// sequential in subdomain order so results do not depend on the pool size.
void schur_apply_into(DerivedSystem& ds, std::span<const double> x, std::span<double> y,
                      WorkerPool& pool);
std::vector<double> schur_apply(DerivedSystem& ds, std::span<const double> x);

struct SolveOptions {
    double tol = 1e-8;
    int workers = 1;        // 0 = hardware thread count
    int max_iterations = 0; // 0 = 10*sqrt(interface dim) + 100
};

struct SolveReport {
    int iterations = 0;
    double final_relative_residual = 0.0;
    double factor_seconds = 0.0;
    double iterate_seconds = 0.0;
    double total_seconds = 0.0;
    int p_logical = 1;
    int workers = 1;
    std::vector<double> residual_history;          // interface residual 2-norms
    std::vector<double> precond_residual_history;  // sqrt(r' M^-1 r)
};

// Substructured solve: factor interiors, run preconditioned CG on the
// assembled interface, back-substitute.  total_seconds covers exactly those
// three phases; decomposition and the final residual check are outside it.
// The DerivedSystem is consumed in the sense that its interior blocks hold
// the factors afterwards.
std::pair<std::vector<double>, SolveReport> solve_dd(DerivedSystem& ds,
                                                     std::span<const double> f,
                                                     const SolveOptions& opts = {});

// Direct banded solve of the undecomposed system; the reference T(1, n) path.
std::pair<std::vector<double>, SolveReport> solve_monolithic(const GridSpec& grid,
                                                             std::span<const double> f);

// Dirichlet solve of one subdomain's interior, the T(1, n/p) path.  Runs the
// exact monolithic code on the subdomain's internal rectangle; f_local is
// ordered row-major over that rectangle.
std::pair<std::vector<double>, SolveReport> solve_single_local(const GridSpec& grid,
                                                               const Partition& part,
                                                               int subdomain,
                                                               std::span<const double> f_local);

// Deterministic load used by benchmarks: uniform in [-1, 1), fixed algorithm
// independent of platform RNG quirks.
std::vector<double> random_load(std::int64_t n, std::uint64_t seed);

}  // namespace ddbench
