#include "ddbench/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ddbench {

BandedMatrix::BandedMatrix(int n_, int kl_, int ku_) : n(n_), kl(kl_), ku(ku_) {
    if (n <= 0) throw DimensionMismatchError("band matrix requires n >= 1");
    if (kl < 0 || ku < 0 || kl >= n || ku >= n)
        throw DimensionMismatchError("band widths must satisfy 0 <= kl, ku < n");
    bands.assign(static_cast<std::size_t>(kl + ku + 1) * n, 0.0);
}

std::uint64_t flop_model(std::int64_t n, std::int64_t b) {
    return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(b) *
           static_cast<std::uint64_t>(b + 2);
}

namespace {

// One classic elimination step: divide the L column, then subtract the rank-1
// update, walked per diagonal offset t = di - dj so the inner loop is
// contiguous in memory.  Handles clipping near the bottom-right corner.
void factor_step(double* a, int n, int kl, int ku, int k, double breakdown,
                 double* mult, double* urow) {
    const std::size_t un = static_cast<std::size_t>(n);
    const double piv = a[static_cast<std::size_t>(ku) * un + k];
    if (!(std::abs(piv) > breakdown))
        throw SingularMatrixError(
            "pivot " + std::to_string(piv) + " at index " + std::to_string(k) +
                " is at or below the breakdown threshold (matrix not SPD?)",
            k);
    const int klk = std::min(kl, n - 1 - k);
    const int kuk = std::min(ku, n - 1 - k);
    const double inv = 1.0 / piv;
    for (int di = 1; di <= klk; ++di) {
        double v = a[static_cast<std::size_t>(ku + di) * un + k] * inv;
        a[static_cast<std::size_t>(ku + di) * un + k] = v;
        mult[di] = v;
    }
    for (int dj = 1; dj <= kuk; ++dj)
        urow[dj] = a[static_cast<std::size_t>(ku - dj) * un + (k + dj)];
    for (int t = 1 - kuk; t <= klk - 1; ++t) {
        const int lo = std::max(1, 1 - t);
        const int hi = std::min(kuk, klk - t);
        double* row = a + static_cast<std::size_t>(ku + t) * un + k;
        for (int dj = lo; dj <= hi; ++dj) row[dj] -= mult[dj + t] * urow[dj];
    }
}

// Pivots fused per trailing sweep.  Each trailing band line is then loaded
// once per kFuse pivots instead of once per pivot; at wide bands the factor
// is traffic-bound, so this keeps real time proportional to the flop model.
constexpr int kFuse = 8;

}  // namespace

BandedLU factor(BandedMatrix m) {
    const int n = m.n, kl = m.kl, ku = m.ku;
    if (n == 0) throw DimensionMismatchError("cannot factor an empty matrix");
    double* a = m.bands.data();
    const std::size_t un = static_cast<std::size_t>(n);

    double max_diag = 0.0;
    for (int k = 0; k < n; ++k)
        max_diag = std::max(max_diag, std::abs(a[static_cast<std::size_t>(ku) * un + k]));
    const double breakdown = 1e-14 * max_diag;

    // Per-pivot scratch: L multipliers and the U row, stride-1 copies.
    const std::size_t lw = static_cast<std::size_t>(kl) + 1;
    const std::size_t uw = static_cast<std::size_t>(ku) + 1;
    std::vector<double> mult(lw * kFuse, 0.0);
    std::vector<double> urow(uw * kFuse, 0.0);

    // Every trailing entry receives its rank-1 terms in ascending pivot
    // order, exactly as the one-pivot-at-a-time loop applies them; fusing
    // only regroups which sweep carries them.
    int k = 0;
    while (k < n) {
        const bool fuse = kl >= 1 && ku >= 1 && k + kFuse - 1 + std::max(kl, ku) <= n - 1;
        if (!fuse) {
            factor_step(a, n, kl, ku, k, breakdown, mult.data(), urow.data());
            ++k;
            continue;
        }
        const int kend = k + kFuse - 1;  // last pivot of this panel

        // Factor the panel pivots; restrict each rank-1 update to the rows
        // and columns of later panel pivots so their values are final before
        // use.  The trailing block (both indices past the panel) waits for
        // the fused sweep.
        for (int kk = 0; kk < kFuse; ++kk) {
            const int kp = k + kk;
            const double piv = a[static_cast<std::size_t>(ku) * un + kp];
            if (!(std::abs(piv) > breakdown))
                throw SingularMatrixError(
                    "pivot " + std::to_string(piv) + " at index " + std::to_string(kp) +
                        " is at or below the breakdown threshold (matrix not SPD?)",
                    kp);
            double* mk = mult.data() + static_cast<std::size_t>(kk) * lw;
            double* uk = urow.data() + static_cast<std::size_t>(kk) * uw;
            const double inv = 1.0 / piv;
            for (int di = 1; di <= kl; ++di) {
                double v = a[static_cast<std::size_t>(ku + di) * un + kp] * inv;
                a[static_cast<std::size_t>(ku + di) * un + kp] = v;
                mk[di] = v;
            }
            for (int dj = 1; dj <= ku; ++dj)
                uk[dj] = a[static_cast<std::size_t>(ku - dj) * un + (kp + dj)];
            const int in_panel = kend - kp;  // later pivots this step must finish
            for (int dj = 1; dj <= std::min(ku, in_panel); ++dj) {
                const int j = kp + dj;
                for (int di = 1; di <= kl; ++di)
                    a[static_cast<std::size_t>(ku + di - dj) * un + j] -= mk[di] * uk[dj];
            }
            for (int di = 1; di <= std::min(kl, in_panel); ++di) {
                for (int dj = in_panel + 1; dj <= ku; ++dj)
                    a[static_cast<std::size_t>(ku + di - dj) * un + (kp + dj)] -= mk[di] * uk[dj];
            }
        }

        // Fused trailing sweep, one pass per diagonal offset t = di - dj.
        // Entry (j + t, j) takes the terms of every panel pivot that reaches
        // it in ascending pivot order, exactly as the one-pivot-at-a-time
        // loop applies them; away from the panel edges that is all kFuse.
        for (int t = 1 - ku; t <= kl - 1; ++t) {
            const int lo = std::max(1, 1 - t);
            const int hi = std::min(ku, kl - t);
            double* const row = a + static_cast<std::size_t>(ku + t) * un;
            const int jlo = k + kFuse + std::max(0, -t);  // both indices past the panel
            const int jhi = kend + hi;
            const int mid_lo = std::max(jlo, kend + lo);
            const int mid_hi = std::min(jhi, k + hi);
            for (int j = jlo; j < mid_lo; ++j) {
                double v = row[j];
                for (int kp = std::max(k, j - hi); kp <= std::min(kend, j - lo); ++kp) {
                    const int kk = kp - k;
                    v -= mult[static_cast<std::size_t>(kk) * lw + (j - kp + t)] *
                         urow[static_cast<std::size_t>(kk) * uw + (j - kp)];
                }
                row[j] = v;
            }
            for (int j = mid_lo; j <= mid_hi; ++j) {
                double v = row[j];
                for (int kk = 0; kk < kFuse; ++kk)
                    v -= mult[static_cast<std::size_t>(kk) * lw + (j - k - kk + t)] *
                         urow[static_cast<std::size_t>(kk) * uw + (j - k - kk)];
                row[j] = v;
            }
            for (int j = std::max(mid_hi + 1, mid_lo); j <= jhi; ++j) {
                double v = row[j];
                for (int kp = std::max(k, j - hi); kp <= std::min(kend, j - lo); ++kp) {
                    const int kk = kp - k;
                    v -= mult[static_cast<std::size_t>(kk) * lw + (j - kp + t)] *
                         urow[static_cast<std::size_t>(kk) * uw + (j - kp)];
                }
                row[j] = v;
            }
        }
        k += kFuse;
    }

    BandedLU lu;
    lu.n = n;
    lu.kl = kl;
    lu.ku = ku;
    lu.bands = std::move(m.bands);
    lu.flop_count = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(kl) *
                    static_cast<std::uint64_t>(ku + 2);
    return lu;
}

void BandedLU::solve_inplace(std::span<double> x) const {
    if (static_cast<int>(x.size()) != n)
        throw DimensionMismatchError("rhs length " + std::to_string(x.size()) +
                                     " does not match matrix dimension " + std::to_string(n));
    const double* a = bands.data();
    const std::size_t un = static_cast<std::size_t>(n);
    // forward: L y = rhs, unit diagonal, column sweep
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        if (xj != 0.0) {
            const int hi = std::min(kl, n - 1 - j);
            for (int di = 1; di <= hi; ++di)
                x[j + di] -= a[static_cast<std::size_t>(ku + di) * un + j] * xj;
        }
    }
    // backward: U x = y
    for (int j = n - 1; j >= 0; --j) {
        const double xj = x[j] / a[static_cast<std::size_t>(ku) * un + j];
        x[j] = xj;
        if (xj != 0.0) {
            const int hi = std::min(ku, j);
            for (int di = 1; di <= hi; ++di)
                x[j - di] -= a[static_cast<std::size_t>(ku - di) * un + j] * xj;
        }
    }
}

std::vector<double> BandedLU::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_inplace(x);
    return x;
}

}  // namespace ddbench
