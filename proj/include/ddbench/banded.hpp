#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ddbench/errors.hpp"

namespace ddbench {

// Band matrix, diagonal-major storage: kl+ku+1 diagonals, each of length n,
// stored contiguously.  Diagonal d holds entries (i, j) with i - j = d - ku,
// indexed by column j; slots outside the matrix stay zero.
struct BandedMatrix {
    int n = 0;
    int kl = 0;
    int ku = 0;
    std::vector<double> bands;

    BandedMatrix() = default;
    BandedMatrix(int n_, int kl_, int ku_);

    bool in_band(int i, int j) const {
        int d = i - j;
        return -ku <= d && d <= kl;
    }

    // In-band slot, writable.
    double& ref(int i, int j) {
        return bands[static_cast<std::size_t>(i - j + ku) * n + j];
    }

    // Value at (i, j); zero outside the band.
    double entry(int i, int j) const {
        if (i < 0 || j < 0 || i >= n || j >= n || !in_band(i, j)) return 0.0;
        return bands[static_cast<std::size_t>(i - j + ku) * n + j];
    }
};

// LU factors of a band matrix, no pivoting.  L is unit lower triangular with
// multipliers in the sub-diagonals, U occupies the main and super-diagonals.
// Same storage layout as BandedMatrix.
struct BandedLU {
    int n = 0;
    int kl = 0;
    int ku = 0;
    std::vector<double> bands;
    std::uint64_t flop_count = 0;

    double u_entry(int i, int j) const {
        if (j < i || j - i > ku) return 0.0;
        return bands[static_cast<std::size_t>(i - j + ku) * n + j];
    }

    double l_entry(int i, int j) const {
        if (i == j) return 1.0;
        if (i < j || i - j > kl) return 0.0;
        return bands[static_cast<std::size_t>(i - j + ku) * n + j];
    }

    double u_diag(int k) const { return bands[static_cast<std::size_t>(ku) * n + k]; }

    // x <- U^-1 L^-1 x
    void solve_inplace(std::span<double> x) const;
    std::vector<double> solve(std::span<const double> rhs) const;
};

// Factor without pivoting.  Takes the matrix by value: callers that no longer
// need the input should move it in, the storage is reused for the factors.
// Throws SingularMatrixError when a pivot falls at or below
// 1e-14 * max |initial diagonal|.
BandedLU factor(BandedMatrix m);

// Operation-count model for the no-pivot band factorization at equal
// bandwidths, multiply-adds with divisions weighted twice: n * b * (b + 2).
std::uint64_t flop_model(std::int64_t n, std::int64_t b);

}  // namespace ddbench
