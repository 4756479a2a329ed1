#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "ddbench/banded.hpp"
#include "ddbench/errors.hpp"

namespace ddbench {

// Interior unknowns of a unit-square Dirichlet problem on a regular grid,
// nx by ny nodes, row-major.  h is metadata only: the operator is assembled
// in its h = 1 scaling {4, -1, -1, -1, -1}.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double h = 1.0;

    std::int64_t n() const { return static_cast<std::int64_t>(nx) * ny; }
    std::int64_t index(int i, int j) const { return static_cast<std::int64_t>(j) * nx + i; }
};

GridSpec build_grid(int nx, int ny);

// Five-point operator as a band matrix, semi-bandwidth nx (clamped for
// single-row grids where nx would reach the dimension).
BandedMatrix assemble_monolithic(const GridSpec& grid);

// y = A u without forming A; used for residual checks.
std::vector<double> apply_stencil(const GridSpec& grid, std::span<const double> u);

// Block partition of the element mesh.  The element grid has nx+1 by ny+1
// cells (boundary intervals included); blocks are contiguous runs of element
// columns/rows, near-equal within one element.  Cuts pass through node lines:
// the node column shared by two adjacent blocks belongs to both closures.
struct Partition {
    int px = 1;
    int py = 1;
    std::vector<int> x_elem_offsets;  // size px+1, offsets into [0, nx+1]
    std::vector<int> y_elem_offsets;  // size py+1, offsets into [0, ny+1]
    std::vector<int> x_cuts;          // node columns shared between blocks, size px-1
    std::vector<int> y_cuts;          // node rows, size py-1

    int p() const { return px * py; }
    int subdomain_id(int bx, int by) const { return by * px + bx; }

    int x_block_of_element(int ex) const;
    int y_block_of_element(int ey) const;
    int subdomain_of_element(int ex, int ey) const {
        return subdomain_id(x_block_of_element(ex), y_block_of_element(ey));
    }

    bool is_x_cut(int i) const;
    bool is_y_cut(int j) const;
    int x_multiplicity(int i) const { return is_x_cut(i) ? 2 : 1; }
    int y_multiplicity(int j) const { return is_y_cut(j) ? 2 : 1; }
    int multiplicity(int i, int j) const { return x_multiplicity(i) * y_multiplicity(j); }

    // Grid dimensions are implied by the element offsets.
    int grid_nx() const { return x_elem_offsets[px] - 1; }
    int grid_ny() const { return y_elem_offsets[py] - 1; }

    // Closure node range of a block (inclusive), clamped to the grid.
    int x_closure_lo(int bx) const { return std::max(x_elem_offsets[bx] - 1, 0); }
    int x_closure_hi(int bx) const { return std::min(x_elem_offsets[bx + 1] - 1, grid_nx() - 1); }
    int y_closure_lo(int by) const { return std::max(y_elem_offsets[by] - 1, 0); }
    int y_closure_hi(int by) const { return std::min(y_elem_offsets[by + 1] - 1, grid_ny() - 1); }

    // Internal node range (closure minus cut lines); empty when lo > hi.
    int x_internal_lo(int bx) const { return x_elem_offsets[bx]; }
    int x_internal_hi(int bx) const {
        return bx + 1 < px ? x_elem_offsets[bx + 1] - 2 : grid_nx() - 1;
    }
    int y_internal_lo(int by) const { return y_elem_offsets[by]; }
    int y_internal_hi(int by) const {
        return by + 1 < py ? y_elem_offsets[by + 1] - 2 : grid_ny() - 1;
    }
};

Partition make_partition(const GridSpec& grid, int px, int py);

// Node sets induced by a partition.  Internal nodes belong to exactly one
// subdomain closure (multiplicity 1); interface nodes sit on cut lines and
// are shared (multiplicity 2, or 4 at cut crossings).
struct NodeClassification {
    std::vector<std::vector<std::int64_t>> internal_nodes;   // per subdomain, row-major
    std::vector<std::vector<std::int64_t>> interface_nodes;  // per subdomain, ascending
    std::vector<std::int64_t> global_interface;              // ascending global node ids
    std::vector<int> interface_multiplicity;                 // parallel to global_interface
    std::int64_t derived_node_count = 0;                     // sum of multiplicities
};

NodeClassification classify_nodes(const GridSpec& grid, const Partition& part);

}  // namespace ddbench
