#include "ddbench/grid.hpp"

#include <algorithm>
#include <string>

namespace ddbench {

GridSpec build_grid(int nx, int ny) {
    if (nx <= 0 || ny <= 0)
        throw InvalidGridError("grid dimensions must be positive, got " + std::to_string(nx) +
                               "x" + std::to_string(ny));
    return GridSpec{nx, ny, 1.0};
}

BandedMatrix assemble_monolithic(const GridSpec& grid) {
    const int nx = grid.nx, ny = grid.ny;
    const std::int64_t n = grid.n();
    if (n == 0) throw InvalidGridError("cannot assemble an empty grid");
    const int b = static_cast<int>(std::min<std::int64_t>(nx, n - 1));
    BandedMatrix m(static_cast<int>(n), b, b);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = static_cast<int>(grid.index(i, j));
            m.ref(row, row) = 4.0;
            if (i > 0) m.ref(row, row - 1) = -1.0;
            if (i + 1 < nx) m.ref(row, row + 1) = -1.0;
            if (j > 0) m.ref(row, row - nx) = -1.0;
            if (j + 1 < ny) m.ref(row, row + nx) = -1.0;
        }
    }
    return m;
}

std::vector<double> apply_stencil(const GridSpec& grid, std::span<const double> u) {
    const int nx = grid.nx, ny = grid.ny;
    if (static_cast<std::int64_t>(u.size()) != grid.n())
        throw DimensionMismatchError("vector length does not match grid size");
    std::vector<double> y(u.size());
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::int64_t k = grid.index(i, j);
            double v = 4.0 * u[k];
            if (i > 0) v -= u[k - 1];
            if (i + 1 < nx) v -= u[k + 1];
            if (j > 0) v -= u[k - nx];
            if (j + 1 < ny) v -= u[k + nx];
            y[k] = v;
        }
    }
    return y;
}

namespace {

// Near-equal contiguous runs: the first (count % blocks) runs get one extra.
std::vector<int> block_offsets(int count, int blocks) {
    std::vector<int> off(blocks + 1, 0);
    const int base = count / blocks;
    const int rem = count % blocks;
    for (int b = 0; b < blocks; ++b) off[b + 1] = off[b] + base + (b < rem ? 1 : 0);
    return off;
}

}  // namespace

int Partition::x_block_of_element(int ex) const {
    auto it = std::upper_bound(x_elem_offsets.begin(), x_elem_offsets.end(), ex);
    return static_cast<int>(it - x_elem_offsets.begin()) - 1;
}

int Partition::y_block_of_element(int ey) const {
    auto it = std::upper_bound(y_elem_offsets.begin(), y_elem_offsets.end(), ey);
    return static_cast<int>(it - y_elem_offsets.begin()) - 1;
}

bool Partition::is_x_cut(int i) const {
    return std::binary_search(x_cuts.begin(), x_cuts.end(), i);
}

bool Partition::is_y_cut(int j) const {
    return std::binary_search(y_cuts.begin(), y_cuts.end(), j);
}

Partition make_partition(const GridSpec& grid, int px, int py) {
    const int ex = grid.nx + 1, ey = grid.ny + 1;
    if (px < 1 || py < 1)
        throw InvalidPartitionError("subdomain counts must be positive");
    if (px > ex || py > ey)
        throw InvalidPartitionError("more subdomains than elements in a direction: " +
                                    std::to_string(px) + "x" + std::to_string(py) + " blocks on " +
                                    std::to_string(ex) + "x" + std::to_string(ey) + " elements");
    Partition part;
    part.px = px;
    part.py = py;
    part.x_elem_offsets = block_offsets(ex, px);
    part.y_elem_offsets = block_offsets(ey, py);
    for (int b = 0; b + 1 < px; ++b) part.x_cuts.push_back(part.x_elem_offsets[b + 1] - 1);
    for (int b = 0; b + 1 < py; ++b) part.y_cuts.push_back(part.y_elem_offsets[b + 1] - 1);
    return part;
}

NodeClassification classify_nodes(const GridSpec& grid, const Partition& part) {
    NodeClassification cls;
    const int p = part.p();
    cls.internal_nodes.resize(p);
    cls.interface_nodes.resize(p);

    for (int by = 0; by < part.py; ++by) {
        for (int bx = 0; bx < part.px; ++bx) {
            const int id = part.subdomain_id(bx, by);
            const int cx0 = part.x_closure_lo(bx), cx1 = part.x_closure_hi(bx);
            const int cy0 = part.y_closure_lo(by), cy1 = part.y_closure_hi(by);
            const int ix0 = part.x_internal_lo(bx), ix1 = part.x_internal_hi(bx);
            const int iy0 = part.y_internal_lo(by), iy1 = part.y_internal_hi(by);
            for (int j = cy0; j <= cy1; ++j) {
                for (int i = cx0; i <= cx1; ++i) {
                    const bool internal = i >= ix0 && i <= ix1 && j >= iy0 && j <= iy1;
                    if (internal)
                        cls.internal_nodes[id].push_back(grid.index(i, j));
                    else
                        cls.interface_nodes[id].push_back(grid.index(i, j));
                }
            }
        }
    }

    for (int j = 0; j < grid.ny; ++j) {
        const int my = part.y_multiplicity(j);
        for (int i = 0; i < grid.nx; ++i) {
            const int m = part.x_multiplicity(i) * my;
            if (m > 1) {
                cls.global_interface.push_back(grid.index(i, j));
                cls.interface_multiplicity.push_back(m);
            }
            cls.derived_node_count += m;
        }
    }
    return cls;
}

}  // namespace ddbench
