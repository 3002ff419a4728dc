#pragma once

#include <cstddef>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdecrl {

/// Uniform grid in one or two spatial dimensions.
/// Periodic grids use dx = L / n, non-periodic (Neumann) grids dx = L / (n - 1).
struct Grid {
    int dim = 1;
    int nx = 0;
    int ny = 1;        // 1 for 1D grids
    double lx = 0.0;
    double ly = 0.0;
    bool periodic = true;

    static Grid make_1d(double length, int n_points, bool periodic_bc) {
        if (n_points < 16) throw std::invalid_argument("Grid: n_points must be >= 16");
        if (length <= 0.0) throw std::invalid_argument("Grid: length must be positive");
        Grid g;
        g.dim = 1;
        g.nx = n_points;
        g.ny = 1;
        g.lx = length;
        g.ly = 0.0;
        g.periodic = periodic_bc;
        return g;
    }

    static Grid make_2d(double length, int n_per_axis) {
        if (n_per_axis < 32 || (n_per_axis & (n_per_axis - 1)) != 0)
            throw std::invalid_argument("Grid: 2D resolution must be a power of two >= 32");
        Grid g;
        g.dim = 2;
        g.nx = n_per_axis;
        g.ny = n_per_axis;
        g.lx = length;
        g.ly = length;
        g.periodic = true;
        return g;
    }

    double dx() const { return periodic ? lx / nx : lx / (nx - 1); }
    double dy() const { return dim == 2 ? (periodic ? ly / ny : ly / (ny - 1)) : 0.0; }
    std::size_t n_total() const { return static_cast<std::size_t>(nx) * ny; }
    double domain_measure() const { return dim == 2 ? lx * ly : lx; }

    double x(int i) const { return i * dx(); }
    double y_coord(int j) const { return j * dy(); }

    bool operator==(const Grid& o) const {
        return dim == o.dim && nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly &&
               periodic == o.periodic;
    }
};

/// Discretized PDE state: one or more components sampled on a grid.
/// Storage is row-major per component: value(c, i) in 1D, value(c, i, j) in 2D
/// with j the fast index.
struct Field {
    Grid grid;
    int components = 1;
    std::vector<double> data;

    Field() = default;
    Field(const Grid& g, int n_components)
        : grid(g), components(n_components),
          data(static_cast<std::size_t>(n_components) * g.n_total(), 0.0) {
        if (n_components < 1 || n_components > 2)
            throw std::invalid_argument("Field: 1 or 2 components supported");
    }

    double& at(int c, int i) { return data[c * grid.n_total() + i]; }
    double at(int c, int i) const { return data[c * grid.n_total() + i]; }
    double& at(int c, int i, int j) { return data[c * grid.n_total() + static_cast<std::size_t>(i) * grid.ny + j]; }
    double at(int c, int i, int j) const { return data[c * grid.n_total() + static_cast<std::size_t>(i) * grid.ny + j]; }

    double* component(int c) { return data.data() + c * grid.n_total(); }
    const double* component(int c) const { return data.data() + c * grid.n_total(); }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data) m = std::max(m, std::abs(v));
        return m;
    }

    /// Spatial mean of one component (rectangle rule on periodic grids,
    /// trapezoidal otherwise).
    double mean(int c = 0) const;

    /// Spatial mean of the squared deviation from a reference value.
    double mean_sq_dev(int c, double ref) const;

    /// Cyclic shift by whole grid cells (periodic grids only).
    Field shifted(int cells_x, int cells_y = 0) const;
};

/// Thrown when a PDE step produces non-finite or runaway values.
struct BlowUpError : std::runtime_error {
    explicit BlowUpError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kBlowUpThreshold = 1e6;

} // namespace pdecrl
