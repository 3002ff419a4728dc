#include "pdecrl/field.hpp"

namespace pdecrl {

namespace {

// Quadrature weight of node index along one axis.
double node_weight(int i, int n, bool periodic) {
    if (periodic) return 1.0;
    return (i == 0 || i == n - 1) ? 0.5 : 1.0;
}

} // namespace

double Field::mean(int c) const {
    const double* p = component(c);
    double sum = 0.0, wsum = 0.0;
    if (grid.dim == 1) {
        for (int i = 0; i < grid.nx; ++i) {
            double w = node_weight(i, grid.nx, grid.periodic);
            sum += w * p[i];
            wsum += w;
        }
    } else {
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                double w = node_weight(i, grid.nx, grid.periodic) *
                           node_weight(j, grid.ny, grid.periodic);
                sum += w * p[static_cast<std::size_t>(i) * grid.ny + j];
                wsum += w;
            }
    }
    return sum / wsum;
}

double Field::mean_sq_dev(int c, double ref) const {
    const double* p = component(c);
    double sum = 0.0, wsum = 0.0;
    if (grid.dim == 1) {
        for (int i = 0; i < grid.nx; ++i) {
            double w = node_weight(i, grid.nx, grid.periodic);
            double d = p[i] - ref;
            sum += w * d * d;
            wsum += w;
        }
    } else {
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                double w = node_weight(i, grid.nx, grid.periodic) *
                           node_weight(j, grid.ny, grid.periodic);
                double d = p[static_cast<std::size_t>(i) * grid.ny + j] - ref;
                sum += w * d * d;
                wsum += w;
            }
    }
    return sum / wsum;
}

Field Field::shifted(int cells_x, int cells_y) const {
    if (!grid.periodic)
        throw std::invalid_argument("Field::shifted requires a periodic grid");
    Field out(grid, components);
    auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
    for (int c = 0; c < components; ++c) {
        if (grid.dim == 1) {
            for (int i = 0; i < grid.nx; ++i)
                out.at(c, wrap(i + cells_x, grid.nx)) = at(c, i);
        } else {
            for (int i = 0; i < grid.nx; ++i)
                for (int j = 0; j < grid.ny; ++j)
                    out.at(c, wrap(i + cells_x, grid.nx), wrap(j + cells_y, grid.ny)) =
                        at(c, i, j);
        }
    }
    return out;
}

} // namespace pdecrl
