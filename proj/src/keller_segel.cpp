#include "pdecrl/envs.hpp"
#include "pdecrl/rng.hpp"

#include <numbers>
#include <sstream>

namespace pdecrl {

namespace {

// Tridiagonal solve (Thomas), in place on rhs.
void solve_tridiag(const std::vector<double>& lower, const std::vector<double>& diag,
                   const std::vector<double>& upper, std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> cp(n);
    cp[0] = upper[0] / diag[0];
    rhs[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
        double m = 1.0 / (diag[i] - lower[i] * cp[i - 1]);
        cp[i] = upper[i] * m;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) * m;
    }
    for (int i = n - 2; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
}

// Backward-Euler diffusion solve (I - dt*D*A) x = rhs with zero-flux Neumann
// closure in conservative (control-volume) form.
void diffuse_implicit(std::vector<double>& x, double coeff, double dt, double dx) {
    const int n = static_cast<int>(x.size());
    const double r = coeff * dt / (dx * dx);
    std::vector<double> lower(n, -r), diag(n, 1.0 + 2.0 * r), upper(n, -r);
    upper[0] = -2.0 * r;
    lower[n - 1] = -2.0 * r;
    lower[0] = upper[n - 1] = 0.0;
    solve_tridiag(lower, diag, upper, x);
}

} // namespace

KellerSegelEnv::KellerSegelEnv(const KellerSegelParams& p)
    : params_(p), grid_(Grid::make_1d(p.length, p.n_points, /*periodic=*/false)) {
    if (p.diffusion <= 0.0 || p.growth < 0.0)
        throw std::invalid_argument("KellerSegelParams: D must be positive and q >= 0");
    if (p.chi < 0.0) throw std::invalid_argument("KellerSegelParams: chi must be >= 0");
    if (p.dt <= 0.0 || p.substeps < 1)
        throw std::invalid_argument("KellerSegelParams: dt > 0 and substeps >= 1 required");
    const double h = p.dt / p.substeps;
    const double bound = grid_.dx() / std::max(p.chi, 1.0);
    if (h > bound) {
        std::ostringstream os;
        os << "KellerSegelParams: substep " << h << " exceeds the explicit chemotaxis bound "
           << bound << "; increase substeps";
        throw std::invalid_argument(os.str());
    }
}

Field KellerSegelEnv::initial_condition(std::uint64_t seed) const {
    const int n = params_.n_points;
    Rng rng = make_rng(seed, "ks2-ic");
    std::normal_distribution<double> normal(0.0, 1.0);

    // smooth Neumann-compatible noise from the first few cosine modes
    constexpr int kModes = 6;
    std::vector<double> coeff(kModes);
    for (double& c : coeff) c = normal(rng);
    Field out(grid_, 2);
    double ms = 0.0;
    std::vector<double> noise(n);
    for (int i = 0; i < n; ++i) {
        double x = grid_.x(i);
        double v = 0.0;
        for (int m = 1; m <= kModes; ++m)
            v += coeff[m - 1] * std::cos(m * std::numbers::pi * x / params_.length);
        noise[i] = v;
        ms += v * v;
    }
    double scale = ms > 0.0 ? std::sqrt(n / ms) : 1.0;
    for (int i = 0; i < n; ++i) {
        out.at(0, i) = 1.0 + 0.1 * noise[i] * scale;
        out.at(1, i) = out.at(0, i);
    }
    return out;
}

Field KellerSegelEnv::step(const Field& state, const Field& control, long step_index) const {
    if (!(state.grid == grid_) || !(control.grid == grid_))
        throw std::invalid_argument("KellerSegelEnv::step: grid mismatch");
    const int n = params_.n_points;
    const double dx = grid_.dx();
    const double h = params_.dt / params_.substeps;

    std::vector<double> y(state.component(0), state.component(0) + n);
    std::vector<double> z(state.component(1), state.component(1) + n);
    std::vector<double> flux(n - 1), ynew(n), znew(n);

    for (int s = 0; s < params_.substeps; ++s) {
        // chemotaxis face fluxes G = chi * y * dz/dx; boundary faces carry none
        for (int i = 0; i < n - 1; ++i)
            flux[i] = params_.chi * 0.5 * (y[i] + y[i + 1]) * (z[i + 1] - z[i]) / dx;

        for (int i = 0; i < n; ++i) {
            double div;
            if (i == 0)
                div = flux[0] / (0.5 * dx);
            else if (i == n - 1)
                div = -flux[n - 2] / (0.5 * dx);
            else
                div = (flux[i] - flux[i - 1]) / dx;
            ynew[i] = y[i] + h * (-div + params_.growth * y[i] * (1.0 - y[i]));
            znew[i] = z[i] + h * (y[i] - z[i] + control.at(0, i));
        }
        diffuse_implicit(ynew, params_.diffusion, h, dx);
        diffuse_implicit(znew, 1.0, h, dx);
        y.swap(ynew);
        z.swap(znew);
    }

    Field out(grid_, 2);
    double min_y = y[0];
    for (int i = 0; i < n; ++i) {
        out.at(0, i) = y[i];
        out.at(1, i) = z[i];
        min_y = std::min(min_y, y[i]);
    }
    if (min_y < -1e-8) ++negative_density_warnings_;
    if (!out.all_finite() || out.max_abs() > kBlowUpThreshold) {
        std::ostringstream os;
        os << "Keller-Segel blow-up at control step " << step_index
           << " (max |value| = " << out.max_abs() << ")";
        throw BlowUpError(os.str());
    }
    return out;
}

} // namespace pdecrl
