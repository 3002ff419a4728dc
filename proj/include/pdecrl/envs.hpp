#pragma once

#include "pdecrl/field.hpp"
#include "pdecrl/fftwrap.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace pdecrl {

/// Flow map of a controlled PDE over one control interval with zero-order-hold
/// control. Implementations are deterministic functions of their inputs.
class PdeEnv {
public:
    virtual ~PdeEnv() = default;

    virtual const Grid& grid() const = 0;
    virtual int components() const = 0;
    /// Component of the state equation the control field enters.
    virtual int control_component() const { return 0; }
    virtual double control_dt() const = 0;

    virtual Field initial_condition(std::uint64_t seed) const = 0;

    /// Advance one control interval. `control` is a single-component field on
    /// the same grid, held constant throughout. `step_index` is only used to
    /// name the step in blow-up diagnostics.
    virtual Field step(const Field& state, const Field& control,
                       long step_index = -1) const = 0;
};

// ---------------------------------------------------------------------------
// Kuramoto-Sivashinsky, periodic 1D
// ---------------------------------------------------------------------------

struct KsParams {
    double length = 22.0;
    double mu = 0.0;           // amplitude of the cos(4*pi*x/L) inhomogeneity
    double dt = 0.05;          // control interval
    int substeps = 1;
    int n_points = 64;
};

/// Fourier pseudo-spectral KS solver with ETDRK4 time stepping and 3/2-rule
/// dealiasing of the quadratic term.
class KsEnv final : public PdeEnv {
public:
    explicit KsEnv(const KsParams& p);

    const Grid& grid() const override { return grid_; }
    int components() const override { return 1; }
    double control_dt() const override { return params_.dt; }
    const KsParams& params() const { return params_; }

    /// Smooth random field: modes 1..8, mean-free, unit rms.
    Field initial_condition(std::uint64_t seed) const override;

    Field step(const Field& state, const Field& control, long step_index = -1) const override;

private:
    KsParams params_;
    Grid grid_;
    Fft1d fft_;
    Fft1d fft_pad_;
    int n_pad_;
    // per-mode ETDRK4 coefficients for the substep size
    std::vector<double> lin_;                    // k^2 - k^4
    std::vector<double> wavenum_;
    std::vector<double> e_full_, e_half_;
    std::vector<double> q_, f1_, f2_, f3_;
};

// ---------------------------------------------------------------------------
// Keller-Segel chemotaxis, 1D Neumann
// ---------------------------------------------------------------------------

struct KellerSegelParams {
    double length = 10.0;
    double diffusion = 1.0;    // cell diffusion D
    double chi = 5.6;          // chemotactic coefficient
    double growth = 1.0;       // logistic growth rate q
    double dt = 0.05;
    int substeps = 10;
    int n_points = 200;
};

/// Two-component finite-difference solver, conservative fluxes with zero-flux
/// Neumann closure. Diffusion is implicit (backward Euler), chemotaxis and
/// reaction terms explicit.
class KellerSegelEnv final : public PdeEnv {
public:
    explicit KellerSegelEnv(const KellerSegelParams& p);

    const Grid& grid() const override { return grid_; }
    int components() const override { return 2; }
    int control_component() const override { return 1; }  // control enters the z-equation
    double control_dt() const override { return params_.dt; }
    const KellerSegelParams& params() const { return params_; }

    /// y = 1 + 0.1 * smooth noise, z = y.
    Field initial_condition(std::uint64_t seed) const override;

    Field step(const Field& state, const Field& control, long step_index = -1) const override;

    long negative_density_warnings() const { return negative_density_warnings_; }

private:
    KellerSegelParams params_;
    Grid grid_;
    mutable long negative_density_warnings_ = 0;
};

// ---------------------------------------------------------------------------
// 2D vorticity transport (decaying isotropic turbulence)
// ---------------------------------------------------------------------------

struct Vorticity2dParams {
    int n_grid = 128;          // per-axis resolution, power of two
    double reynolds = 100.0;
    double dt = 0.01;
    int substeps = 2;
    double ic_peak_wavenumber = 8.0;   // spectral peak of the initial condition
};

/// Pseudo-spectral streamfunction-vorticity solver on [0, 2*pi)^2 with 2/3-rule
/// dealiasing, RK4 and integrating-factor treatment of viscosity.
class Vorticity2dEnv final : public PdeEnv {
public:
    explicit Vorticity2dEnv(const Vorticity2dParams& p);

    const Grid& grid() const override { return grid_; }
    int components() const override { return 1; }
    double control_dt() const override { return params_.dt; }
    const Vorticity2dParams& params() const { return params_; }

    /// Random solenoidal field with a smooth isotropic spectrum, scaled so the
    /// measured Reynolds number equals params().reynolds.
    Field initial_condition(std::uint64_t seed) const override;

    Field step(const Field& state, const Field& control, long step_index = -1) const override;

    /// Velocity field (2 components) recovered from a vorticity field.
    Field velocity(const Field& vorticity) const;

    /// rms velocity y* and length scale l* = sqrt(2*<y^2>/<w^2>) of a state.
    void measure_scales(const Field& vorticity, double& y_star, double& l_star) const;

private:
    Vorticity2dParams params_;
    Grid grid_;
    Fft2d fft_;
    std::vector<double> kx_, ky_;       // wavenumbers of the r2c layout
    std::vector<double> ksq_;
    std::vector<double> dealias_;       // 2/3-rule mask
    std::vector<double> e_half_;        // exp(-nu k^2 h/2) for the substep

    void nonlinear_rhs(const std::vector<std::complex<double>>& what,
                       const std::vector<std::complex<double>>& fhat,
                       std::vector<std::complex<double>>& out) const;
};

} // namespace pdecrl
