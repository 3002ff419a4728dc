#include "pdecrl/envs.hpp"
#include "pdecrl/rng.hpp"

#include <numbers>
#include <sstream>

namespace pdecrl {

namespace {
using cplx = std::complex<double>;
}

Vorticity2dEnv::Vorticity2dEnv(const Vorticity2dParams& p)
    : params_(p),
      grid_(Grid::make_2d(2.0 * std::numbers::pi, p.n_grid)),
      fft_(p.n_grid) {
    if (p.reynolds <= 0.0) throw std::invalid_argument("Vorticity2dParams: Re must be positive");
    if (p.dt <= 0.0 || p.substeps < 1)
        throw std::invalid_argument("Vorticity2dParams: dt > 0 and substeps >= 1 required");

    const int n = p.n_grid;
    const int nc = fft_.spectrum_cols();
    const double h = p.dt / p.substeps;
    const double kmax_dealiased = (2.0 / 3.0) * (n / 2);
    if (h > 2.8 / (2.0 * kmax_dealiased)) {
        std::ostringstream os;
        os << "Vorticity2dParams: substep " << h << " exceeds the advective stability bound "
           << 2.8 / (2.0 * kmax_dealiased) << "; increase substeps";
        throw std::invalid_argument(os.str());
    }

    kx_.resize(fft_.spectrum_size());
    ky_.resize(fft_.spectrum_size());
    ksq_.resize(fft_.spectrum_size());
    dealias_.resize(fft_.spectrum_size());
    e_half_.resize(fft_.spectrum_size());
    const double nu = 1.0 / p.reynolds;
    const double kcut = (2.0 / 3.0) * (n / 2);
    for (int i = 0; i < n; ++i) {
        double kx = (i <= n / 2) ? i : i - n;
        for (int j = 0; j < nc; ++j) {
            std::size_t s = static_cast<std::size_t>(i) * nc + j;
            double ky = j;
            kx_[s] = kx;
            ky_[s] = ky;
            ksq_[s] = kx * kx + ky * ky;
            dealias_[s] = (std::abs(kx) < kcut && ky < kcut) ? 1.0 : 0.0;
            e_half_[s] = std::exp(-nu * ksq_[s] * h / 2.0);
        }
    }
}

void Vorticity2dEnv::nonlinear_rhs(const std::vector<cplx>& what,
                                   const std::vector<cplx>& fhat,
                                   std::vector<cplx>& out) const {
    const std::size_t ns = fft_.spectrum_size();
    const int n = params_.n_grid;
    static thread_local std::vector<cplx> uh, vh, wxh, wyh;
    static thread_local std::vector<double> u, v, wx, wy, adv;
    uh.resize(ns);
    vh.resize(ns);
    wxh.resize(ns);
    wyh.resize(ns);
    u.resize(static_cast<std::size_t>(n) * n);
    v.resize(u.size());
    wx.resize(u.size());
    wy.resize(u.size());
    adv.resize(u.size());

    for (std::size_t s = 0; s < ns; ++s) {
        cplx wm = what[s] * dealias_[s];
        cplx psi = ksq_[s] > 0.0 ? wm / ksq_[s] : cplx(0.0);
        uh[s] = cplx(0.0, ky_[s]) * psi;    // u = d(psi)/dy
        vh[s] = cplx(0.0, -kx_[s]) * psi;   // v = -d(psi)/dx
        wxh[s] = cplx(0.0, kx_[s]) * wm;
        wyh[s] = cplx(0.0, ky_[s]) * wm;
    }
    fft_.inverse(uh.data(), u.data());
    fft_.inverse(vh.data(), v.data());
    fft_.inverse(wxh.data(), wx.data());
    fft_.inverse(wyh.data(), wy.data());
    for (std::size_t i = 0; i < u.size(); ++i) adv[i] = u[i] * wx[i] + v[i] * wy[i];
    fft_.forward(adv.data(), uh.data());
    out.resize(ns);
    for (std::size_t s = 0; s < ns; ++s) out[s] = -uh[s] * dealias_[s] + fhat[s];
}

Field Vorticity2dEnv::initial_condition(std::uint64_t seed) const {
    const int n = params_.n_grid;
    const std::size_t ns = fft_.spectrum_size();
    Rng rng = make_rng(seed, "vort-ic");
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> noise(static_cast<std::size_t>(n) * n);
    for (double& x : noise) x = normal(rng);
    std::vector<cplx> what(ns);
    fft_.forward(noise.data(), what.data());

    const double k0 = params_.ic_peak_wavenumber;
    for (std::size_t s = 0; s < ns; ++s) {
        double k = std::sqrt(ksq_[s]);
        double shape = k * std::exp(-0.5 * (k / k0) * (k / k0));
        what[s] *= shape * dealias_[s];
    }
    Field out(grid_, 1);
    fft_.inverse(what.data(), out.component(0));

    // scale so the measured Reynolds number y* l* / nu equals params.Re,
    // i.e. y* l* = 1 (l* is scale invariant, y* scales linearly)
    double y_star, l_star;
    measure_scales(out, y_star, l_star);
    double scale = 1.0 / (y_star * l_star);
    for (double& x : out.data) x *= scale;
    return out;
}

Field Vorticity2dEnv::velocity(const Field& vorticity) const {
    const std::size_t ns = fft_.spectrum_size();
    std::vector<cplx> what(ns), uh(ns), vh(ns);
    fft_.forward(vorticity.component(0), what.data());
    for (std::size_t s = 0; s < ns; ++s) {
        cplx psi = ksq_[s] > 0.0 ? what[s] / ksq_[s] : cplx(0.0);
        uh[s] = cplx(0.0, ky_[s]) * psi;
        vh[s] = cplx(0.0, -kx_[s]) * psi;
    }
    Field vel(grid_, 2);
    fft_.inverse(uh.data(), vel.component(0));
    fft_.inverse(vh.data(), vel.component(1));
    return vel;
}

void Vorticity2dEnv::measure_scales(const Field& vorticity, double& y_star,
                                    double& l_star) const {
    Field vel = velocity(vorticity);
    double u2 = vel.mean_sq_dev(0, 0.0) + vel.mean_sq_dev(1, 0.0);
    double w2 = vorticity.mean_sq_dev(0, 0.0);
    y_star = std::sqrt(u2);
    l_star = std::sqrt(2.0 * u2 / w2);
}

Field Vorticity2dEnv::step(const Field& state, const Field& control, long step_index) const {
    if (!(state.grid == grid_) || !(control.grid == grid_))
        throw std::invalid_argument("Vorticity2dEnv::step: grid mismatch");
    const std::size_t ns = fft_.spectrum_size();
    const double h = params_.dt / params_.substeps;

    std::vector<cplx> what(ns), fhat(ns), a(ns), b(ns), c(ns), d(ns), tmp(ns);
    fft_.forward(state.component(0), what.data());
    fft_.forward(control.component(0), fhat.data());
    for (std::size_t s = 0; s < ns; ++s) fhat[s] *= dealias_[s];

    for (int sub = 0; sub < params_.substeps; ++sub) {
        nonlinear_rhs(what, fhat, a);
        for (std::size_t s = 0; s < ns; ++s) {
            a[s] *= h;
            tmp[s] = e_half_[s] * (what[s] + 0.5 * a[s]);
        }
        nonlinear_rhs(tmp, fhat, b);
        for (std::size_t s = 0; s < ns; ++s) {
            b[s] *= h;
            tmp[s] = e_half_[s] * what[s] + 0.5 * b[s];
        }
        nonlinear_rhs(tmp, fhat, c);
        for (std::size_t s = 0; s < ns; ++s) {
            c[s] *= h;
            tmp[s] = e_half_[s] * (e_half_[s] * what[s] + c[s]);
        }
        nonlinear_rhs(tmp, fhat, d);
        for (std::size_t s = 0; s < ns; ++s) {
            d[s] *= h;
            double e2 = e_half_[s] * e_half_[s];
            what[s] = e2 * what[s] +
                      (e2 * a[s] + 2.0 * e_half_[s] * (b[s] + c[s]) + d[s]) / 6.0;
        }
    }

    Field out(grid_, 1);
    fft_.inverse(what.data(), out.component(0));
    if (!out.all_finite() || out.max_abs() > kBlowUpThreshold) {
        std::ostringstream os;
        os << "vorticity blow-up at control step " << step_index
           << " (max |w| = " << out.max_abs() << ")";
        throw BlowUpError(os.str());
    }
    return out;
}

} // namespace pdecrl
