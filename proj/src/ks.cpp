#include "pdecrl/envs.hpp"
#include "pdecrl/rng.hpp"

#include <complex>
#include <numbers>
#include <sstream>

namespace pdecrl {

namespace {

using cplx = std::complex<double>;

// Mean over a 32-point circular contour around z; stable evaluation of the
// ETDRK4 phi-function combinations near z = 0 (Kassam & Trefethen style).
template <typename F>
double contour_mean(double z, F f) {
    constexpr int m = 32;
    cplx sum = 0.0;
    for (int j = 0; j < m; ++j) {
        double theta = std::numbers::pi * (j + 0.5) / m;
        cplx zj = z + std::polar(1.0, theta);
        sum += f(zj);
    }
    // contour points come in conjugate pairs; the mean is real
    return sum.real() / m;
}

} // namespace

KsEnv::KsEnv(const KsParams& p)
    : params_(p),
      grid_(Grid::make_1d(p.length, p.n_points, /*periodic=*/true)),
      fft_(p.n_points),
      fft_pad_(3 * p.n_points / 2),
      n_pad_(3 * p.n_points / 2) {
    if (p.mu < 0.0) throw std::invalid_argument("KsParams: mu must be >= 0");
    if (p.dt <= 0.0 || p.substeps < 1)
        throw std::invalid_argument("KsParams: dt > 0 and substeps >= 1 required");
    if (p.n_points % 2 != 0) throw std::invalid_argument("KsParams: n_points must be even");

    const int nh = fft_.spectrum_size();
    const double h = p.dt / p.substeps;
    const double kmax = std::numbers::pi * p.n_points / p.length;
    // nonlinear (advective) stability of the RK stages, |y| estimated as 4
    if (h > 2.8 / (4.0 * kmax)) {
        std::ostringstream os;
        os << "KsParams: substep " << h << " exceeds the advective stability bound "
           << 2.8 / (4.0 * kmax) << "; increase substeps";
        throw std::invalid_argument(os.str());
    }

    wavenum_.resize(nh);
    lin_.resize(nh);
    e_full_.resize(nh);
    e_half_.resize(nh);
    q_.resize(nh);
    f1_.resize(nh);
    f2_.resize(nh);
    f3_.resize(nh);
    for (int m = 0; m < nh; ++m) {
        double k = 2.0 * std::numbers::pi * m / p.length;
        wavenum_[m] = k;
        double L = k * k - k * k * k * k;
        lin_[m] = L;
        double z = h * L;
        e_full_[m] = std::exp(z);
        e_half_[m] = std::exp(0.5 * z);
        // q = h/2 * phi1(z/2), used at the half steps
        q_[m] = h / 2.0 * contour_mean(z / 2.0, [](cplx w) { return (std::exp(w) - 1.0) / w; });
        f1_[m] = h * contour_mean(z, [](cplx w) {
            return (-4.0 - w + std::exp(w) * (4.0 - 3.0 * w + w * w)) / (w * w * w);
        });
        f2_[m] = h * contour_mean(z, [](cplx w) {
            return (2.0 + w + std::exp(w) * (-2.0 + w)) / (w * w * w);
        });
        f3_[m] = h * contour_mean(z, [](cplx w) {
            return (-4.0 - 3.0 * w - w * w + std::exp(w) * (4.0 - w)) / (w * w * w);
        });
    }
}

Field KsEnv::initial_condition(std::uint64_t seed) const {
    const int n = params_.n_points;
    const int nh = fft_.spectrum_size();
    Rng rng = make_rng(seed, "ks-ic");
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<cplx> spec(nh, 0.0);
    constexpr int kCutoffMode = 8;
    for (int m = 1; m <= kCutoffMode && m < nh; ++m) {
        double a = normal(rng);
        double b = normal(rng);
        // r2c convention: y = (1/n) sum_m spec_m e^{ikx} (+ conj), so scale by n/2
        spec[m] = cplx(a, b) * (0.5 * n);
    }
    Field out(grid_, 1);
    fft_.inverse(spec.data(), out.component(0));

    // normalize to unit rms; mean is zero by construction (mode 0 empty)
    double ms = out.mean_sq_dev(0, 0.0);
    double scale = ms > 0.0 ? 1.0 / std::sqrt(ms) : 1.0;
    for (double& v : out.data) v *= scale;
    return out;
}

Field KsEnv::step(const Field& state, const Field& control, long step_index) const {
    if (!(state.grid == grid_) || !(control.grid == grid_))
        throw std::invalid_argument("KsEnv::step: grid mismatch");
    const int n = params_.n_points;
    const int nh = fft_.spectrum_size();
    const int nph = fft_pad_.spectrum_size();

    // constant forcing over the interval: control field plus inhomogeneity
    std::vector<double> forcing(n);
    for (int i = 0; i < n; ++i) {
        double x = grid_.x(i);
        forcing[i] = control.at(0, i) +
                     params_.mu * std::cos(4.0 * std::numbers::pi * x / params_.length);
    }
    std::vector<cplx> ghat(nh);
    fft_.forward(forcing.data(), ghat.data());

    std::vector<cplx> v(nh), nv(nh), na(nh), nb(nh), nc(nh), a(nh), b(nh), c(nh);
    fft_.forward(state.component(0), v.data());

    std::vector<cplx> pad(nph);
    std::vector<double> phys(n_pad_), sq(n_pad_);
    const double up = static_cast<double>(n_pad_) / n;

    // N(v) = -0.5 i k F[y^2] + ghat, with the square dealiased by 3/2 padding
    auto nonlinear = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        std::fill(pad.begin(), pad.end(), cplx(0.0));
        for (int m = 0; m < nh; ++m) pad[m] = in[m];
        fft_pad_.inverse(pad.data(), phys.data());
        for (int i = 0; i < n_pad_; ++i) {
            double y = phys[i] * up;
            sq[i] = y * y;
        }
        fft_pad_.forward(sq.data(), pad.data());
        for (int m = 0; m < nh; ++m) {
            cplx s = pad[m] * (1.0 / up);
            out[m] = cplx(0.0, -0.5 * wavenum_[m]) * s + ghat[m];
        }
        if (n % 2 == 0) out[nh - 1] = ghat[nh - 1];  // drop Nyquist derivative
    };

    for (int s = 0; s < params_.substeps; ++s) {
        nonlinear(v, nv);
        for (int m = 0; m < nh; ++m) a[m] = e_half_[m] * v[m] + q_[m] * nv[m];
        nonlinear(a, na);
        for (int m = 0; m < nh; ++m) b[m] = e_half_[m] * v[m] + q_[m] * na[m];
        nonlinear(b, nb);
        for (int m = 0; m < nh; ++m) c[m] = e_half_[m] * a[m] + q_[m] * (2.0 * nb[m] - nv[m]);
        nonlinear(c, nc);
        for (int m = 0; m < nh; ++m)
            v[m] = e_full_[m] * v[m] + f1_[m] * nv[m] + 2.0 * f2_[m] * (na[m] + nb[m]) +
                   f3_[m] * nc[m];
    }

    Field out(grid_, 1);
    fft_.inverse(v.data(), out.component(0));
    if (!out.all_finite() || out.max_abs() > kBlowUpThreshold) {
        std::ostringstream os;
        os << "KS blow-up at control step " << step_index << " (max |y| = " << out.max_abs()
           << ")";
        throw BlowUpError(os.str());
    }
    return out;
}

} // namespace pdecrl
