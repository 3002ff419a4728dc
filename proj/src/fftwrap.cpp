#include "pdecrl/fftwrap.hpp"

#include <fftw3.h>

#include <cstring>

namespace pdecrl {

Fft1d::Fft1d(int n) : n_(n) {
    real_buf_ = fftw_alloc_real(n);
    cplx_buf_ = fftw_alloc_complex(n / 2 + 1);
    plan_fwd_ = fftw_plan_dft_r2c_1d(n, real_buf_, static_cast<fftw_complex*>(cplx_buf_),
                                     FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_1d(n, static_cast<fftw_complex*>(cplx_buf_), real_buf_,
                                     FFTW_ESTIMATE);
}

Fft1d::~Fft1d() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(real_buf_);
    fftw_free(cplx_buf_);
}

void Fft1d::forward(const double* in, std::complex<double>* out) const {
    std::memcpy(real_buf_, in, sizeof(double) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out, cplx_buf_, sizeof(std::complex<double>) * spectrum_size());
}

void Fft1d::inverse(const std::complex<double>* in, double* out) const {
    std::memcpy(cplx_buf_, in, sizeof(std::complex<double>) * spectrum_size());
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    const double scale = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[i] = real_buf_[i] * scale;
}

Fft2d::Fft2d(int n) : n_(n) {
    real_buf_ = fftw_alloc_real(static_cast<std::size_t>(n) * n);
    cplx_buf_ = fftw_alloc_complex(static_cast<std::size_t>(n) * (n / 2 + 1));
    plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, real_buf_, static_cast<fftw_complex*>(cplx_buf_),
                                     FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_2d(n, n, static_cast<fftw_complex*>(cplx_buf_), real_buf_,
                                     FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(real_buf_);
    fftw_free(cplx_buf_);
}

void Fft2d::forward(const double* in, std::complex<double>* out) const {
    std::memcpy(real_buf_, in, sizeof(double) * n_ * n_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out, cplx_buf_, sizeof(std::complex<double>) * spectrum_size());
}

void Fft2d::inverse(const std::complex<double>* in, double* out) const {
    std::memcpy(cplx_buf_, in, sizeof(std::complex<double>) * spectrum_size());
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    const double scale = 1.0 / (static_cast<double>(n_) * n_);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_) * n_; ++i)
        out[i] = real_buf_[i] * scale;
}

} // namespace pdecrl
