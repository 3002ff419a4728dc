#pragma once

#include <complex>
#include <vector>

namespace pdecrl {

/// Real-to-complex FFT pair for a fixed 1D size. Inverse is normalized.
class Fft1d {
public:
    explicit Fft1d(int n);
    ~Fft1d();
    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;

    int size() const { return n_; }
    int spectrum_size() const { return n_ / 2 + 1; }

    void forward(const double* in, std::complex<double>* out) const;
    void inverse(const std::complex<double>* in, double* out) const;

private:
    int n_;
    void* plan_fwd_;
    void* plan_inv_;
    double* real_buf_;
    void* cplx_buf_;
};

/// Real-to-complex FFT pair for a fixed n x n 2D size (row-major, the second
/// axis is halved in the spectrum). Inverse is normalized.
class Fft2d {
public:
    explicit Fft2d(int n);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    int size() const { return n_; }
    int spectrum_cols() const { return n_ / 2 + 1; }
    std::size_t spectrum_size() const { return static_cast<std::size_t>(n_) * spectrum_cols(); }

    void forward(const double* in, std::complex<double>* out) const;
    void inverse(const std::complex<double>* in, double* out) const;

private:
    int n_;
    void* plan_fwd_;
    void* plan_inv_;
    double* real_buf_;
    void* cplx_buf_;
};

} // namespace pdecrl
