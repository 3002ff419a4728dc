#pragma once

#include "pdecrl/rng.hpp"

#include <functional>
#include <span>
#include <vector>

namespace pdecrl {

/// Small fully connected network with ReLU hidden layers. Parameters live in
/// one flat vector (per layer: row-major weights, then biases) so the
/// optimizer and finite-difference checks can treat them uniformly.
struct Mlp {
    enum class Output { Identity, TanhScaled };

    std::vector<int> sizes;     // layer widths, input first
    Output output = Output::Identity;
    double out_scale = 1.0;     // tanh output is scaled to [-out_scale, out_scale]
    std::vector<double> params;

    static Mlp make(std::vector<int> layer_sizes, Output out, double scale, Rng& rng);

    int input_size() const { return sizes.front(); }
    int output_size() const { return sizes.back(); }
    int layers() const { return static_cast<int>(sizes.size()) - 1; }
    std::size_t param_count() const { return params.size(); }

    std::size_t weight_offset(int layer) const;
    std::size_t bias_offset(int layer) const;

    std::vector<double> forward(std::span<const double> x) const;

    /// Per-layer pre-activations and activations kept for backprop.
    struct Trace {
        std::vector<std::vector<double>> pre;
        std::vector<std::vector<double>> act;   // act[0] is the input copy
    };
    std::vector<double> forward(std::span<const double> x, Trace& trace) const;

    /// Backpropagate dL/d(output); accumulates parameter gradients into `grad`
    /// (same layout as `params`) and returns dL/d(input).
    std::vector<double> backward(const Trace& trace, std::span<const double> dout,
                                 std::vector<double>& grad) const;
};

/// Adam optimizer over a flat parameter vector.
struct Adam {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long t = 0;
    std::vector<double> m, v;

    explicit Adam(double learning_rate = 1e-3) : lr(learning_rate) {}
    void step(std::vector<double>& params, const std::vector<double>& grad);
};

/// Max relative error between the analytic gradient of `loss` at `net` and a
/// central finite difference with step h.
double grad_check(const Mlp& net, const std::function<double(const Mlp&)>& loss,
                  std::span<const double> analytic_grad, double h = 1e-5);

} // namespace pdecrl
