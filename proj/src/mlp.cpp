#include "pdecrl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace pdecrl {

std::size_t Mlp::weight_offset(int layer) const {
    std::size_t off = 0;
    for (int l = 0; l < layer; ++l)
        off += static_cast<std::size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
    return off;
}

std::size_t Mlp::bias_offset(int layer) const {
    return weight_offset(layer) + static_cast<std::size_t>(sizes[layer + 1]) * sizes[layer];
}

Mlp Mlp::make(std::vector<int> layer_sizes, Output out, double scale, Rng& rng) {
    if (layer_sizes.size() < 2) throw std::invalid_argument("Mlp: need at least one layer");
    for (int s : layer_sizes)
        if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be positive");

    Mlp net;
    net.sizes = std::move(layer_sizes);
    net.output = out;
    net.out_scale = scale;
    std::size_t total = 0;
    for (int l = 0; l < net.layers(); ++l)
        total += static_cast<std::size_t>(net.sizes[l + 1]) * net.sizes[l] + net.sizes[l + 1];
    net.params.resize(total);

    for (int l = 0; l < net.layers(); ++l) {
        // fan-in uniform init; the final tanh layer starts near zero so initial
        // actions are small
        double bound = (l == net.layers() - 1 && out == Output::TanhScaled)
                           ? 3e-3
                           : 1.0 / std::sqrt(static_cast<double>(net.sizes[l]));
        std::uniform_real_distribution<double> dist(-bound, bound);
        std::size_t w0 = net.weight_offset(l);
        std::size_t b0 = net.bias_offset(l);
        for (std::size_t i = w0; i < b0; ++i) net.params[i] = dist(rng);
        for (int i = 0; i < net.sizes[l + 1]; ++i) net.params[b0 + i] = dist(rng);
    }
    return net;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
    Trace t;
    return forward(x, t);
}

std::vector<double> Mlp::forward(std::span<const double> x, Trace& trace) const {
    if (static_cast<int>(x.size()) != input_size())
        throw std::invalid_argument("Mlp::forward: input size mismatch");
    trace.pre.assign(layers(), {});
    trace.act.assign(layers() + 1, {});
    trace.act[0].assign(x.begin(), x.end());

    for (int l = 0; l < layers(); ++l) {
        const int rows = sizes[l + 1], cols = sizes[l];
        const double* w = params.data() + weight_offset(l);
        const double* b = params.data() + bias_offset(l);
        const std::vector<double>& in = trace.act[l];
        std::vector<double>& pre = trace.pre[l];
        pre.resize(rows);
        for (int r = 0; r < rows; ++r) {
            double acc = b[r];
            const double* wr = w + static_cast<std::size_t>(r) * cols;
            for (int c = 0; c < cols; ++c) acc += wr[c] * in[c];
            pre[r] = acc;
        }
        std::vector<double>& out = trace.act[l + 1];
        out.resize(rows);
        if (l < layers() - 1) {
            for (int r = 0; r < rows; ++r) out[r] = pre[r] > 0.0 ? pre[r] : 0.0;
        } else if (output == Output::TanhScaled) {
            for (int r = 0; r < rows; ++r) out[r] = out_scale * std::tanh(pre[r]);
        } else {
            out = pre;
        }
    }
    return trace.act.back();
}

std::vector<double> Mlp::backward(const Trace& trace, std::span<const double> dout,
                                  std::vector<double>& grad) const {
    if (grad.size() != params.size()) grad.assign(params.size(), 0.0);

    std::vector<double> delta(dout.begin(), dout.end());
    // output nonlinearity
    if (output == Output::TanhScaled) {
        const std::vector<double>& pre = trace.pre.back();
        for (std::size_t r = 0; r < delta.size(); ++r) {
            double th = std::tanh(pre[r]);
            delta[r] *= out_scale * (1.0 - th * th);
        }
    }

    for (int l = layers() - 1; l >= 0; --l) {
        const int rows = sizes[l + 1], cols = sizes[l];
        const double* w = params.data() + weight_offset(l);
        double* gw = grad.data() + weight_offset(l);
        double* gb = grad.data() + bias_offset(l);
        const std::vector<double>& in = trace.act[l];

        std::vector<double> dprev(cols, 0.0);
        for (int r = 0; r < rows; ++r) {
            double d = delta[r];
            gb[r] += d;
            const double* wr = w + static_cast<std::size_t>(r) * cols;
            double* gwr = gw + static_cast<std::size_t>(r) * cols;
            for (int c = 0; c < cols; ++c) {
                gwr[c] += d * in[c];
                dprev[c] += d * wr[c];
            }
        }
        if (l > 0) {
            const std::vector<double>& pre = trace.pre[l - 1];
            for (int c = 0; c < cols; ++c)
                if (pre[c] <= 0.0) dprev[c] = 0.0;
        }
        delta.swap(dprev);
    }
    return delta;
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
    if (m.size() != params.size()) {
        m.assign(params.size(), 0.0);
        v.assign(params.size(), 0.0);
    }
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

double grad_check(const Mlp& net, const std::function<double(const Mlp&)>& loss,
                  std::span<const double> analytic_grad, double h) {
    Mlp probe = net;
    double worst = 0.0;
    for (std::size_t i = 0; i < net.params.size(); ++i) {
        double saved = probe.params[i];
        probe.params[i] = saved + h;
        double lp = loss(probe);
        probe.params[i] = saved - h;
        double lm = loss(probe);
        probe.params[i] = saved;
        double fd = (lp - lm) / (2.0 * h);
        double an = analytic_grad[i];
        double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
        worst = std::max(worst, std::abs(fd - an) / denom);
    }
    return worst;
}

} // namespace pdecrl
