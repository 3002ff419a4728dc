#include <doctest.h>

#include "pdecrl/mlp.hpp"

#include <cmath>

using namespace pdecrl;

TEST_CASE("forward pass matches a hand computation") {
    Rng rng = make_rng(1, "t");
    Mlp net = Mlp::make({2, 2, 1}, Mlp::Output::Identity, 1.0, rng);
    // layer 0: weights row-major (out x in), then biases
    net.params = {1.0, -2.0,    // w00 w01
                  0.5, 0.25,    // w10 w11
                  0.1, -0.1,    // b0 b1
                  2.0, 3.0,     // output weights
                  0.5};         // output bias
    std::vector<double> x{1.0, 0.5};
    // pre0 = 1 - 1 + 0.1 = 0.1 -> relu 0.1; pre1 = 0.5 + 0.125 - 0.1 = 0.525
    // out = 2*0.1 + 3*0.525 + 0.5 = 2.275
    std::vector<double> y = net.forward(x);
    CHECK(y.size() == 1);
    CHECK(y[0] == doctest::Approx(2.275).epsilon(1e-12));
}

TEST_CASE("relu gating zeroes negative pre-activations") {
    Rng rng = make_rng(1, "t");
    Mlp net = Mlp::make({1, 1, 1}, Mlp::Output::Identity, 1.0, rng);
    net.params = {-1.0, 0.0, 5.0, 2.0};   // w, b, wout, bout
    CHECK(net.forward(std::vector<double>{3.0})[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(net.forward(std::vector<double>{-3.0})[0] == doctest::Approx(17.0).epsilon(1e-12));
}

TEST_CASE("scaled tanh output respects the bound") {
    Rng rng = make_rng(3, "t");
    Mlp net = Mlp::make({4, 8, 2}, Mlp::Output::TanhScaled, 1.5, rng);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(4);
        for (double& v : x) v = u(rng);
        for (double y : net.forward(x)) CHECK(std::abs(y) <= 1.5);
    }
}

namespace {

double arch_grad_error(const std::vector<int>& sizes, Mlp::Output out, double scale,
                       std::uint64_t seed) {
    Rng rng = make_rng(seed, "arch");
    Mlp net = Mlp::make(sizes, out, scale, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(net.input_size());
    for (double& v : x) v = u(rng);

    auto loss = [&](const Mlp& n) {
        double l = 0.0;
        for (double y : n.forward(x)) l += 0.5 * y * y;
        return l;
    };
    Mlp::Trace tr;
    std::vector<double> y = net.forward(x, tr);
    std::vector<double> grad(net.param_count(), 0.0);
    net.backward(tr, y, grad);
    return grad_check(net, loss, grad);
}

} // namespace

TEST_CASE("analytic gradients agree with finite differences") {
    CHECK(arch_grad_error({1, 6, 1}, Mlp::Output::TanhScaled, 1.0, 10) < 1e-5);
    CHECK(arch_grad_error({2, 140, 1}, Mlp::Output::Identity, 1.0, 11) < 1e-5);
    CHECK(arch_grad_error({12, 20, 20, 1}, Mlp::Output::TanhScaled, 2.0, 12) < 1e-5);
    CHECK(arch_grad_error({9, 4, 1}, Mlp::Output::TanhScaled, 2.0, 13) < 1e-5);
}

TEST_CASE("backward input gradient agrees with finite differences") {
    Rng rng = make_rng(5, "t");
    Mlp net = Mlp::make({3, 7, 2}, Mlp::Output::Identity, 1.0, rng);
    std::vector<double> x{0.4, -0.2, 0.9};
    Mlp::Trace tr;
    std::vector<double> y = net.forward(x, tr);
    std::vector<double> grad(net.param_count(), 0.0);
    std::vector<double> din = net.backward(tr, y, grad);

    auto loss_at = [&](std::vector<double> xs) {
        double l = 0.0;
        for (double v : net.forward(xs)) l += 0.5 * v * v;
        return l;
    };
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double fd = (loss_at(xp) - loss_at(xm)) / (2.0 * h);
        CHECK(din[i] == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("adam follows the bias-corrected update") {
    std::vector<double> p{1.0};
    Adam opt(0.1);
    opt.m.assign(1, 0.0);
    opt.v.assign(1, 0.0);
    double g = 0.5;
    opt.step(p, {g});
    // first step: m_hat = g, v_hat = g^2, so the step is -lr * g/|g| = -lr
    CHECK(p[0] == doctest::Approx(1.0 - 0.1 * g / (std::abs(g) + 1e-8 / 1.0)).epsilon(1e-6));

    double m = 0.9 * (0.1 * g) + 0.1 * g, v = 0.999 * (0.001 * g * g) + 0.001 * g * g;
    double mh = m / (1 - 0.9 * 0.9), vh = v / (1 - 0.999 * 0.999);
    double expect = p[0] - 0.1 * mh / (std::sqrt(vh) + 1e-8);
    opt.step(p, {g});
    CHECK(p[0] == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("initialization is seed deterministic and final layer small") {
    Rng r1 = make_rng(8, "init"), r2 = make_rng(8, "init");
    Mlp a = Mlp::make({4, 16, 2}, Mlp::Output::TanhScaled, 1.0, r1);
    Mlp b = Mlp::make({4, 16, 2}, Mlp::Output::TanhScaled, 1.0, r2);
    CHECK(a.params == b.params);
    for (std::size_t i = a.weight_offset(1); i < a.param_count(); ++i)
        CHECK(std::abs(a.params[i]) <= 3e-3);
}
