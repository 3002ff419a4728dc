#include <doctest.h>

#include "pdecrl/envs.hpp"

#include <cmath>

using namespace pdecrl;

namespace {

Vorticity2dParams small_params() {
    Vorticity2dParams p;
    p.n_grid = 64;
    p.reynolds = 100.0;
    p.dt = 0.01;
    p.substeps = 2;
    return p;
}

double enstrophy(const Field& w) { return w.mean_sq_dev(0, 0.0); }

} // namespace

TEST_CASE("cellular vortex array decays at the viscous rate") {
    Vorticity2dParams p = small_params();
    Vorticity2dEnv env(p);
    Field w(env.grid(), 1);
    for (int i = 0; i < p.n_grid; ++i)
        for (int j = 0; j < p.n_grid; ++j)
            w.at(0, i, j) = std::cos(env.grid().x(i)) * std::cos(env.grid().y_coord(j));
    Field control(env.grid(), 1);
    for (int s = 0; s < 100; ++s) w = env.step(w, control);
    double decay = std::exp(-2.0 * 1.0 / p.reynolds);
    double err = 0.0;
    for (int i = 0; i < p.n_grid; ++i)
        for (int j = 0; j < p.n_grid; ++j)
            err = std::max(err, std::abs(w.at(0, i, j) -
                                         decay * std::cos(env.grid().x(i)) *
                                             std::cos(env.grid().y_coord(j))));
    CHECK(err < 1e-3);
}

TEST_CASE("velocity recovery matches the analytic streamfunction") {
    Vorticity2dParams p = small_params();
    Vorticity2dEnv env(p);
    Field w(env.grid(), 1);
    for (int i = 0; i < p.n_grid; ++i)
        for (int j = 0; j < p.n_grid; ++j)
            w.at(0, i, j) = std::cos(env.grid().x(i)) * std::cos(env.grid().y_coord(j));
    Field vel = env.velocity(w);
    // psi = w / 2, u = psi_y, v = -psi_x
    for (int i = 0; i < p.n_grid; i += 7)
        for (int j = 0; j < p.n_grid; j += 7) {
            double x = env.grid().x(i), y = env.grid().y_coord(j);
            CHECK(vel.at(0, i, j) ==
                  doctest::Approx(-0.5 * std::cos(x) * std::sin(y)).epsilon(1e-10));
            CHECK(vel.at(1, i, j) ==
                  doctest::Approx(0.5 * std::sin(x) * std::cos(y)).epsilon(1e-10));
        }
}

TEST_CASE("rest state stays at rest") {
    Vorticity2dParams p = small_params();
    Vorticity2dEnv env(p);
    Field w(env.grid(), 1);
    Field control(env.grid(), 1);
    for (int s = 0; s < 10; ++s) w = env.step(w, control);
    CHECK(w.max_abs() == 0.0);
}

TEST_CASE("uncontrolled enstrophy decays monotonically") {
    Vorticity2dParams p = small_params();
    Vorticity2dEnv env(p);
    Field w = env.initial_condition(9);
    Field control(env.grid(), 1);
    double prev = enstrophy(w);
    for (int s = 0; s < 50; ++s) {
        w = env.step(w, control);
        double cur = enstrophy(w);
        CHECK(cur < prev * (1.0 + 1e-12));
        prev = cur;
    }
}

TEST_CASE("initial condition is scaled to the requested Reynolds number") {
    Vorticity2dParams p = small_params();
    Vorticity2dEnv env(p);
    Field w = env.initial_condition(21);
    double y_star = 0.0, l_star = 0.0;
    env.measure_scales(w, y_star, l_star);
    // Re_measured = y* l* / nu with nu = 1/Re, so y* l* must be 1
    CHECK(y_star * l_star == doctest::Approx(1.0).epsilon(1e-12));
    Field w2 = env.initial_condition(21);
    for (std::size_t i = 0; i < w.data.size(); ++i) CHECK(w.data[i] == w2.data[i]);
    Field w3 = env.initial_condition(22);
    bool differs = false;
    for (std::size_t i = 0; i < w.data.size(); ++i)
        if (w.data[i] != w3.data[i]) differs = true;
    CHECK(differs);
}

TEST_CASE("forcing spins up flow from rest") {
    Vorticity2dParams p = small_params();
    Vorticity2dEnv env(p);
    Field w(env.grid(), 1);
    Field control(env.grid(), 1);
    for (int i = 0; i < p.n_grid; ++i)
        for (int j = 0; j < p.n_grid; ++j)
            control.at(0, i, j) = std::sin(2.0 * env.grid().x(i));
    w = env.step(w, control);
    CHECK(w.max_abs() > 1e-4);
}
