#include <doctest.h>

#include "pdecrl/envs.hpp"

#include <cmath>

using namespace pdecrl;

namespace {

double mass(const Field& f, int c) { return f.mean(c) * f.grid.lx; }

} // namespace

TEST_CASE("uniform carrying capacity is a fixed point") {
    KellerSegelParams p;
    KellerSegelEnv env(p);
    Field s(env.grid(), 2);
    for (double& v : s.data) v = 1.0;
    Field control(env.grid(), 1);
    for (int k = 0; k < 40; ++k) s = env.step(s, control);
    for (double v : s.data) CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("cell mass changes only through the logistic source") {
    KellerSegelParams p;
    p.substeps = 1;
    p.dt = 0.005;
    KellerSegelEnv env(p);
    Field s = env.initial_condition(31);
    Field control(env.grid(), 1);
    double m0 = mass(s, 0);
    // the explicit source uses the pre-step density, so the discrete balance
    // is exact up to solver roundoff
    double source = 0.0;
    const Grid& g = env.grid();
    for (int i = 0; i < g.nx; ++i) {
        double w = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
        double y = s.at(0, i);
        source += w * g.dx() * p.growth * y * (1.0 - y);
    }
    Field next = env.step(s, control, 0);
    CHECK(mass(next, 0) - m0 == doctest::Approx(p.dt * source).epsilon(1e-6));
}

TEST_CASE("zero-flux boundaries conserve mass without growth") {
    KellerSegelParams p;
    p.growth = 0.0;
    KellerSegelEnv env(p);
    Field s = env.initial_condition(8);
    Field control(env.grid(), 1);
    double m0 = mass(s, 0);
    for (int k = 0; k < 100; ++k) s = env.step(s, control);
    CHECK(mass(s, 0) == doctest::Approx(m0).epsilon(1e-10));
}

TEST_CASE("substep granularity matches explicit restepping") {
    KellerSegelParams whole;
    whole.dt = 0.05;
    whole.substeps = 10;
    KellerSegelParams part = whole;
    part.dt = 0.005;
    part.substeps = 1;
    KellerSegelEnv env_w(whole), env_p(part);
    Field s0 = env_w.initial_condition(4);
    Field control(env_w.grid(), 1);
    for (int i = 0; i < env_w.grid().nx; ++i)
        control.at(0, i) = 0.1 * std::sin(3.0 * env_w.grid().x(i));
    Field a = env_w.step(s0, control);
    Field b = s0;
    for (int k = 0; k < 10; ++k) b = env_p.step(b, control);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        CHECK(a.data[i] == doctest::Approx(b.data[i]).epsilon(1e-13));
}

TEST_CASE("control enters the chemoattractant equation only") {
    KellerSegelParams p;
    KellerSegelEnv env(p);
    Field s(env.grid(), 2);
    for (double& v : s.data) v = 1.0;
    Field control(env.grid(), 1);
    for (int i = 0; i < env.grid().nx; ++i) control.at(0, i) = 0.5;
    CHECK(env.control_component() == 1);
    Field next = env.step(s, control);
    for (int i = 0; i < env.grid().nx; ++i) {
        CHECK(next.at(0, i) == doctest::Approx(1.0).epsilon(1e-13));   // density untouched
        CHECK(next.at(1, i) > 1.0);                                    // signal raised
    }
}

TEST_CASE("initial condition: deterministic perturbation around carrying capacity") {
    KellerSegelParams p;
    KellerSegelEnv env(p);
    Field a = env.initial_condition(2);
    Field b = env.initial_condition(2);
    for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
    CHECK(a.mean(0) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::sqrt(a.mean_sq_dev(0, a.mean(0))) == doctest::Approx(0.1).epsilon(0.05));
    for (int i = 0; i < env.grid().nx; ++i) CHECK(a.at(0, i) == a.at(1, i));
}

TEST_CASE("uncontrolled dynamics leave the uniform state and form aggregates") {
    KellerSegelParams p;
    KellerSegelEnv env(p);
    Field s = env.initial_condition(15);
    Field control(env.grid(), 1);
    for (int k = 0; k < 600; ++k) s = env.step(s, control);   // 30 time units
    CHECK(s.mean_sq_dev(0, 1.0) > 0.05);   // instability has set in
    CHECK(s.all_finite());
}
