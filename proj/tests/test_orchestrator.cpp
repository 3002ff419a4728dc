#include <doctest.h>

#include "pdecrl/baselines.hpp"
#include "pdecrl/io.hpp"
#include "pdecrl/orchestrator.hpp"

#include <cmath>
#include <sstream>

using namespace pdecrl;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig c = preset_config("ks-L22");
    c.warmup_time = 1.0;
    c.episodes = 2;
    c.episode_steps = 10;
    c.eval_every = 1;
    c.eval_episodes = 1;
    c.warm_fill = 16;
    c.hyper.batch_size = 8;
    c.hyper.buffer_capacity = 500;
    c.stop_mse = 0.0;
    c.seed = 3;
    return c;
}

} // namespace

TEST_CASE("a null policy reproduces the autonomous trajectory bit-exactly") {
    ExperimentConfig c = tiny_config();
    Runtime rt(c);
    EpisodeOptions opt;
    opt.ic_seed = 42;
    EpisodeLog log = run_episode(rt, nullptr, opt);

    Field manual = rt.env->initial_condition(42);
    Field zero(rt.env->grid(), 1);
    int total = c.warmup_steps() + c.episode_steps;
    for (int k = 0; k < total; ++k) manual = rt.env->step(manual, zero);
    REQUIRE(log.final_state.data.size() == manual.data.size());
    for (std::size_t i = 0; i < manual.data.size(); ++i)
        CHECK(log.final_state.data[i] == manual.data[i]);
    CHECK(static_cast<int>(log.steps.size()) == c.episode_steps);
}

TEST_CASE("training pushes one transition per sensor per step") {
    ExperimentConfig c = tiny_config();
    Runtime rt(c);
    DdpgAgent agent = make_agent(rt, false);
    ReplayBuffer buffer(c.hyper.buffer_capacity);
    Rng noise = make_rng(1, "n"), sample = make_rng(1, "s");
    EpisodeOptions opt;
    opt.mode = EpisodeMode::Train;
    opt.ic_seed = 1;
    opt.noise_rng = &noise;
    opt.sample_rng = &sample;
    opt.buffer = &buffer;
    opt.warm_fill = 1 << 30;
    run_episode(rt, &agent, opt);
    CHECK(buffer.size() ==
          static_cast<std::size_t>(rt.sensors.count()) * c.episode_steps);
}

TEST_CASE("a single global agent pushes one transition per step") {
    ExperimentConfig c = tiny_config();
    Runtime rt(c);
    DdpgAgent agent = make_agent(rt, true);
    CHECK(agent.state_dim() == rt.global_state_len());
    CHECK(agent.action_dim() == rt.actuators.count());
    ReplayBuffer buffer(c.hyper.buffer_capacity);
    Rng noise = make_rng(1, "n"), sample = make_rng(1, "s");
    EpisodeOptions opt;
    opt.mode = EpisodeMode::Train;
    opt.ic_seed = 1;
    opt.noise_rng = &noise;
    opt.sample_rng = &sample;
    opt.buffer = &buffer;
    opt.global_agent = true;
    opt.warm_fill = 1 << 30;
    run_episode(rt, &agent, opt);
    CHECK(buffer.size() == static_cast<std::size_t>(c.episode_steps));
}

TEST_CASE("zero training episodes return the freshly initialized agent") {
    ExperimentConfig c = tiny_config();
    c.episodes = 0;
    Runtime rt(c);
    TrainResult res = train(rt);
    DdpgAgent fresh = make_agent(rt, false);
    CHECK(res.agent->actor().params == fresh.actor().params);
    CHECK(res.episodes_run == 0);
}

TEST_CASE("the learning curve has one row per control step") {
    ExperimentConfig c = tiny_config();
    Runtime rt(c);
    std::ostringstream curve;
    train(rt, &curve);
    std::istringstream is(curve.str());
    std::string line;
    int rows = -1;   // header
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == c.episodes * c.episode_steps);
    CHECK(curve.str().rfind("episode,step,t,", 0) == 0);
}

TEST_CASE("training is reproducible bit for bit") {
    ExperimentConfig c = tiny_config();
    auto run = [&] {
        Runtime rt(c);
        std::ostringstream curve;
        TrainResult r = train(rt, &curve);
        return std::make_pair(curve.str(), r.agent->actor().params);
    };
    auto a = run();
    auto b = run();
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
}

TEST_CASE("transfer refuses mismatched geometry and names the difference") {
    ExperimentConfig src = tiny_config();
    Runtime rt_src(src);
    DdpgAgent agent = make_agent(rt_src, false);

    ExperimentConfig dst = src;
    dst.sensors.count_x = 11;   // L/M changes from 2.75 to 2.0
    Runtime rt_dst(dst);
    CHECK_THROWS_AS(transfer(agent, rt_dst, 1), GeometryError);

    ExperimentConfig bound = src;
    bound.actuators.u_max = 3.0;
    Runtime rt_bound(bound);
    CHECK_THROWS_AS(transfer(agent, rt_bound, 1), GeometryError);
}

TEST_CASE("identity transfer reproduces the eval episode bit-exactly") {
    ExperimentConfig c = tiny_config();
    Runtime rt(c);
    DdpgAgent agent = make_agent(rt, false);
    EpisodeOptions opt;
    opt.ic_seed = 5;
    EpisodeLog direct = run_episode(rt, &agent, opt);
    EpisodeLog via = transfer(agent, rt, 5);
    REQUIRE(direct.steps.size() == via.steps.size());
    for (std::size_t i = 0; i < direct.steps.size(); ++i) {
        CHECK(direct.steps[i].r_global == via.steps[i].r_global);
        CHECK(direct.steps[i].mse_to_ref == via.steps[i].mse_to_ref);
    }
    for (std::size_t i = 0; i < direct.final_state.data.size(); ++i)
        CHECK(direct.final_state.data[i] == via.final_state.data[i]);
}

TEST_CASE("scale transfer accepts a preserved sensor density") {
    ExperimentConfig src = tiny_config();
    src.ks.length = 11.0;
    src.ks.n_points = 32;
    src.sensors.count_x = 4;
    Runtime rt_src(src);
    DdpgAgent agent = make_agent(rt_src, false);

    ExperimentConfig dst = src;
    dst.ks.length = 22.0;
    dst.ks.n_points = 64;
    dst.sensors.count_x = 8;   // same L/M
    Runtime rt_dst(dst);
    EpisodeLog log = transfer(agent, rt_dst, 2);
    CHECK(static_cast<int>(log.steps.size()) == dst.episode_steps);
}

TEST_CASE("opposition control is stationary and memoryless") {
    ExperimentConfig c = tiny_config();
    Runtime rt(c);
    Field y = rt.env->initial_condition(3);
    std::vector<double> obs = rt.sensors.sense(y);
    OppositionParams p{0.8};
    std::vector<double> a1 = opposition_act(obs, 1, 0.0, p, rt.actuators);
    std::vector<double> a2 = opposition_act(obs, 1, 0.0, p, rt.actuators);
    CHECK(a1 == a2);
    for (int j = 0; j < rt.actuators.count(); ++j)
        CHECK(a1[j] == doctest::Approx(std::clamp(-0.8 * obs[j], -1.0, 1.0)).epsilon(1e-15));

    std::vector<double> zero_obs(obs.size(), 0.0);
    for (double a : opposition_act(zero_obs, 1, 0.0, p, rt.actuators)) CHECK(a == 0.0);
    OppositionParams zero_gain{0.0};
    for (double a : opposition_act(obs, 1, 0.0, zero_gain, rt.actuators)) CHECK(a == 0.0);
}

TEST_CASE("field snapshots round-trip through the text format") {
    Grid g = Grid::make_1d(5.0, 32, true);
    Field f(g, 1);
    for (int i = 0; i < g.nx; ++i) f.at(0, i) = std::sin(0.7 * i) * 1e-3;
    std::stringstream ss;
    write_field_snapshot(ss, f, 12.5);
    double t = 0.0;
    Field back = read_field_snapshot(ss, &t);
    CHECK(t == 12.5);
    CHECK(back.grid == g);
    for (int i = 0; i < g.nx; ++i)
        CHECK(back.at(0, i) == doctest::Approx(f.at(0, i)).epsilon(1e-15));
}

TEST_CASE("episode snapshots are taken on the requested cadence") {
    ExperimentConfig c = tiny_config();
    Runtime rt(c);
    EpisodeOptions opt;
    opt.ic_seed = 4;
    opt.snapshot_every = 5;
    EpisodeLog log = run_episode(rt, nullptr, opt);
    CHECK(log.snapshots.size() == 2);   // steps 5 and 10
    CHECK(log.snapshots[0].first == doctest::Approx(c.warmup_time + 5 * c.env_dt()));
}
