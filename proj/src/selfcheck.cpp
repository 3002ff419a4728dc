#include "pdecrl/selfcheck.hpp"

#include "pdecrl/baselines.hpp"
#include "pdecrl/orchestrator.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace pdecrl {

namespace {

CheckResult check(const std::string& name, double err, double tol) {
    CheckResult r;
    r.name = name;
    r.pass = std::isfinite(err) && err <= tol;
    std::ostringstream os;
    os << "error " << err << " (tolerance " << tol << ")";
    r.detail = os.str();
    return r;
}

CheckResult check_flag(const std::string& name, bool ok, const std::string& detail) {
    return {name, ok, detail};
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

ExperimentConfig tiny_ks_config() {
    ExperimentConfig c = preset_config("ks-L22");
    c.warmup_time = 1.0;
    c.episodes = 2;
    c.episode_steps = 15;
    c.eval_every = 1;
    c.eval_episodes = 1;
    c.warm_fill = 16;
    c.hyper.batch_size = 16;
    c.hyper.buffer_capacity = 2000;
    c.stop_mse = 0.0;
    c.seed = 11;
    return c;
}

// sum of kernel-integrated observations vs the domain integral, for an
// indicator tiling of the periodic KS domain
CheckResult partition_identity() {
    ExperimentConfig c = preset_config("ks-L22");
    c.sensors.kernel.shape = KernelShape::Indicator;
    c.sensors.kernel.width = c.ks.length / c.sensors.count_x;
    c.sensors.kernel.unit_integral = false;
    Runtime rt(c);
    Field y = rt.env->initial_condition(42);
    std::vector<double> obs = rt.sensors.sense(y);
    double sum = 0.0;
    for (double o : obs) sum += o;
    double integral = y.mean(0) * c.ks.length;
    return check("partition identity", std::abs(sum - integral), 1e-10);
}

// closed loop on periodic KS: shifting the initial state by one sensor
// spacing shifts the whole controlled trajectory and leaves rewards unchanged
CheckResult equivariance_chain() {
    ExperimentConfig c = preset_config("ks-L22");
    Runtime rt(c);
    const int shift = c.ks.n_points / c.sensors.count_x;
    const int m = rt.sensors.count();

    Rng rng = make_rng(7, "equivariance-agent");
    DdpgAgent agent = make_agent(rt, false);

    Field s1 = rt.env->initial_condition(3);
    Field s2 = s1.shifted(shift);
    double err = 0.0;
    Rng dummy(0);
    for (int k = 0; k < 20; ++k) {
        auto run_one = [&](const Field& s, std::vector<double>& applied, double& r_glob) {
            std::vector<double> obs = rt.sensors.sense(s);
            std::vector<double> views = rt.sensors.local_views(obs, 1);
            const int vlen = rt.view_len();
            applied.resize(m);
            for (int i = 0; i < m; ++i) {
                std::span<const double> vi(views.data() + static_cast<std::size_t>(i) * vlen,
                                           vlen);
                applied[i] = agent.act(vi, false, dummy)[0];
            }
            Field control = rt.actuators.actuate(applied);
            Field next = rt.env->step(s, control, k);
            Rewards rew = compute_rewards(next, applied, control, rt.sensors, rt.actuators,
                                          c.reward);
            r_glob = rew.global;
            return next;
        };
        std::vector<double> a1, a2;
        double r1 = 0.0, r2 = 0.0;
        s1 = run_one(s1, a1, r1);
        s2 = run_one(s2, a2, r2);
        Field s1s = s1.shifted(shift);
        for (std::size_t i = 0; i < s1s.data.size(); ++i)
            err = std::max(err, std::abs(s1s.data[i] - s2.data[i]));
        err = std::max(err, std::abs(r1 - r2));
        // actions shift with the state: agent i sees what agent i-1 saw
        for (int i = 0; i < m; ++i)
            err = std::max(err, std::abs(a2[(i + 1) % m] - a1[i]));
    }
    (void)rng;
    return check("closed-loop translation equivariance", err, 1e-8);
}

double grad_check_arch(const std::vector<int>& sizes, Mlp::Output out, double scale,
                       std::uint64_t seed) {
    Rng rng = make_rng(seed, "gradcheck");
    Mlp net = Mlp::make(sizes, out, scale, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(net.input_size());
    for (double& v : x) v = u(rng);
    std::vector<double> target(net.output_size());
    for (double& v : target) v = u(rng);

    auto loss = [&](const Mlp& n) {
        std::vector<double> y = n.forward(x);
        double l = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) l += 0.5 * (y[i] - target[i]) * (y[i] - target[i]);
        return l;
    };
    Mlp::Trace trace;
    std::vector<double> y = net.forward(x, trace);
    std::vector<double> dout(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) dout[i] = y[i] - target[i];
    std::vector<double> grad(net.param_count(), 0.0);
    net.backward(trace, dout, grad);
    return grad_check(net, loss, grad);
}

CheckResult gradient_checks() {
    double err = 0.0;
    // the four network shapes used by the experiments, actor and critic form
    err = std::max(err, grad_check_arch({1, 6, 1}, Mlp::Output::TanhScaled, 1.0, 1));
    err = std::max(err, grad_check_arch({2, 140, 1}, Mlp::Output::Identity, 1.0, 2));
    err = std::max(err, grad_check_arch({12, 20, 20, 1}, Mlp::Output::TanhScaled, 2.0, 3));
    err = std::max(err, grad_check_arch({13, 20, 20, 1}, Mlp::Output::Identity, 1.0, 4));
    err = std::max(err, grad_check_arch({9, 4, 1}, Mlp::Output::TanhScaled, 2.0, 5));
    err = std::max(err, grad_check_arch({10, 4, 1}, Mlp::Output::Identity, 1.0, 6));
    return check("gradient checks", err, 1e-5);
}

CheckResult ks_dispersion() {
    KsParams p;
    p.length = 22.0;
    p.n_points = 64;
    p.dt = 0.05;
    KsEnv env(p);
    const double k = 2.0 * M_PI / p.length;   // first mode
    const double rate = k * k - k * k * k * k;
    const double amp0 = 1e-6;
    Field y(env.grid(), 1);
    for (int i = 0; i < p.n_points; ++i) y.at(0, i) = amp0 * std::sin(k * env.grid().x(i));
    Field control(env.grid(), 1);
    const int steps = 20;   // one time unit
    for (int s = 0; s < steps; ++s) y = env.step(y, control);
    double amp = 0.0;
    for (int i = 0; i < p.n_points; ++i) amp += y.at(0, i) * std::sin(k * env.grid().x(i));
    amp *= 2.0 / p.n_points;
    double expected = amp0 * std::exp(rate * steps * p.dt);
    return check("linear dispersion (fourth-order 1D)", std::abs(amp / expected - 1.0), 1e-3);
}

CheckResult taylor_green() {
    Vorticity2dParams p;
    p.n_grid = 64;
    p.reynolds = 100.0;
    p.dt = 0.01;
    p.substeps = 2;
    Vorticity2dEnv env(p);
    Field w(env.grid(), 1);
    for (int i = 0; i < p.n_grid; ++i)
        for (int j = 0; j < p.n_grid; ++j)
            w.at(0, i, j) = std::cos(env.grid().x(i)) * std::cos(env.grid().y_coord(j));
    Field control(env.grid(), 1);
    const int steps = 100;   // one time unit
    for (int s = 0; s < steps; ++s) w = env.step(w, control);
    const double decay = std::exp(-2.0 * steps * p.dt / p.reynolds);
    double err = 0.0;
    for (int i = 0; i < p.n_grid; ++i)
        for (int j = 0; j < p.n_grid; ++j) {
            double exact = decay * std::cos(env.grid().x(i)) * std::cos(env.grid().y_coord(j));
            err = std::max(err, std::abs(w.at(0, i, j) - exact));
        }
    return check("cellular vortex decay (2D)", err, 1e-3);
}

CheckResult chemotaxis_steady_state() {
    KellerSegelParams p;
    KellerSegelEnv env(p);
    Field s(env.grid(), 2);
    for (double& v : s.data) v = 1.0;
    Field control(env.grid(), 1);
    for (int k = 0; k < 20; ++k) s = env.step(s, control);
    double err = 0.0;
    for (double v : s.data) err = std::max(err, std::abs(v - 1.0));
    return check("uniform carrying-capacity steady state", err, 1e-12);
}

CheckResult buffer_growth() {
    ExperimentConfig c = tiny_ks_config();
    c.episode_steps = 3;
    Runtime rt(c);
    DdpgAgent agent = make_agent(rt, false);
    ReplayBuffer buffer(c.hyper.buffer_capacity);
    Rng noise = make_rng(1, "n"), sample = make_rng(1, "s");
    EpisodeOptions opt;
    opt.mode = EpisodeMode::Train;
    opt.ic_seed = 5;
    opt.noise_rng = &noise;
    opt.sample_rng = &sample;
    opt.buffer = &buffer;
    opt.warm_fill = 1 << 30;   // no updates, bookkeeping only
    run_episode(rt, &agent, opt);
    std::size_t expected = static_cast<std::size_t>(rt.sensors.count()) * c.episode_steps;
    std::ostringstream os;
    os << "buffer grew to " << buffer.size() << ", expected " << expected;
    return check_flag("replay growth equals sensor count per step", buffer.size() == expected,
                      os.str());
}

CheckResult target_copy() {
    ExperimentConfig c = tiny_ks_config();
    Runtime rt(c);
    DdpgAgent agent = make_agent(rt, false);
    agent.mutable_actor().params[0] += 0.25;
    agent.soft_update(1.0);
    bool ok = bitwise_equal(agent.actor().params, agent.target_actor().params) &&
              bitwise_equal(agent.critic().params, agent.target_critic().params);
    return check_flag("full-rate target copy", ok, ok ? "targets match bitwise" : "mismatch");
}

CheckResult checkpoint_roundtrip() {
    ExperimentConfig c = tiny_ks_config();
    Runtime rt(c);
    DdpgAgent agent = make_agent(rt, false);
    std::stringstream ss;
    agent.save(ss);
    DdpgAgent back = DdpgAgent::load(ss);
    bool ok = bitwise_equal(agent.actor().params, back.actor().params) &&
              bitwise_equal(agent.critic().params, back.critic().params) &&
              bitwise_equal(agent.target_actor().params, back.target_actor().params) &&
              bitwise_equal(agent.target_critic().params, back.target_critic().params);
    std::string why;
    ok = ok && agent.geometry.compatible(back.geometry, &why);
    return check_flag("checkpoint round-trip", ok, ok ? "bit-exact" : "mismatch: " + why);
}

CheckResult seed_determinism() {
    ExperimentConfig c = tiny_ks_config();
    auto run = [&] {
        Runtime rt(c);
        std::ostringstream curve;
        TrainResult res = train(rt, &curve, false);
        return std::make_pair(curve.str(), res.agent->actor().params);
    };
    auto [curve1, params1] = run();
    auto [curve2, params2] = run();
    bool ok = curve1 == curve2 && bitwise_equal(params1, params2);
    return check_flag("full-run seed determinism", ok,
                      ok ? "curves and parameters bit-identical" : "runs diverged");
}

} // namespace

std::vector<CheckResult> run_selfcheck() {
    return {
        partition_identity(),  equivariance_chain(), gradient_checks(),
        ks_dispersion(),       taylor_green(),       chemotaxis_steady_state(),
        buffer_growth(),       target_copy(),        checkpoint_roundtrip(),
        seed_determinism(),
    };
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (!r.pass) return false;
    return true;
}

std::string format_report(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    for (const CheckResult& r : results)
        os << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail << "\n";
    return os.str();
}

} // namespace pdecrl
