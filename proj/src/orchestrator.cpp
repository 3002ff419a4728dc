#include "pdecrl/orchestrator.hpp"

#include "pdecrl/baselines.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace pdecrl {

Runtime::Runtime(ExperimentConfig config)
    : cfg(std::move(config)),
      env(cfg.make_env()),
      sensors(cfg.sensors, env->grid()),
      actuators(cfg.actuators, cfg.sensors, env->grid()) {}

int Runtime::view_len() const {
    return cfg.env_components() * cfg.sensors.view_rows() * (1 + cfg.delays);
}

int Runtime::global_state_len() const {
    return cfg.env_components() * sensors.count() * (1 + cfg.delays);
}

double EpisodeLog::tail_mse(double fraction) const {
    if (steps.empty()) return std::numeric_limits<double>::infinity();
    std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(steps.size() * fraction));
    double acc = 0.0;
    for (std::size_t i = steps.size() - n; i < steps.size(); ++i) acc += steps[i].mse_to_ref;
    return acc / n;
}

namespace {

double tracking_mse(const Field& f, const RewardSpec& spec) {
    double acc = 0.0;
    for (int c = 0; c < f.components; ++c)
        acc += spec.comp_weight[c] * f.mean_sq_dev(c, spec.target[c]);
    return acc;
}

std::vector<double> global_state(const std::vector<std::vector<double>>& obs_seq,
                                 std::size_t pos, int delays, int stride) {
    std::vector<double> s;
    for (int d = 0; d <= delays; ++d) {
        const std::vector<double>& frame = obs_seq[pos - static_cast<std::size_t>(d) * stride];
        s.insert(s.end(), frame.begin(), frame.end());
    }
    return s;
}

} // namespace

EpisodeLog run_episode(const Runtime& rt, DdpgAgent* agent, const EpisodeOptions& opt) {
    const ExperimentConfig& cfg = rt.cfg;
    const int m = rt.sensors.count();
    const int p_act = rt.actuators.count();
    const int nc = cfg.env_components();
    const int stride = cfg.delay_stride;
    const int keep = cfg.delays * stride;
    const bool train = opt.mode == EpisodeMode::Train;
    if (train && (!opt.noise_rng || !opt.sample_rng || !opt.buffer || !agent))
        throw std::invalid_argument("run_episode: train mode needs agent, rngs and buffer");

    EpisodeLog log;
    Field state = rt.env->initial_condition(opt.ic_seed);
    Field zero_control(rt.env->grid(), 1);

    std::vector<std::vector<double>> obs_seq;
    const int wsteps = cfg.warmup_steps();
    if (wsteps < keep)
        for (int i = 0; i < keep - wsteps; ++i) obs_seq.push_back(rt.sensors.sense(state));

    // warm-up: autonomous evolution, zero control, no transitions
    for (int w = 0; w < wsteps; ++w) {
        if (wsteps - w <= keep) obs_seq.push_back(rt.sensors.sense(state));
        try {
            state = rt.env->step(state, zero_control, w - wsteps);
        } catch (const BlowUpError&) {
            log.blew_up = true;
            log.blowup_step = w - wsteps;
            log.final_state = state;
            return log;
        }
    }

    auto delayed_frames = [&](std::size_t pos) {
        std::vector<std::vector<double>> frames;
        for (int d = 1; d <= cfg.delays; ++d)
            frames.push_back(obs_seq[pos - static_cast<std::size_t>(d) * stride]);
        return frames;
    };

    std::vector<double> cur_obs = rt.sensors.sense(state);
    std::vector<double> applied(p_act, 0.0);
    Rng dummy_rng(0);
    Rng& noise_rng = opt.noise_rng ? *opt.noise_rng : dummy_rng;

    for (int k = 0; k < cfg.episode_steps; ++k) {
        obs_seq.push_back(cur_obs);
        const std::size_t pos = obs_seq.size() - 1;

        std::vector<double> views;
        std::vector<double> gstate;
        std::vector<double> actions(m, 0.0);
        if (opt.global_agent) {
            gstate = global_state(obs_seq, pos, cfg.delays, stride);
            std::vector<double> a =
                agent ? agent->act(gstate, train, noise_rng) : std::vector<double>(p_act, 0.0);
            applied = a;
        } else {
            views = rt.sensors.local_views(cur_obs, nc, delayed_frames(pos));
            const int vlen = rt.view_len();
            if (opt.opposition) {
                applied = opposition_act(cur_obs, nc, cfg.reward.target[0], *opt.opposition,
                                         rt.actuators);
            } else if (agent) {
                for (int i = 0; i < m; ++i) {
                    std::span<const double> vi(views.data() + static_cast<std::size_t>(i) * vlen,
                                               vlen);
                    std::vector<double> a = agent->act(vi, train, noise_rng);
                    actions[i] = a[0];
                }
                for (int j = 0; j < p_act; ++j) applied[j] = actions[rt.actuators.sensor_index(j)];
            } else {
                std::fill(applied.begin(), applied.end(), 0.0);
            }
        }

        Field control = rt.actuators.actuate(applied);
        bool blew = false;
        Field next_state;
        try {
            next_state = rt.env->step(state, control, k);
        } catch (const BlowUpError&) {
            blew = true;
        }

        if (blew) {
            log.blew_up = true;
            log.blowup_step = k;
            if (train) {
                if (opt.global_agent) {
                    opt.buffer->push({gstate, applied, -opt.terminal_penalty, gstate, true});
                } else {
                    const int vlen = rt.view_len();
                    for (int i = 0; i < m; ++i) {
                        std::vector<double> vi(views.begin() + static_cast<std::size_t>(i) * vlen,
                                               views.begin() + static_cast<std::size_t>(i + 1) * vlen);
                        opt.buffer->push({vi, {actions[i]}, -opt.terminal_penalty, vi, true});
                    }
                }
            }
            StepRecord rec;
            rec.step = k;
            rec.t = rt.t0() + (k + 1) * cfg.env_dt();
            rec.r_global = -opt.terminal_penalty;
            rec.r_local_mean = -opt.terminal_penalty;
            log.steps.push_back(rec);
            log.final_state = state;
            return log;
        }

        Rewards rew = compute_rewards(next_state, applied, control, rt.sensors, rt.actuators,
                                      cfg.reward);
        std::vector<double> next_obs = rt.sensors.sense(next_state);

        if (train) {
            if (opt.global_agent) {
                obs_seq.push_back(next_obs);
                std::vector<double> gnext = global_state(obs_seq, obs_seq.size() - 1, cfg.delays,
                                                         stride);
                obs_seq.pop_back();
                opt.buffer->push({gstate, applied, rew.global, std::move(gnext), false});
            } else {
                obs_seq.push_back(next_obs);
                std::vector<double> next_views =
                    rt.sensors.local_views(next_obs, nc, delayed_frames(obs_seq.size() - 1));
                obs_seq.pop_back();
                const int vlen = rt.view_len();
                std::vector<Transition> batch(m);
                for (int i = 0; i < m; ++i) {
                    batch[i].state.assign(views.begin() + static_cast<std::size_t>(i) * vlen,
                                          views.begin() + static_cast<std::size_t>(i + 1) * vlen);
                    batch[i].action = {actions[i]};
                    batch[i].reward = rew.local[i];
                    batch[i].next_state.assign(
                        next_views.begin() + static_cast<std::size_t>(i) * vlen,
                        next_views.begin() + static_cast<std::size_t>(i + 1) * vlen);
                    batch[i].terminal = false;
                }
                opt.buffer->push_batch(std::move(batch));
            }
            if (opt.buffer->size() >= opt.warm_fill) {
                UpdateDiag d = agent->update(opt.buffer->sample(agent->hyper().batch_size,
                                                                *opt.sample_rng));
                if (opt.diags) opt.diags->push_back(d);
            }
        }

        StepRecord rec;
        rec.step = k;
        rec.t = rt.t0() + (k + 1) * cfg.env_dt();
        rec.r_global = rew.global;
        double lsum = 0.0;
        for (double r : rew.local) lsum += r;
        rec.r_local_mean = lsum / m;
        double asum = 0.0;
        for (double a : applied) asum += a * a;
        rec.action_rms = std::sqrt(asum / p_act);
        rec.mse_to_ref = tracking_mse(next_state, cfg.reward);
        log.steps.push_back(rec);

        if (opt.snapshot_every > 0 && (k + 1) % opt.snapshot_every == 0)
            log.snapshots.emplace_back(rec.t, next_state);

        state = std::move(next_state);
        cur_obs = std::move(next_obs);
    }

    log.final_state = state;
    return log;
}

DdpgAgent make_agent(const Runtime& rt, bool global_agent) {
    Rng rng = make_rng(rt.cfg.seed, global_agent ? "global-agent-init" : "agent-init");
    DdpgAgent agent =
        global_agent
            ? DdpgAgent(rt.global_state_len(), rt.actuators.count(), rt.cfg.global_hidden,
                        rt.cfg.global_hidden, rt.actuators.u_max(), rt.cfg.hyper, rng)
            : DdpgAgent(rt.view_len(), 1, rt.cfg.actor_hidden, rt.cfg.critic_hidden,
                        rt.actuators.u_max(), rt.cfg.hyper, rng);
    agent.geometry = rt.cfg.geometry();
    return agent;
}

TrainResult train(const Runtime& rt, std::ostream* curve_csv, bool global_agent,
                  std::optional<double> wall_clock_budget_s) {
    const ExperimentConfig& cfg = rt.cfg;
    const std::uint64_t master = cfg.seed;
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    double budget = wall_clock_budget_s.value_or(
        cfg.wall_clock_budget_s > 0.0 ? cfg.wall_clock_budget_s : 0.0);

    TrainResult res;
    res.agent = std::make_unique<DdpgAgent>(make_agent(rt, global_agent));
    DdpgAgent& agent = *res.agent;
    ReplayBuffer buffer(cfg.hyper.buffer_capacity);
    if (curve_csv) write_curve_header(*curve_csv);

    std::unique_ptr<DdpgAgent> best;
    double best_mse = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const DdpgAgent& candidate) {
        double acc = 0.0;
        for (int e = 0; e < cfg.eval_episodes; ++e) {
            EpisodeOptions eopt;
            eopt.mode = EpisodeMode::Eval;
            eopt.ic_seed = derive_seed(master, "eval-ic", e);
            eopt.global_agent = global_agent;
            EpisodeLog lg = run_episode(rt, const_cast<DdpgAgent*>(&candidate), eopt);
            acc += lg.blew_up ? std::numeric_limits<double>::infinity() : lg.tail_mse();
        }
        return acc / cfg.eval_episodes;
    };

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        Rng noise = make_rng(master, "noise", ep);
        Rng sample = make_rng(master, "sample", ep);
        EpisodeOptions opt;
        opt.mode = EpisodeMode::Train;
        opt.ic_seed = derive_seed(master, "train-ic", ep);
        opt.noise_rng = &noise;
        opt.sample_rng = &sample;
        opt.buffer = &buffer;
        opt.global_agent = global_agent;
        opt.warm_fill = cfg.warm_fill;
        opt.terminal_penalty = cfg.terminal_penalty;
        EpisodeLog lg = run_episode(rt, &agent, opt);
        if (curve_csv) append_curve_rows(*curve_csv, ep, lg);
        res.episodes_run = ep + 1;

        bool last = ep + 1 == cfg.episodes;
        if ((ep + 1) % cfg.eval_every == 0 || last) {
            double mse = evaluate(agent);
            if (mse < best_mse) {
                best_mse = mse;
                best = std::make_unique<DdpgAgent>(agent);
            }
            if (cfg.stop_mse > 0.0 && mse < cfg.stop_mse) {
                res.early_stopped = true;
                break;
            }
        }
        if (budget > 0.0 && elapsed() > budget) break;
    }

    if (best) {
        res.agent = std::move(best);
        res.best_eval_mse = best_mse;
    } else {
        res.best_eval_mse = std::numeric_limits<double>::infinity();
    }
    res.wall_clock_s = elapsed();
    return res;
}

EpisodeLog transfer(const DdpgAgent& policy, const Runtime& target, std::uint64_t ic_seed,
                    int snapshot_every) {
    std::string why;
    if (!policy.geometry.compatible(target.cfg.geometry(), &why))
        throw GeometryError("transfer refused: " + why);
    if (std::abs(policy.u_max() - target.actuators.u_max()) > 0.0)
        throw GeometryError("transfer refused: action bound differs (policy u_max=" +
                            std::to_string(policy.u_max()) + ", config u_max=" +
                            std::to_string(target.actuators.u_max()) + ")");

    EpisodeOptions opt;
    opt.mode = EpisodeMode::Eval;
    opt.ic_seed = ic_seed;
    opt.snapshot_every = snapshot_every;
    return run_episode(target, const_cast<DdpgAgent*>(&policy), opt);
}

void write_curve_header(std::ostream& os) {
    os << "episode,step,t,r_global,r_local_mean,action_rms,mse_to_ref\n";
}

void append_curve_rows(std::ostream& os, int episode, const EpisodeLog& log) {
    os << std::setprecision(10);
    for (const StepRecord& r : log.steps)
        os << episode << ',' << r.step << ',' << r.t << ',' << r.r_global << ','
           << r.r_local_mean << ',' << r.action_rms << ',' << r.mse_to_ref << '\n';
    os.flush();
}

} // namespace pdecrl
