#include "pdecrl/baselines.hpp"

#include <algorithm>
#include <limits>

namespace pdecrl {

std::vector<double> opposition_act(std::span<const double> observations, int n_components,
                                   double target, const OppositionParams& params,
                                   const ActuatorOps& actuators) {
    std::vector<double> actions(actuators.count(), 0.0);
    for (int j = 0; j < actuators.count(); ++j) {
        int si = actuators.sensor_index(j);
        double dev = observations[static_cast<std::size_t>(si) * n_components] - target;
        actions[j] = std::clamp(-params.gain * dev, -actuators.u_max(), actuators.u_max());
    }
    return actions;
}

std::vector<SweepPoint> sweep_opposition(const Runtime& rt, std::span<const double> gains,
                                         std::uint64_t ic_seed) {
    std::vector<SweepPoint> out;
    for (double g : gains) {
        OppositionParams params{g};
        EpisodeOptions opt;
        opt.mode = EpisodeMode::Eval;
        opt.ic_seed = ic_seed;
        opt.opposition = &params;
        EpisodeLog log = run_episode(rt, nullptr, opt);
        out.push_back({g, log.blew_up ? std::numeric_limits<double>::infinity() : log.tail_mse(),
                       log.blew_up});
    }
    return out;
}

double best_opposition_gain(const std::vector<SweepPoint>& sweep) {
    double best_gain = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const SweepPoint& p : sweep)
        if (!p.blew_up && p.tail_mse < best) {
            best = p.tail_mse;
            best_gain = p.gain;
        }
    return best_gain;
}

TrainResult train_global(const Runtime& rt, std::ostream* curve_csv,
                         std::optional<double> wall_clock_budget_s) {
    return train(rt, curve_csv, /*global_agent=*/true, wall_clock_budget_s);
}

} // namespace pdecrl
