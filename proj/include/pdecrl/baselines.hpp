#pragma once

#include "pdecrl/orchestrator.hpp"

namespace pdecrl {

/// Stationary feedback: action_j = -gain * observation at the co-located
/// sensor (component 0), clamped to the actuator bound.
std::vector<double> opposition_act(std::span<const double> observations, int n_components,
                                   double target, const OppositionParams& params,
                                   const ActuatorOps& actuators);

struct SweepPoint {
    double gain = 0.0;
    double tail_mse = 0.0;
    bool blew_up = false;
};

/// Evaluate the opposition controller for each gain on one initial condition.
std::vector<SweepPoint> sweep_opposition(const Runtime& rt, std::span<const double> gains,
                                         std::uint64_t ic_seed);

/// Gain with the lowest tail tracking error (blow-ups excluded).
double best_opposition_gain(const std::vector<SweepPoint>& sweep);

/// Single DDPG agent over the concatenated observation / action spaces.
TrainResult train_global(const Runtime& rt, std::ostream* curve_csv = nullptr,
                         std::optional<double> wall_clock_budget_s = std::nullopt);

} // namespace pdecrl
