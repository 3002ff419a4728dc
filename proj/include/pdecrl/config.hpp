#pragma once

#include "pdecrl/ddpg.hpp"
#include "pdecrl/envs.hpp"
#include "pdecrl/kernels.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace pdecrl {

/// Full experiment description. Every field has a documented default and can
/// be overridden from the config file.
struct ExperimentConfig {
    std::string preset_name;

    // [env]
    std::string env_type = "ks";        // ks | keller-segel | vorticity2d
    KsParams ks;
    KellerSegelParams keller_segel;
    Vorticity2dParams vorticity;

    // [sensors]
    SensorArray sensors;
    int delays = 0;                     // extra delayed observation frames
    int delay_stride = 1;               // control steps between frames

    // [actuators]
    ActuatorArray actuators;

    // [reward]
    RewardSpec reward;

    // [agent]
    std::vector<int> actor_hidden{6};
    std::vector<int> critic_hidden{140};
    DdpgHyper hyper;

    // [training]
    int episodes = 2000;
    int episode_steps = 400;            // horizon p, control steps after warm-up
    double warmup_time = 100.0;
    std::uint64_t seed = 0;
    int eval_every = 25;
    int eval_episodes = 3;
    std::size_t warm_fill = 1000;       // transitions before the first update
    double stop_mse = 0.0;              // early stop on eval tracking error; 0 disables
    double wall_clock_budget_s = 0.0;   // 0 = unlimited
    double terminal_penalty = 1e3;

    // [baseline]
    double opposition_gain = 0.0;       // 0 = sweep
    std::vector<int> global_hidden{256, 256};
    double global_budget_factor = 10.0;

    // [output]
    int snapshot_every = 0;             // control steps between field snapshots; 0 = off

    std::unique_ptr<PdeEnv> make_env() const;
    int env_components() const;
    double env_dt() const;
    double domain_length() const;
    int warmup_steps() const;
    std::string kernel_desc() const;
    PolicyGeometry geometry() const;

    /// Construct every derived object once to surface invariant violations.
    void validate() const;

    /// Echo of the fully resolved configuration (manifest format).
    std::string echo() const;
};

/// Named presets covering the published experiment settings.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// Parse a config file. Unknown keys, type mismatches and invariant
/// violations are reported with their line number.
ExperimentConfig parse_config(const std::string& path);

/// A file path is parsed; a bare preset name is resolved.
ExperimentConfig resolve_config(const std::string& path_or_preset);

/// Apply 'section.key' = value overrides on top of a config; re-validates.
ExperimentConfig apply_overrides(ExperimentConfig base,
                                 const std::vector<std::pair<std::string, std::string>>& kv);

} // namespace pdecrl
