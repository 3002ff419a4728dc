#pragma once

#include "pdecrl/config.hpp"
#include "pdecrl/ddpg.hpp"
#include "pdecrl/kernels.hpp"

#include <functional>
#include <iosfwd>
#include <optional>

namespace pdecrl {

/// Raised when a policy checkpoint is incompatible with the target geometry.
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// A validated experiment: environment instance plus sensing/actuation
/// operators derived from one config.
struct Runtime {
    ExperimentConfig cfg;
    std::unique_ptr<PdeEnv> env;
    SensorOps sensors;
    ActuatorOps actuators;

    explicit Runtime(ExperimentConfig config);

    int view_len() const;          // per-agent state vector length
    int global_state_len() const;  // concatenated observation length
    double t0() const { return cfg.warmup_time; }
};

struct StepRecord {
    int step = 0;
    double t = 0.0;
    double r_global = 0.0;
    double r_local_mean = 0.0;
    double action_rms = 0.0;
    double mse_to_ref = 0.0;
};

struct EpisodeLog {
    std::vector<StepRecord> steps;
    bool blew_up = false;
    long blowup_step = -1;
    Field final_state;
    std::vector<std::pair<double, Field>> snapshots;

    /// Mean tracking error over the last `fraction` of recorded steps.
    double tail_mse(double fraction = 0.1) const;
};

struct OppositionParams {
    double gain = 1.0;
};

enum class EpisodeMode { Train, Eval };

struct EpisodeOptions {
    EpisodeMode mode = EpisodeMode::Eval;
    std::uint64_t ic_seed = 0;
    Rng* noise_rng = nullptr;       // required in train mode
    Rng* sample_rng = nullptr;      // required in train mode
    ReplayBuffer* buffer = nullptr; // required in train mode
    bool global_agent = false;      // one agent over the full observation
    const OppositionParams* opposition = nullptr;
    int snapshot_every = 0;
    std::vector<UpdateDiag>* diags = nullptr;
    std::size_t warm_fill = 1000;
    double terminal_penalty = 1e3;
};

/// One episode: warm-up under zero control, then per control step
/// sense -> local views -> act -> actuate -> PDE step -> rewards, and in
/// train mode M transitions pushed plus one gradient update.
/// A null agent acts as the zero policy.
EpisodeLog run_episode(const Runtime& rt, DdpgAgent* agent, const EpisodeOptions& opt);

struct TrainResult {
    std::unique_ptr<DdpgAgent> agent;   // best-by-eval checkpoint
    int episodes_run = 0;
    double best_eval_mse = 0.0;
    double wall_clock_s = 0.0;
    bool early_stopped = false;
};

/// Fresh agent for the config geometry (or the global baseline layout).
DdpgAgent make_agent(const Runtime& rt, bool global_agent = false);

/// Episode loop over fresh initial conditions with periodic evaluation,
/// best-checkpoint tracking and optional early stop / wall-clock budget.
/// Learning-curve rows go to `curve_csv` when given.
TrainResult train(const Runtime& rt, std::ostream* curve_csv = nullptr,
                  bool global_agent = false,
                  std::optional<double> wall_clock_budget_s = std::nullopt);

/// Evaluate a trained policy on a (possibly different) domain. Geometry
/// incompatibilities raise GeometryError with both geometries printed.
EpisodeLog transfer(const DdpgAgent& policy, const Runtime& target, std::uint64_t ic_seed,
                    int snapshot_every = 0);

void write_curve_header(std::ostream& os);
void append_curve_rows(std::ostream& os, int episode, const EpisodeLog& log);

} // namespace pdecrl
