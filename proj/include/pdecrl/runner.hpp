#pragma once

#include "pdecrl/config.hpp"

#include <string>

namespace pdecrl {

/// Each job creates `out_dir`, writes a manifest before any computation, and
/// leaves CSV / policy / snapshot artifacts behind. Errors are thrown.

/// Train an agent; writes curve.csv, best.policy, summary.txt.
void run_train_job(const ExperimentConfig& cfg, const std::string& out_dir,
                   bool global_agent = false);

/// Evaluate a saved policy on the config's domain; writes eval.csv, optional
/// snapshots, summary.txt. Geometry mismatches raise GeometryError.
void run_eval_job(const ExperimentConfig& cfg, const std::string& policy_path,
                  const std::string& out_dir);

/// Same evaluation path, named for cross-domain use; writes transfer.csv.
void run_transfer_job(const ExperimentConfig& cfg, const std::string& policy_path,
                      const std::string& out_dir);

/// kind "opposition": gain sweep (or the configured gain) plus a best-gain
/// episode. kind "global": convolutional training followed by the global
/// single-agent baseline at the configured wall-clock budget factor, with a
/// final eval-reward comparison.
void run_baseline_job(const ExperimentConfig& cfg, const std::string& kind,
                      const std::string& out_dir);

/// Mean per-step global reward of a policy over the config's eval episodes.
double mean_eval_reward(const ExperimentConfig& cfg, const class DdpgAgent& agent,
                        bool global_agent);

} // namespace pdecrl
