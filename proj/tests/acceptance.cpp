// Acceptance suite: one criterion per invocation, selected by argv[1].
// Each criterion prints a single PASS/FAIL line with its measurements.

#include "pdecrl/baselines.hpp"
#include "pdecrl/orchestrator.hpp"
#include "pdecrl/runner.hpp"
#include "pdecrl/selfcheck.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace pdecrl;
namespace fs = std::filesystem;

namespace {

const std::vector<std::uint64_t> kSeeds{101, 102, 103, 104, 105};

fs::path artifact_dir() {
    fs::path p = "acceptance_artifacts";
    fs::create_directories(p);
    return p;
}

int report(int n, bool pass, const std::string& detail) {
    std::printf("criterion %d %s: %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
    return pass ? 0 : 1;
}

// train one seed of a preset, caching the policy and measured wall clock on disk
DdpgAgent trained_policy(const std::string& preset, std::uint64_t seed, double* wall_clock_s) {
    fs::path cache = artifact_dir() / (preset + "-seed" + std::to_string(seed) + ".policy");
    fs::path wall_cache = cache;
    wall_cache += ".wall";
    if (fs::exists(cache)) {
        if (!wall_clock_s) return DdpgAgent::load_file(cache.string());
        std::ifstream in(wall_cache);
        if (in >> *wall_clock_s) return DdpgAgent::load_file(cache.string());
    }
    ExperimentConfig cfg = preset_config(preset);
    cfg.seed = seed;
    Runtime rt(cfg);
    TrainResult res = train(rt);
    res.agent->save_file(cache.string());
    std::ofstream(wall_cache) << res.wall_clock_s << "\n";
    if (wall_clock_s) *wall_clock_s = res.wall_clock_s;
    return DdpgAgent(*res.agent);
}

// tracking error of a policy at the end of an eval episode on a fresh IC
double final_mse(const ExperimentConfig& cfg, const DdpgAgent& policy, std::uint64_t seed) {
    Runtime rt(cfg);
    EpisodeLog log = transfer(policy, rt, derive_seed(seed, "acceptance-ic", 0));
    if (log.blew_up || log.steps.empty()) return std::numeric_limits<double>::infinity();
    return log.steps.back().mse_to_ref;
}

int stabilization_criterion(int n, const std::string& preset, double threshold,
                            double wall_clock_limit_s) {
    int passed = 0;
    bool clock_ok = true;
    std::ostringstream detail;
    for (std::uint64_t seed : kSeeds) {
        double wall = 0.0;
        DdpgAgent policy = trained_policy(preset, seed, &wall);
        if (wall_clock_limit_s > 0.0 && wall > wall_clock_limit_s) clock_ok = false;
        double mse = final_mse(preset_config(preset), policy, seed);
        bool ok = mse < threshold;
        passed += ok;
        detail << "seed " << seed << " mse " << mse << " wall " << wall << "s; ";
    }
    detail << passed << "/5 below " << threshold
           << (wall_clock_limit_s > 0.0 ? (clock_ok ? ", wall clock within budget"
                                                    : ", wall clock EXCEEDED")
                                        : "");
    return report(n, passed >= 4 && clock_ok, detail.str());
}

int criterion_transfer() {
    ExperimentConfig target = preset_config("ks-L500");
    target.episode_steps = 600;   // 30 time units after activation
    int passed = 0;
    std::ostringstream detail;
    for (std::uint64_t seed : kSeeds) {
        DdpgAgent policy = trained_policy("ks-L200", seed, nullptr);
        double mse = final_mse(target, policy, seed + 50);
        bool ok = mse < 1e-2;
        passed += ok;
        detail << "seed " << seed << " mse " << mse << "; ";
    }
    detail << passed << "/5 below 1e-2 on the 500-length domain";
    return report(3, passed >= 4, detail.str());
}

int criterion_robustness() {
    ExperimentConfig target = preset_config("ks-L22-mu002");
    int passed = 0;
    std::ostringstream detail;
    for (std::uint64_t seed : kSeeds) {
        DdpgAgent policy = trained_policy("ks-L22", seed, nullptr);
        double mse = final_mse(target, policy, seed + 70);
        bool ok = mse < 5e-2;
        passed += ok;
        detail << "seed " << seed << " mse " << mse << "; ";
    }
    detail << passed << "/5 below 5e-2 under the cosine inhomogeneity";
    return report(4, passed >= 4, detail.str());
}

int criterion_global_ranking() {
    int passed = 0;
    std::ostringstream detail;
    for (std::uint64_t seed : kSeeds) {
        ExperimentConfig cfg = preset_config("ks-L22");
        cfg.seed = seed;
        Runtime rt(cfg);
        TrainResult conv = train(rt);
        TrainResult glob = train_global(rt, nullptr,
                                        cfg.global_budget_factor * conv.wall_clock_s);
        double conv_r = mean_eval_reward(cfg, *conv.agent, false);
        double glob_r = mean_eval_reward(cfg, *glob.agent, true);
        bool ok = conv_r >= glob_r;
        passed += ok;
        detail << "seed " << seed << " conv " << conv_r << " vs global " << glob_r << "; ";
    }
    detail << passed << "/5 rank the shared agent at least as high at a tenfold global budget";
    return report(5, passed >= 4, detail.str());
}

int criterion_turbulence() {
    int passed = 0;
    std::ostringstream detail;
    for (std::uint64_t seed : kSeeds) {
        DdpgAgent policy = trained_policy("turbulence-16", seed, nullptr);
        ExperimentConfig cfg = preset_config("turbulence-16");
        Runtime rt(cfg);
        std::uint64_t ic = derive_seed(seed, "acceptance-ic", 0);

        EpisodeLog controlled = transfer(policy, rt, ic);
        EpisodeOptions opt;
        opt.ic_seed = ic;
        EpisodeLog free = run_episode(rt, nullptr, opt);
        double wc = controlled.blew_up ? std::numeric_limits<double>::infinity()
                                       : controlled.final_state.mean_sq_dev(0, 0.0);
        double wf = free.final_state.mean_sq_dev(0, 0.0);
        bool ok = wc <= 0.25 * wf;
        passed += ok;
        detail << "seed " << seed << " controlled " << wc << " vs free " << wf << "; ";
    }
    detail << passed << "/5 at or below a quarter of the uncontrolled enstrophy at t=5";
    return report(7, passed >= 3, detail.str());
}

int criterion_properties() {
    std::vector<CheckResult> results = run_selfcheck();
    std::string rep = format_report(results);
    std::fputs(rep.c_str(), stdout);
    int passed = 0;
    for (const CheckResult& r : results) passed += r.pass;
    std::ostringstream detail;
    detail << passed << "/" << results.size() << " property checks passed";
    return report(8, all_passed(results), detail.str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..8>\n");
        return 2;
    }
    int n = std::atoi(argv[1]);
    try {
        switch (n) {
        case 1: return stabilization_criterion(1, "ks-L22", 1e-2, 1800.0);
        case 2: return stabilization_criterion(2, "ks-L200", 1e-2, 0.0);
        case 3: return criterion_transfer();
        case 4: return criterion_robustness();
        case 5: return criterion_global_ranking();
        case 6: return stabilization_criterion(6, "keller-segel", 1e-2, 0.0);
        case 7: return criterion_turbulence();
        case 8: return criterion_properties();
        default:
            std::fprintf(stderr, "unknown criterion %d\n", n);
            return 2;
        }
    } catch (const std::exception& e) {
        return report(n, false, std::string("exception: ") + e.what());
    }
}
