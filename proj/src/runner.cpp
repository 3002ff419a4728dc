#include "pdecrl/runner.hpp"

#include "pdecrl/baselines.hpp"
#include "pdecrl/io.hpp"
#include "pdecrl/orchestrator.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fs = std::filesystem;

namespace pdecrl {

namespace {

std::string prep_dir(const std::string& out_dir, const ExperimentConfig& cfg,
                     const std::string& job, const std::string& extra = "") {
    fs::create_directories(out_dir);
    write_manifest((fs::path(out_dir) / "manifest.txt").string(), cfg, job, extra);
    return out_dir;
}

std::ofstream open_out(const std::string& out_dir, const std::string& name) {
    fs::path p = fs::path(out_dir) / name;
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

void write_eval_episodes(const Runtime& rt, const DdpgAgent& policy, const std::string& out_dir,
                         const std::string& csv_name) {
    std::ofstream csv = open_out(out_dir, csv_name);
    write_curve_header(csv);
    double mse_acc = 0.0;
    for (int e = 0; e < rt.cfg.eval_episodes; ++e) {
        EpisodeLog log = transfer(policy, rt, derive_seed(rt.cfg.seed, "eval-ic", e),
                                  rt.cfg.snapshot_every);
        append_curve_rows(csv, e, log);
        mse_acc += log.tail_mse();
        for (std::size_t s = 0; s < log.snapshots.size(); ++s) {
            std::ostringstream name;
            name << "snapshot_e" << e << "_" << std::setw(5) << std::setfill('0') << s << ".txt";
            write_field_snapshot_file((fs::path(out_dir) / name.str()).string(),
                                      log.snapshots[s].second, log.snapshots[s].first);
        }
    }
    std::ofstream sum = open_out(out_dir, "summary.txt");
    sum << std::setprecision(10) << "eval_episodes = " << rt.cfg.eval_episodes
        << "\nmean_tail_mse = " << mse_acc / rt.cfg.eval_episodes << "\n";
}

} // namespace

double mean_eval_reward(const ExperimentConfig& cfg, const DdpgAgent& agent, bool global_agent) {
    Runtime rt(cfg);
    double acc = 0.0;
    long n = 0;
    for (int e = 0; e < cfg.eval_episodes; ++e) {
        EpisodeOptions opt;
        opt.mode = EpisodeMode::Eval;
        opt.ic_seed = derive_seed(cfg.seed, "eval-ic", e);
        opt.global_agent = global_agent;
        EpisodeLog log = run_episode(rt, const_cast<DdpgAgent*>(&agent), opt);
        for (const StepRecord& s : log.steps) {
            acc += s.r_global;
            ++n;
        }
    }
    return n ? acc / n : 0.0;
}

void run_train_job(const ExperimentConfig& cfg, const std::string& out_dir, bool global_agent) {
    prep_dir(out_dir, cfg, global_agent ? "train-global" : "train");
    Runtime rt(cfg);
    std::ofstream curve = open_out(out_dir, "curve.csv");
    TrainResult res = train(rt, &curve, global_agent);
    res.agent->save_file((fs::path(out_dir) / "best.policy").string());
    std::ofstream sum = open_out(out_dir, "summary.txt");
    sum << std::setprecision(10) << "episodes_run = " << res.episodes_run
        << "\nbest_eval_mse = " << res.best_eval_mse << "\nwall_clock_s = " << res.wall_clock_s
        << "\nearly_stopped = " << (res.early_stopped ? "true" : "false") << "\n";
}

void run_eval_job(const ExperimentConfig& cfg, const std::string& policy_path,
                  const std::string& out_dir) {
    prep_dir(out_dir, cfg, "eval", "policy = " + policy_path + "\n");
    DdpgAgent policy = DdpgAgent::load_file(policy_path);
    Runtime rt(cfg);
    write_eval_episodes(rt, policy, out_dir, "eval.csv");
}

void run_transfer_job(const ExperimentConfig& cfg, const std::string& policy_path,
                      const std::string& out_dir) {
    prep_dir(out_dir, cfg, "transfer", "policy = " + policy_path + "\n");
    DdpgAgent policy = DdpgAgent::load_file(policy_path);
    Runtime rt(cfg);
    write_eval_episodes(rt, policy, out_dir, "transfer.csv");
}

void run_baseline_job(const ExperimentConfig& cfg, const std::string& kind,
                      const std::string& out_dir) {
    if (kind == "opposition") {
        prep_dir(out_dir, cfg, "baseline-opposition");
        Runtime rt(cfg);
        std::uint64_t ic = derive_seed(cfg.seed, "eval-ic", 0);
        std::vector<double> gains;
        if (cfg.opposition_gain > 0.0) {
            gains = {cfg.opposition_gain};
        } else {
            gains = {0.1, 0.2, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0};
        }
        std::vector<SweepPoint> sweep = sweep_opposition(rt, gains, ic);
        {
            std::ofstream os = open_out(out_dir, "sweep.csv");
            os << std::setprecision(10) << "gain,tail_mse,blew_up\n";
            for (const SweepPoint& p : sweep)
                os << p.gain << ',' << p.tail_mse << ',' << (p.blew_up ? 1 : 0) << '\n';
        }
        double gain = best_opposition_gain(sweep);
        OppositionParams params{gain};
        EpisodeOptions opt;
        opt.mode = EpisodeMode::Eval;
        opt.ic_seed = ic;
        opt.opposition = &params;
        opt.snapshot_every = cfg.snapshot_every;
        EpisodeLog log = run_episode(rt, nullptr, opt);
        std::ofstream csv = open_out(out_dir, "opposition.csv");
        csv << "# baseline = opposition, gain = " << gain << "\n";
        write_curve_header(csv);
        append_curve_rows(csv, 0, log);
        std::ofstream sum = open_out(out_dir, "summary.txt");
        sum << std::setprecision(10) << "baseline = opposition\nbest_gain = " << gain
            << "\ntail_mse = " << log.tail_mse() << "\n";
        return;
    }
    if (kind == "global") {
        prep_dir(out_dir, cfg, "baseline-global");
        Runtime rt(cfg);

        std::ofstream conv_curve = open_out(out_dir, "conv_curve.csv");
        TrainResult conv = train(rt, &conv_curve, false);
        conv.agent->save_file((fs::path(out_dir) / "conv.policy").string());

        double budget = cfg.global_budget_factor * conv.wall_clock_s;
        std::ofstream glob_curve = open_out(out_dir, "global_curve.csv");
        glob_curve << "# baseline = global\n";
        TrainResult glob = train_global(rt, &glob_curve, budget);
        glob.agent->save_file((fs::path(out_dir) / "global.policy").string());

        double conv_r = mean_eval_reward(cfg, *conv.agent, false);
        double glob_r = mean_eval_reward(cfg, *glob.agent, true);
        std::ofstream sum = open_out(out_dir, "summary.txt");
        sum << std::setprecision(10) << "baseline = global\nconv_wall_clock_s = "
            << conv.wall_clock_s << "\nglobal_wall_clock_s = " << glob.wall_clock_s
            << "\nconv_eval_reward = " << conv_r << "\nglobal_eval_reward = " << glob_r
            << "\nconv_better = " << (conv_r >= glob_r ? "true" : "false") << "\n";
        return;
    }
    throw std::invalid_argument("unknown baseline kind: " + kind +
                                " (expected opposition or global)");
}

} // namespace pdecrl
