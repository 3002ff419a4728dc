#include "pdecrl.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ConfigDeleter {
    void operator()(pdecrl_config* c) const { pdecrl_config_free(c); }
};
using ConfigPtr = std::unique_ptr<pdecrl_config, ConfigDeleter>;

ConfigPtr load_config(const std::string& config, long long seed,
                      const std::vector<std::string>& sets) {
    ConfigPtr cfg(pdecrl_config_load(config.c_str()));
    if (!cfg) {
        std::fprintf(stderr, "error: %s\n", pdecrl_last_error());
        return nullptr;
    }
    if (seed >= 0 &&
        pdecrl_config_override(cfg.get(), "training.seed", std::to_string(seed).c_str()) !=
            PDECRL_OK) {
        std::fprintf(stderr, "error: %s\n", pdecrl_last_error());
        return nullptr;
    }
    for (const std::string& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects section.key=value, got '%s'\n",
                         kv.c_str());
            return nullptr;
        }
        if (pdecrl_config_override(cfg.get(), kv.substr(0, eq).c_str(),
                                   kv.substr(eq + 1).c_str()) != PDECRL_OK) {
            std::fprintf(stderr, "error: %s\n", pdecrl_last_error());
            return nullptr;
        }
    }
    return cfg;
}

int report(int rc) {
    if (rc != PDECRL_OK) std::fprintf(stderr, "error: %s\n", pdecrl_last_error());
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed PDE control experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(pdecrl_version()));

    std::string config, out = "run", policy, kind = "opposition";
    long long seed = -1;
    bool global_agent = false;
    std::vector<std::string> sets;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config, "config file path or preset name");
        if (needs_config) c->required();
        sub->add_option("--seed", seed, "override the training seed");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--set", sets, "override section.key=value (repeatable)");
    };

    CLI::App* train = app.add_subcommand("train", "train an agent");
    add_common(train, true);
    train->add_flag("--global", global_agent, "single global agent instead of the shared one");

    CLI::App* eval = app.add_subcommand("eval", "evaluate a saved policy");
    add_common(eval, true);
    eval->add_option("--policy", policy, "policy checkpoint path")->required();

    CLI::App* transfer = app.add_subcommand("transfer", "evaluate a policy on a new domain");
    add_common(transfer, true);
    transfer->add_option("--policy", policy, "policy checkpoint path")->required();

    CLI::App* baseline = app.add_subcommand("baseline", "reference controllers");
    add_common(baseline, true);
    baseline->add_option("--kind", kind, "opposition | global");

    CLI::App* check = app.add_subcommand("check", "run the property suite");

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) {
        std::vector<char> buf(1 << 16);
        int rc = pdecrl_check(buf.data(), buf.size());
        std::fputs(buf.data(), stdout);
        return report(rc);
    }

    ConfigPtr cfg = load_config(config, seed, sets);
    if (!cfg) return PDECRL_ERROR;

    if (train->parsed())
        return report(pdecrl_train(cfg.get(), out.c_str(), global_agent ? 1 : 0));
    if (eval->parsed()) return report(pdecrl_eval(cfg.get(), policy.c_str(), out.c_str()));
    if (transfer->parsed())
        return report(pdecrl_transfer(cfg.get(), policy.c_str(), out.c_str()));
    if (baseline->parsed())
        return report(pdecrl_baseline(cfg.get(), kind.c_str(), out.c_str()));
    return PDECRL_ERROR;
}
