#include "pdecrl.h"

#include "pdecrl/config.hpp"
#include "pdecrl/io.hpp"
#include "pdecrl/orchestrator.hpp"
#include "pdecrl/runner.hpp"
#include "pdecrl/selfcheck.hpp"

#include <cstring>
#include <string>

struct pdecrl_config {
    pdecrl::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return PDECRL_OK;
    } catch (const pdecrl::GeometryError& e) {
        return fail(PDECRL_GEOMETRY_MISMATCH, e.what());
    } catch (const std::exception& e) {
        return fail(PDECRL_ERROR, e.what());
    } catch (...) {
        return fail(PDECRL_ERROR, "unknown error");
    }
}

} // namespace

extern "C" {

const char* pdecrl_version(void) { return pdecrl::library_version(); }

const char* pdecrl_last_error(void) { return g_last_error.c_str(); }

pdecrl_config* pdecrl_config_load(const char* path_or_preset) {
    if (!path_or_preset) {
        fail(PDECRL_BAD_ARGUMENT, "path_or_preset is NULL");
        return nullptr;
    }
    pdecrl_config* out = nullptr;
    guarded([&] { out = new pdecrl_config{pdecrl::resolve_config(path_or_preset)}; });
    return out;
}

int pdecrl_config_override(pdecrl_config* cfg, const char* dotted_key, const char* value) {
    if (!cfg || !dotted_key || !value) return fail(PDECRL_BAD_ARGUMENT, "NULL argument");
    return guarded([&] {
        cfg->cfg = pdecrl::apply_overrides(std::move(cfg->cfg), {{dotted_key, value}});
    });
}

long pdecrl_config_echo(const pdecrl_config* cfg, char* buf, size_t len) {
    if (!cfg) {
        fail(PDECRL_BAD_ARGUMENT, "cfg is NULL");
        return -PDECRL_BAD_ARGUMENT;
    }
    std::string text = cfg->cfg.echo();
    if (buf && len > 0) {
        size_t n = std::min(len - 1, text.size());
        std::memcpy(buf, text.data(), n);
        buf[n] = '\0';
    }
    return static_cast<long>(text.size());
}

void pdecrl_config_free(pdecrl_config* cfg) { delete cfg; }

int pdecrl_train(const pdecrl_config* cfg, const char* out_dir, int global_agent) {
    if (!cfg || !out_dir) return fail(PDECRL_BAD_ARGUMENT, "NULL argument");
    return guarded([&] { pdecrl::run_train_job(cfg->cfg, out_dir, global_agent != 0); });
}

int pdecrl_eval(const pdecrl_config* cfg, const char* policy_path, const char* out_dir) {
    if (!cfg || !policy_path || !out_dir) return fail(PDECRL_BAD_ARGUMENT, "NULL argument");
    return guarded([&] { pdecrl::run_eval_job(cfg->cfg, policy_path, out_dir); });
}

int pdecrl_transfer(const pdecrl_config* cfg, const char* policy_path, const char* out_dir) {
    if (!cfg || !policy_path || !out_dir) return fail(PDECRL_BAD_ARGUMENT, "NULL argument");
    return guarded([&] { pdecrl::run_transfer_job(cfg->cfg, policy_path, out_dir); });
}

int pdecrl_baseline(const pdecrl_config* cfg, const char* kind, const char* out_dir) {
    if (!cfg || !kind || !out_dir) return fail(PDECRL_BAD_ARGUMENT, "NULL argument");
    return guarded([&] { pdecrl::run_baseline_job(cfg->cfg, kind, out_dir); });
}

int pdecrl_check(char* buf, size_t len) {
    bool ok = false;
    std::string report;
    int rc = guarded([&] {
        std::vector<pdecrl::CheckResult> results = pdecrl::run_selfcheck();
        report = pdecrl::format_report(results);
        if (buf && len > 0) {
            size_t n = std::min(len - 1, report.size());
            std::memcpy(buf, report.data(), n);
            buf[n] = '\0';
        }
        ok = pdecrl::all_passed(results);
    });
    if (rc != PDECRL_OK) return rc;
    if (!ok) return fail(PDECRL_ERROR, "property suite failed:\n" + report);
    return PDECRL_OK;
}

} // extern "C"
