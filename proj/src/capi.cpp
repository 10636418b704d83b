#include "qdsim.h"

#include <cstring>
#include <exception>
#include <string>

#include "qdsim/config.hpp"
#include "qdsim/runner.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

} // namespace

struct qdsim_config {
    qdsim::RunConfig cfg;
    std::string experiment_name;
};

struct qdsim_result {
    qdsim::RunOutcome outcome;
};

extern "C" {

const char* qdsim_version(void) { return "1.0.0"; }

const char* qdsim_last_error(void) { return g_last_error.c_str(); }

qdsim_config* qdsim_config_load(const char* path) {
    if (!path) {
        set_error("path is null");
        return nullptr;
    }
    try {
        auto* handle = new qdsim_config;
        handle->cfg = qdsim::load_config_file(path);
        handle->experiment_name = qdsim::experiment_name(handle->cfg.experiment);
        return handle;
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

qdsim_config* qdsim_config_load_text(const char* text) {
    if (!text) {
        set_error("text is null");
        return nullptr;
    }
    try {
        auto* handle = new qdsim_config;
        handle->cfg = qdsim::load_config_text(text);
        handle->experiment_name = qdsim::experiment_name(handle->cfg.experiment);
        return handle;
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void qdsim_config_free(qdsim_config* cfg) { delete cfg; }

void qdsim_config_set_seed(qdsim_config* cfg, uint64_t seed) {
    if (cfg) cfg->cfg.seed = seed;
}

int qdsim_config_set_threads(qdsim_config* cfg, int threads) {
    if (!cfg || threads < 1 || threads > 256) {
        set_error("threads must be between 1 and 256");
        return -1;
    }
    cfg->cfg.threads = threads;
    return 0;
}

void qdsim_config_set_out_dir(qdsim_config* cfg, const char* dir) {
    if (cfg && dir) cfg->cfg.out_dir = dir;
}

const char* qdsim_config_experiment(const qdsim_config* cfg) {
    return cfg ? cfg->experiment_name.c_str() : "";
}

qdsim_result* qdsim_run(const qdsim_config* cfg) {
    if (!cfg) {
        set_error("config is null");
        return nullptr;
    }
    try {
        auto* res = new qdsim_result;
        res->outcome = qdsim::run_config(cfg->cfg);
        return res;
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void qdsim_result_free(qdsim_result* res) { delete res; }

int qdsim_result_exit_code(const qdsim_result* res) {
    return res ? res->outcome.exit_code : 2;
}

const char* qdsim_result_summary(const qdsim_result* res) {
    return res ? res->outcome.summary.c_str() : "";
}

size_t qdsim_result_file_count(const qdsim_result* res) {
    return res ? res->outcome.files.size() : 0;
}

const char* qdsim_result_file(const qdsim_result* res, size_t index) {
    if (!res || index >= res->outcome.files.size()) return nullptr;
    return res->outcome.files[index].c_str();
}

} // extern "C"
