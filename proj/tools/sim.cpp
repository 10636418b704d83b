// command-line front end; everything physics-related goes through the C API

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdsim.h"

#ifndef QDSIM_PRESET_DIR
#define QDSIM_PRESET_DIR "presets"
#endif

namespace {

std::string preset_dir() {
    if (const char* env = std::getenv("QDSIM_PRESET_DIR")) return env;
    return QDSIM_PRESET_DIR;
}

bool is_bare_name(const std::string& s) {
    return s.find('/') == std::string::npos && s.find('\\') == std::string::npos &&
           s.find(".toml") == std::string::npos;
}

std::string resolve_config(const std::string& arg) {
    if (!is_bare_name(arg)) return arg;
    return (std::filesystem::path(preset_dir()) / (arg + ".toml")).string();
}

int list_presets() {
    const std::string dir = preset_dir();
    std::error_code ec;
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.path().extension() == ".toml")
            names.push_back(entry.path().stem().string());
    }
    if (ec) {
        std::cerr << "error: cannot read preset directory " << dir << "\n";
        return 2;
    }
    std::sort(names.begin(), names.end());
    for (const auto& name : names) {
        qdsim_config* cfg =
            qdsim_config_load((std::filesystem::path(dir) / (name + ".toml")).string().c_str());
        if (cfg) {
            std::cout << name << "  (" << qdsim_config_experiment(cfg) << ")\n";
            qdsim_config_free(cfg);
        } else {
            std::cout << name << "  (invalid: " << qdsim_last_error() << ")\n";
        }
    }
    return 0;
}

int run_one(const std::string& config_arg, bool has_seed, std::uint64_t seed,
            const std::string& out_dir, int threads) {
    const std::string path = resolve_config(config_arg);
    qdsim_config* cfg = qdsim_config_load(path.c_str());
    if (!cfg) {
        std::cerr << "error: " << qdsim_last_error() << "\n";
        return 2;
    }
    if (has_seed) qdsim_config_set_seed(cfg, seed);
    if (!out_dir.empty()) qdsim_config_set_out_dir(cfg, out_dir.c_str());
    if (threads > 0 && qdsim_config_set_threads(cfg, threads) != 0) {
        std::cerr << "error: " << qdsim_last_error() << "\n";
        qdsim_config_free(cfg);
        return 2;
    }

    std::cout << "experiment: " << qdsim_config_experiment(cfg) << "\n";
    qdsim_result* res = qdsim_run(cfg);
    if (!res) {
        std::cerr << "error: " << qdsim_last_error() << "\n";
        qdsim_config_free(cfg);
        return 2;
    }

    const std::string summary = qdsim_result_summary(res);
    if (!summary.empty()) std::cout << summary;
    for (size_t i = 0; i < qdsim_result_file_count(res); ++i)
        std::cout << "wrote " << qdsim_result_file(res, i) << "\n";

    const int code = qdsim_result_exit_code(res);
    if (code == 3) std::cerr << "warning: a fit failed to converge\n";
    qdsim_result_free(res);
    qdsim_config_free(cfg);
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qubit-bath pulse sequence simulator"};
    app.require_subcommand(1);

    std::string config_arg;
    std::uint64_t seed = 0;
    std::string out_dir;
    int threads = 0;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_arg,
                    "config file path, or a preset name from `presets list`")
        ->required();
    CLI::Option* seed_opt =
        run->add_option("--seed", seed, "override the random seed");
    run->add_option("--out", out_dir, "override the output directory");
    run->add_option("--threads", threads, "worker thread count")
        ->check(CLI::Range(1, 256));

    CLI::App* presets = app.add_subcommand("presets", "preset management");
    presets->add_subcommand("list", "list available presets");
    presets->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed())
        return run_one(config_arg, seed_opt->count() > 0, seed, out_dir, threads);
    return list_presets();
}
