#ifndef NUDC_HARNESS_RUN_CONFIG_HPP
#define NUDC_HARNESS_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "nudc/model/config.hpp"

namespace nudc::harness {

/// Everything a training run needs. Defaults are the full-scale protocol
/// (lr 0.01, beta1 0.9, batch 8, 80 epochs); desk-scale runs override via
/// config file or flags.
struct RunConfig {
    model::NestedConfig model;
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int batch_size = 8;
    int epochs = 80;
    std::uint64_t seed = 1;
    int train_count = 675;
    std::string manifest_path;
    std::string out_dir;
    bool deterministic = false;

    void validate() const;
};

/// Sectioned key=value text. Sections: [model], [train], [data]. '#' and
/// ';' start comments. Unknown keys are configuration errors.
RunConfig parse_run_config_text(const std::string& text,
                                std::map<std::string, std::string>* meta = nullptr);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical serialization (fixed key order); meta lands in a [meta]
/// section so checkpoints can carry bookkeeping like the best score.
std::string serialize_run_config(const RunConfig& cfg,
                                 const std::map<std::string, std::string>& meta = {});

} // namespace nudc::harness

#endif // NUDC_HARNESS_RUN_CONFIG_HPP
