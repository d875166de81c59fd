#ifndef NUDC_HARNESS_CHECKPOINT_HPP
#define NUDC_HARNESS_CHECKPOINT_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "nudc/harness/run_config.hpp"
#include "nudc/model/nested.hpp"
#include "nudc/nn/adam.hpp"

namespace nudc::harness {

/// A checkpoint restored from disk: the embedded run config, bookkeeping
/// meta, a model rebuilt from that config with parameters loaded
/// bit-exactly, and the optimizer state when one was saved.
struct LoadedCheckpoint {
    RunConfig config;
    std::map<std::string, std::string> meta;
    int epoch = 0;
    model::NestedModel<float> model;
    std::optional<nn::AdamState<float>> adam;
};

/// Binary layout: magic "NUDC", u32le version, length-prefixed config
/// text, u32le epoch, u8 adam flag, named f32le parameter tensors, the
/// optional Adam block, and a trailing FNV-1a 64-bit content checksum.
void save_checkpoint(model::NestedModel<float>& m, const nn::AdamState<float>* adam,
                     const RunConfig& cfg, int epoch,
                     const std::map<std::string, std::string>& meta,
                     const std::filesystem::path& path);

/// Validates the checksum over the whole file before parsing anything, so
/// a truncated or corrupt file never yields a partial model. Parameter
/// names and shapes must match a freshly built model from the embedded
/// config; the first mismatch is named in the error.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

} // namespace nudc::harness

#endif // NUDC_HARNESS_CHECKPOINT_HPP
