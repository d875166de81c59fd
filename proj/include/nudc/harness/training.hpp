#ifndef NUDC_HARNESS_TRAINING_HPP
#define NUDC_HARNESS_TRAINING_HPP

#include <filesystem>
#include <vector>

#include "nudc/harness/run_config.hpp"
#include "nudc/metrics/report.hpp"
#include "nudc/model/config.hpp"

namespace nudc::harness {

struct TrainResult {
    std::filesystem::path latest_checkpoint;
    std::filesystem::path best_checkpoint;
    std::filesystem::path loss_log;
    double final_train_loss = 0.0;
    double best_val_psnr = 0.0;
};

/// Full training run per the config: per-epoch shuffled batches, one
/// checkpoint per epoch (latest + best by validation PSNR over the test
/// split), CSV loss log (epoch, mean train loss, val PSNR). Deterministic
/// mode runs single-threaded; a NaN loss aborts after writing
/// ckpt_diagnostic.nudc. Passing resume_from continues an interrupted run
/// from that checkpoint, appending to its loss log.
TrainResult run_training(const RunConfig& cfg,
                         const std::filesystem::path& resume_from = {});

/// Evaluates a checkpoint on the manifest's test split: per test pair the
/// input is padded, swept, cropped, and scored (PSNR/SSIM) alongside the
/// raw input's score. Per-tag means are written as a CSV report and
/// returned. train_count < 0 uses the checkpoint's embedded value.
std::vector<metrics::MetricRow> evaluate_model(const std::filesystem::path& checkpoint_path,
                                               const std::filesystem::path& manifest_path,
                                               int train_count,
                                               const std::filesystem::path& out_csv);

/// Trains and evaluates every (levels, fusion mode) cell with per-cell
/// derived seeds; N = 1 cells are mode-degenerate and share one training
/// run. A failing cell is recorded as a NaN row and the grid continues.
std::vector<metrics::MetricRow> run_ablation(const RunConfig& base,
                                             const std::vector<int>& levels_grid,
                                             const std::vector<model::FusionMode>& modes,
                                             const std::filesystem::path& out_csv);

} // namespace nudc::harness

#endif // NUDC_HARNESS_TRAINING_HPP
