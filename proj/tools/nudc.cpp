// Command-line surface: synthetic data generation, training, evaluation,
// the ablation grid, and triptych export.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "nudc/errors.hpp"
#include "nudc/harness/checkpoint.hpp"
#include "nudc/harness/run_config.hpp"
#include "nudc/harness/training.hpp"
#include "nudc/harness/triptych.hpp"
#include "nudc/parallel.hpp"
#include "nudc/sim/dataset.hpp"

namespace {

struct SynthArgs {
    std::string out_dir;
    int count = 20;
    int height = 96, width = 96;
    std::vector<double> z_list{10.0};
    double sigma_per_um = 0.15;
    double noise_sigma = 0.005;
    std::uint64_t seed = 1;
};

struct TrainArgs {
    std::string config_path;
    std::string resume;
    // flag overrides; only applied when set
    std::optional<std::string> manifest, out_dir, fusion, loss;
    std::optional<int> epochs, batch, levels, depth, base_channels, train_count;
    std::optional<double> lr;
    std::optional<std::uint64_t> seed;
    bool deterministic = false;
};

nudc::harness::RunConfig resolve_config(const TrainArgs& a) {
    nudc::harness::RunConfig cfg;
    if (!a.config_path.empty()) cfg = nudc::harness::load_run_config(a.config_path);
    if (a.manifest) cfg.manifest_path = *a.manifest;
    if (a.out_dir) cfg.out_dir = *a.out_dir;
    if (a.fusion) cfg.model.fusion = nudc::model::fusion_mode_from_string(*a.fusion);
    if (a.loss) cfg.model.loss = nudc::model::loss_kind_from_string(*a.loss);
    if (a.epochs) cfg.epochs = *a.epochs;
    if (a.batch) cfg.batch_size = *a.batch;
    if (a.levels) cfg.model.levels = *a.levels;
    if (a.depth) cfg.model.unet_depth = *a.depth;
    if (a.base_channels) cfg.model.base_channels = *a.base_channels;
    if (a.train_count) cfg.train_count = *a.train_count;
    if (a.lr) cfg.lr = *a.lr;
    if (a.seed) cfg.seed = *a.seed;
    if (a.deterministic) cfg.deterministic = true;
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"nested multi-level U-Net defocus deblurring"};
    app.require_subcommand(1);

    // synth ---------------------------------------------------------
    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic defocus dataset");
    synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
    synth_cmd->add_option("--count", synth.count, "number of phantoms");
    synth_cmd->add_option("--height", synth.height, "phantom height");
    synth_cmd->add_option("--width", synth.width, "phantom width");
    synth_cmd->add_option("--z", synth.z_list, "defocus distances (um)");
    synth_cmd->add_option("--sigma-per-um", synth.sigma_per_um, "PSF sigma per um");
    synth_cmd->add_option("--noise", synth.noise_sigma, "additive Gaussian noise std");
    synth_cmd->add_option("--seed", synth.seed, "master seed");

    // train ---------------------------------------------------------
    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "train a model");
    train_cmd->add_option("--config", train.config_path, "config file");
    train_cmd->add_option("--resume", train.resume, "checkpoint to resume from");
    train_cmd->add_option("--manifest", train.manifest, "dataset manifest");
    train_cmd->add_option("--out", train.out_dir, "output directory");
    train_cmd->add_option("--epochs", train.epochs, "training epochs");
    train_cmd->add_option("--batch", train.batch, "batch size");
    train_cmd->add_option("--lr", train.lr, "learning rate");
    train_cmd->add_option("--levels", train.levels, "pyramid levels N");
    train_cmd->add_option("--depth", train.depth, "U-Net depth I");
    train_cmd->add_option("--base-channels", train.base_channels, "stage-0 channels");
    train_cmd->add_option("--fusion", train.fusion, "residual|concat");
    train_cmd->add_option("--loss", train.loss, "l1|l2");
    train_cmd->add_option("--train-count", train.train_count, "records in the train split");
    train_cmd->add_option("--seed", train.seed, "seed");
    train_cmd->add_flag("--deterministic", train.deterministic,
                        "single-threaded, bitwise-reproducible run");

    // eval ----------------------------------------------------------
    std::string eval_ckpt, eval_manifest, eval_out = "report.csv";
    int eval_train_count = -1;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
    eval_cmd->add_option("--ckpt", eval_ckpt, "checkpoint path")->required();
    eval_cmd->add_option("--manifest", eval_manifest, "dataset manifest")->required();
    eval_cmd->add_option("--train-count", eval_train_count,
                         "train split size (default: from checkpoint)");
    eval_cmd->add_option("--out", eval_out, "report CSV path");

    // ablate --------------------------------------------------------
    TrainArgs ablate;
    std::vector<int> grid{1, 2, 3, 4};
    std::vector<std::string> mode_names{"residual", "concat"};
    auto* ablate_cmd = app.add_subcommand("ablate", "train/evaluate the (N, mode) grid");
    ablate_cmd->add_option("--config", ablate.config_path, "config file");
    ablate_cmd->add_option("--manifest", ablate.manifest, "dataset manifest");
    ablate_cmd->add_option("--out", ablate.out_dir, "output directory");
    ablate_cmd->add_option("--epochs", ablate.epochs, "training epochs");
    ablate_cmd->add_option("--batch", ablate.batch, "batch size");
    ablate_cmd->add_option("--lr", ablate.lr, "learning rate");
    ablate_cmd->add_option("--depth", ablate.depth, "U-Net depth I");
    ablate_cmd->add_option("--base-channels", ablate.base_channels, "stage-0 channels");
    ablate_cmd->add_option("--loss", ablate.loss, "l1|l2");
    ablate_cmd->add_option("--train-count", ablate.train_count, "records in the train split");
    ablate_cmd->add_option("--seed", ablate.seed, "master seed");
    ablate_cmd->add_option("--levels-grid", grid, "levels to sweep");
    ablate_cmd->add_option("--modes", mode_names, "fusion modes to sweep");
    ablate_cmd->add_flag("--deterministic", ablate.deterministic, "single-threaded cells");

    // triptych ------------------------------------------------------
    std::string tri_ckpt, tri_input, tri_target, tri_out = "triptych.ppm";
    auto* tri_cmd = app.add_subcommand("triptych", "export input|prediction|truth image");
    tri_cmd->add_option("--ckpt", tri_ckpt, "checkpoint path")->required();
    tri_cmd->add_option("--input", tri_input, "degraded input img16")->required();
    tri_cmd->add_option("--target", tri_target, "ground-truth img16")->required();
    tri_cmd->add_option("--out", tri_out, "output PPM path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (synth_cmd->parsed()) {
        nudc::sim::PhantomSpec phantom;
        phantom.height = synth.height;
        phantom.width = synth.width;
        nudc::sim::PSFSpec psf;
        psf.sigma_per_um = synth.sigma_per_um;
        auto manifest = nudc::sim::gen_dataset(phantom, synth.z_list, psf, synth.noise_sigma,
                                               synth.count, synth.out_dir, synth.seed);
        std::printf("wrote %zu pairs under %s\n", manifest.records.size(),
                    synth.out_dir.c_str());
    } else if (train_cmd->parsed()) {
        auto cfg = resolve_config(train);
        auto result = nudc::harness::run_training(cfg, train.resume);
        std::printf("final train loss %.6g, best val PSNR %.6g\n", result.final_train_loss,
                    result.best_val_psnr);
        std::printf("latest: %s\nbest:   %s\nlog:    %s\n",
                    result.latest_checkpoint.string().c_str(),
                    result.best_checkpoint.string().c_str(), result.loss_log.string().c_str());
    } else if (eval_cmd->parsed()) {
        auto rows = nudc::harness::evaluate_model(eval_ckpt, eval_manifest, eval_train_count,
                                                  eval_out);
        for (const auto& r : rows)
            std::printf("tag=%s model=%s psnr=%s ssim=%s\n", r.tag.c_str(), r.model.c_str(),
                        nudc::metrics::format_metric(r.psnr_db).c_str(),
                        nudc::metrics::format_metric(r.ssim).c_str());
        std::printf("report: %s\n", eval_out.c_str());
    } else if (ablate_cmd->parsed()) {
        auto cfg = resolve_config(ablate);
        std::vector<nudc::model::FusionMode> modes;
        for (const auto& name : mode_names)
            modes.push_back(nudc::model::fusion_mode_from_string(name));
        const auto out_csv = std::filesystem::path(cfg.out_dir) / "ablation.csv";
        auto rows = nudc::harness::run_ablation(cfg, grid, modes, out_csv);
        std::printf("%zu rows -> %s\n", rows.size(), out_csv.string().c_str());
    } else if (tri_cmd->parsed()) {
        nudc::harness::export_triptych(tri_ckpt, tri_input, tri_target, tri_out);
        std::printf("wrote %s\n", tri_out.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nudc::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nudc::contract_error& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return 2;
    } catch (const nudc::shape_error& e) {
        std::cerr << "shape error: " << e.what() << "\n";
        return 2;
    } catch (const nudc::format_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const nudc::io_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const nudc::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
