#include "nudc/harness/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "nudc/harness/checkpoint.hpp"
#include "nudc/io/img16.hpp"
#include "nudc/io/manifest.hpp"
#include "nudc/metrics/metrics.hpp"
#include "nudc/model/train.hpp"
#include "nudc/parallel.hpp"
#include "nudc/rng.hpp"
#include "nudc/sim/dataset.hpp"

namespace nudc::harness {

namespace {

std::string format_tag(double z) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", z);
    return buf;
}

/// Pairs resolved against the manifest's directory, tagged by z.
std::vector<io::PairRecord> pairs_from_manifest(const std::filesystem::path& manifest_path) {
    auto m = sim::read_manifest(manifest_path);
    const auto base = manifest_path.parent_path();
    std::vector<io::PairRecord> records;
    records.reserve(m.records.size());
    for (const auto& r : m.records)
        records.push_back({(base / r.blurred_path).string(), (base / r.sharp_path).string(),
                           format_tag(r.z)});
    return records;
}

/// All images referenced by the split, loaded once.
class ImageCache {
public:
    const Tensor4f& get(const std::string& path) {
        auto it = cache_.find(path);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(path, io::read_img16(path)).first->second;
    }

private:
    std::map<std::string, Tensor4f> cache_;
};

Tensor4f assemble_batch(ImageCache& cache, const std::vector<io::PairRecord>& records,
                        const std::vector<std::size_t>& order, std::size_t first,
                        std::size_t count, bool target) {
    const Tensor4f& probe = cache.get(target ? records[order[first]].target_path
                                             : records[order[first]].input_path);
    Tensor4f batch(static_cast<int>(count), probe.c, probe.h, probe.w);
    for (std::size_t j = 0; j < count; ++j) {
        const auto& rec = records[order[first + j]];
        const Tensor4f& img = cache.get(target ? rec.target_path : rec.input_path);
        if (img.c != probe.c || img.h != probe.h || img.w != probe.w)
            throw contract_error("run_training: image dims differ within a batch (" +
                                 rec.input_path + ")");
        std::copy(img.data.begin(), img.data.end(),
                  batch.data.begin() + static_cast<std::ptrdiff_t>(j * img.size()));
    }
    return batch;
}

void fisher_yates(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(i) - 1));
        std::swap(idx[i - 1], idx[j]);
    }
}

double mean_val_psnr(model::NestedModel<float>& m, ImageCache& cache,
                     const std::vector<io::PairRecord>& test) {
    if (test.empty()) return std::nan("");
    double acc = 0.0;
    for (const auto& rec : test) {
        auto pred = model::predict(m, cache.get(rec.input_path));
        acc += metrics::psnr(pred, cache.get(rec.target_path), 1.0);
    }
    return acc / static_cast<double>(test.size());
}

std::string format_log_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

TrainResult run_training(const RunConfig& cfg, const std::filesystem::path& resume_from) {
    cfg.validate();
    if (cfg.manifest_path.empty()) throw config_error("run_training: manifest path not set");
    if (cfg.out_dir.empty()) throw config_error("run_training: out_dir not set");

    auto records = pairs_from_manifest(cfg.manifest_path);
    auto split = io::split_manifest(records, static_cast<std::size_t>(cfg.train_count));
    if (split.train.empty()) throw config_error("run_training: empty training split");

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.out_dir))
        throw io_error("run_training: cannot create out_dir '" + cfg.out_dir + "'");

    if (cfg.deterministic) set_compute_threads(1);

    // model + optimizer, fresh or resumed
    model::NestedModel<float> m;
    nn::AdamState<float> adam;
    int start_epoch = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    bool have_best = false;
    if (resume_from.empty()) {
        m = model::NestedModel<float>::build(cfg.model, cfg.seed);
        adam.hyper = {cfg.lr, cfg.beta1, cfg.beta2, cfg.eps};
        auto params = m.params();
        adam.init_for(params);
    } else {
        auto ckpt = load_checkpoint(resume_from);
        if (!ckpt.adam)
            throw contract_error("run_training: checkpoint '" + resume_from.string() +
                                 "' has no optimizer state to resume from");
        const auto& a = cfg.model;
        const auto& b = ckpt.config.model;
        const bool same_model = a.levels == b.levels && a.unet_depth == b.unet_depth &&
                                a.base_channels == b.base_channels &&
                                a.in_channels == b.in_channels &&
                                a.out_channels == b.out_channels && a.fusion == b.fusion &&
                                a.loss == b.loss;
        if (!same_model || cfg.seed != ckpt.config.seed)
            throw contract_error(
                "run_training: resume config (model/seed) differs from the checkpoint");
        m = std::move(ckpt.model);
        adam = std::move(*ckpt.adam);
        start_epoch = ckpt.epoch;
        if (auto it = ckpt.meta.find("best_val_psnr"); it != ckpt.meta.end()) {
            best_val = std::stod(it->second);
            have_best = true;
        }
        if (start_epoch >= cfg.epochs)
            throw config_error("run_training: checkpoint is already at epoch " +
                               std::to_string(start_epoch));
    }

    TrainResult result;
    result.latest_checkpoint = std::filesystem::path(cfg.out_dir) / "ckpt_latest.nudc";
    result.best_checkpoint = std::filesystem::path(cfg.out_dir) / "ckpt_best.nudc";
    result.loss_log = std::filesystem::path(cfg.out_dir) / "train_log.csv";

    std::ofstream log;
    if (resume_from.empty() || !std::filesystem::exists(result.loss_log)) {
        log.open(result.loss_log, std::ios::trunc);
        log << "epoch,train_loss,val_psnr\n";
    } else {
        log.open(result.loss_log, std::ios::app);
    }
    if (!log) throw io_error("run_training: cannot open loss log");

    ImageCache cache;
    std::vector<std::size_t> order(split.train.size());

    for (int epoch = start_epoch + 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        Rng shuffle_rng(mix_seed(cfg.seed, 0xE70C5ull, static_cast<std::uint64_t>(epoch)));
        fisher_yates(order, shuffle_rng);

        double loss_sum = 0.0;
        std::size_t seen = 0;
        int batch_idx = 0;
        for (std::size_t first = 0; first < order.size(); first += cfg.batch_size, ++batch_idx) {
            const std::size_t count =
                std::min<std::size_t>(cfg.batch_size, order.size() - first);
            auto x = assemble_batch(cache, split.train, order, first, count, false);
            auto y = assemble_batch(cache, split.train, order, first, count, true);
            double loss;
            try {
                loss = model::train_step(m, x, y, adam, {epoch, batch_idx});
            } catch (const numeric_error&) {
                save_checkpoint(m, &adam, cfg, epoch - 1, {},
                                std::filesystem::path(cfg.out_dir) / "ckpt_diagnostic.nudc");
                throw;
            }
            loss_sum += loss * static_cast<double>(count);
            seen += count;
        }
        const double mean_loss = loss_sum / static_cast<double>(seen);
        const double val = mean_val_psnr(m, cache, split.test);

        log << epoch << ',' << format_log_value(mean_loss) << ',' << format_log_value(val)
            << '\n';
        log.flush();

        bool new_best = false;
        if (!std::isnan(val) && (!have_best || val > best_val)) {
            best_val = val;
            have_best = true;
            new_best = true;
        }
        std::map<std::string, std::string> meta;
        if (have_best) meta["best_val_psnr"] = format_log_value(best_val);
        save_checkpoint(m, &adam, cfg, epoch, meta, result.latest_checkpoint);
        if (new_best) save_checkpoint(m, &adam, cfg, epoch, meta, result.best_checkpoint);

        result.final_train_loss = mean_loss;
        result.best_val_psnr = best_val;
    }
    return result;
}

std::vector<metrics::MetricRow> evaluate_model(const std::filesystem::path& checkpoint_path,
                                               const std::filesystem::path& manifest_path,
                                               int train_count,
                                               const std::filesystem::path& out_csv) {
    auto ckpt = load_checkpoint(checkpoint_path);
    auto& m = ckpt.model;
    const int tc = train_count >= 0 ? train_count : ckpt.config.train_count;

    auto records = pairs_from_manifest(manifest_path);
    auto split = io::split_manifest(records, static_cast<std::size_t>(tc));
    if (split.test.empty()) throw config_error("evaluate_model: empty test split");

    struct Acc {
        double psnr_model = 0, ssim_model = 0, psnr_input = 0, ssim_input = 0;
        int count = 0;
    };
    std::map<std::string, Acc> by_tag;
    ImageCache cache;
    for (const auto& rec : split.test) {
        const auto& x = cache.get(rec.input_path);
        const auto& y = cache.get(rec.target_path);
        auto pred = model::predict(m, x);
        auto& acc = by_tag[rec.tag];
        acc.psnr_model += metrics::psnr(pred, y, 1.0);
        acc.ssim_model += metrics::ssim(pred, y, 1.0);
        acc.psnr_input += metrics::psnr(x, y, 1.0);
        acc.ssim_input += metrics::ssim(x, y, 1.0);
        ++acc.count;
    }

    const auto& mc = ckpt.config.model;
    const std::string model_tag =
        "N" + std::to_string(mc.levels) + "-" + model::to_string(mc.fusion);
    const long long params = m.count_params();

    std::vector<metrics::MetricRow> rows;
    for (const auto& [tag, acc] : by_tag) {
        const double n = acc.count;
        rows.push_back({tag, model_tag, mc.levels, model::to_string(mc.fusion),
                        acc.psnr_model / n, acc.ssim_model / n, params});
        rows.push_back({tag, "input", 0, "-", acc.psnr_input / n, acc.ssim_input / n, 0});
    }
    if (!out_csv.empty()) metrics::write_report(rows, out_csv);
    return rows;
}

std::vector<metrics::MetricRow> run_ablation(const RunConfig& base,
                                             const std::vector<int>& levels_grid,
                                             const std::vector<model::FusionMode>& modes,
                                             const std::filesystem::path& out_csv) {
    if (levels_grid.empty() || modes.empty())
        throw config_error("run_ablation: empty grid");

    std::vector<metrics::MetricRow> rows;
    std::vector<metrics::MetricRow> n1_rows; // N = 1 is mode-degenerate; train once
    bool have_n1 = false;

    for (int levels : levels_grid) {
        for (auto mode : modes) {
            RunConfig cell = base;
            cell.model.levels = levels;
            cell.model.fusion = mode;
            const std::string cell_name =
                "N" + std::to_string(levels) +
                (levels == 1 ? std::string("") : "-" + model::to_string(mode));
            cell.out_dir =
                (std::filesystem::path(base.out_dir) / ("cell_" + std::to_string(levels) + "_" +
                                                        model::to_string(mode)))
                    .string();
            // N 1 cells share a seed (and a result) regardless of mode
            cell.seed = levels == 1 ? mix_seed(base.seed, 1, 0)
                                    : mix_seed(base.seed, static_cast<std::uint64_t>(levels),
                                               mode == model::FusionMode::residual ? 1 : 2);

            if (levels == 1 && have_n1) {
                for (auto row : n1_rows) rows.push_back(row);
                continue;
            }

            try {
                auto trained = run_training(cell);
                auto cell_rows = evaluate_model(trained.best_checkpoint, cell.manifest_path,
                                                cell.train_count, {});
                std::vector<metrics::MetricRow> kept;
                for (auto& row : cell_rows) {
                    if (row.model == "input") continue;
                    if (levels == 1) {
                        row.mode = "-";
                        row.model = "N1";
                    }
                    kept.push_back(row);
                }
                rows.insert(rows.end(), kept.begin(), kept.end());
                if (levels == 1) {
                    n1_rows = kept;
                    have_n1 = true;
                }
            } catch (const error& e) {
                std::cerr << "ablation cell " << cell_name << " failed: " << e.what() << "\n";
                metrics::MetricRow failed;
                failed.tag = "-";
                failed.model = levels == 1
                                   ? "N1"
                                   : "N" + std::to_string(levels) + "-" + model::to_string(mode);
                failed.levels = levels;
                failed.mode = levels == 1 ? "-" : model::to_string(mode);
                failed.psnr_db = std::nan("");
                failed.ssim = std::nan("");
                failed.params = 0;
                rows.push_back(failed);
            }
        }
    }
    if (!out_csv.empty()) metrics::write_report(rows, out_csv);
    return rows;
}

} // namespace nudc::harness
