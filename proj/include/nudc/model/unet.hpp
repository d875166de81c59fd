#ifndef NUDC_MODEL_UNET_HPP
#define NUDC_MODEL_UNET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nudc/model/config.hpp"
#include "nudc/nn/layers.hpp"
#include "nudc/rng.hpp"

namespace nudc::model {

/// Everything a subnetwork exposes after one forward: the (post-fusion)
/// encoder features E_0..E_I, the decoder features D_0..D_I under the
/// mirrored indexing convention (D_i has E_i's spatial dims), and the
/// prediction at the subnetwork's input resolution.
template <typename T>
struct SubnetTrace {
    std::vector<Tensor4<T>> encoder;
    std::vector<Tensor4<T>> decoder;
    Tensor4<T> prediction;
};

struct SubnetForwardOpts {
    /// Replace incoming coarse decoder features with zeros (keeps the
    /// graph shape; used to verify the residual-mode additive identity).
    bool zero_coarse_features = false;
    /// Skip the fusion sites entirely. Residual mode only: in concat mode
    /// the downstream convolutions expect the widened channel count.
    bool disable_fusion = false;
};

template <typename T>
struct SubnetBackwardResult {
    Tensor4<T> g_input;
    /// Gradient w.r.t. the coarse decoder feature consumed at encoder
    /// stage i, stored at index i-1. Empty tensors where no fusion ran.
    std::vector<Tensor4<T>> g_coarse_decoder;
};

/// One U-Net level of the nested model. Encoder stage i >= 1 optionally
/// fuses the coarser subnetwork's decoder feature D_{i-1}, which has the
/// same spatial dims as E_i by the mirrored indexing (h_{n+1} / 2^{i-1}
/// == h_n / 2^i). Channel plan: base * 2^i at stage i, every level alike.
template <typename T>
class Subnet {
public:
    void configure(int level, int total_levels, const NestedConfig& cfg,
                   std::uint64_t model_seed) {
        level_ = level;
        depth_ = cfg.unet_depth;
        fusion_ = cfg.fusion;
        fused_ = level < total_levels;
        const int I = depth_;
        const std::string p = "net" + std::to_string(level) + ".";

        ch_.resize(static_cast<std::size_t>(I) + 1);
        for (int i = 0; i <= I; ++i) ch_[i] = cfg.base_channels << i;

        // per-parameter seed keyed by name, so layers shared between
        // configurations (e.g. the coarsest subnetwork across fusion
        // modes) initialize identically for a given model seed
        auto seed = [&](const std::string& name) {
            std::uint64_t h = 0xcbf29ce484222325ull;
            for (char c : name) {
                h ^= static_cast<std::uint8_t>(c);
                h *= 0x100000001b3ull;
            }
            return mix_seed(model_seed, h);
        };

        const int in_total = cfg.in_channels + (fused_ ? cfg.out_channels : 0);
        stem_.configure(p + "stem", in_total, ch_[0], 3, 1, true, seed(p + "stem"));

        pools_.resize(static_cast<std::size_t>(I));
        enc_.resize(static_cast<std::size_t>(I));
        enc_act_.resize(static_cast<std::size_t>(I));
        for (int i = 1; i <= I; ++i) {
            const std::string name = p + "enc" + std::to_string(i);
            enc_[i - 1].configure(name, enc_in_channels(i - 1), ch_[i], 3, 1, true, seed(name));
        }

        if (fused_ && fusion_ == FusionMode::residual) {
            proj_.resize(static_cast<std::size_t>(I));
            for (int i = 1; i <= I; ++i)
                if (ch_[i - 1] != ch_[i]) {
                    // bias-free so zero coarse features fuse to an exact no-op
                    const std::string name = p + "proj" + std::to_string(i);
                    proj_[i - 1].configure(name, ch_[i - 1], ch_[i], 1, 0, false, seed(name));
                }
        }

        bott_.configure(p + "bott", enc_in_channels(I), ch_[I], 3, 1, true, seed(p + "bott"));

        ups_.resize(static_cast<std::size_t>(I));
        upc_.resize(static_cast<std::size_t>(I));
        upc_act_.resize(static_cast<std::size_t>(I));
        merge_.resize(static_cast<std::size_t>(I));
        merge_act_.resize(static_cast<std::size_t>(I));
        for (int i = 0; i < I; ++i) {
            const std::string up_name = p + "up" + std::to_string(i);
            upc_[i].configure(up_name, ch_[i + 1], ch_[i], 3, 1, true, seed(up_name));
            const std::string merge_name = p + "merge" + std::to_string(i);
            merge_[i].configure(merge_name, ch_[i] + enc_in_channels(i), ch_[i], 3, 1, true,
                                seed(merge_name));
        }

        head_.configure(p + "head", ch_[0], cfg.out_channels, 3, 1, true, seed(p + "head"));
    }

    bool has_fusion_sites() const { return fused_; }
    int depth() const { return depth_; }

    /// coarse_decoder: D_0..D_I of the next-coarser level; null at the
    /// coarsest level. xin is the already-concatenated subnetwork input.
    SubnetTrace<T> forward(const Tensor4<T>& xin,
                           const std::vector<Tensor4<T>>* coarse_decoder,
                           const SubnetForwardOpts& opts = {}) {
        const int I = depth_;
        if (fused_ && coarse_decoder == nullptr && !opts.disable_fusion)
            throw contract_error("subnet level " + std::to_string(level_) +
                                 ": coarse decoder features required");
        if (!fused_ && coarse_decoder != nullptr)
            throw contract_error("subnet level " + std::to_string(level_) +
                                 " (coarsest): unexpected coarse decoder features");
        if (opts.disable_fusion && fused_ && fusion_ == FusionMode::concat)
            throw contract_error("disable_fusion is undefined in concat mode");
        fusion_ran_.assign(static_cast<std::size_t>(I) + 1, false);
        last_opts_ = opts;

        SubnetTrace<T> tr;
        tr.encoder.resize(static_cast<std::size_t>(I) + 1);
        tr.decoder.resize(static_cast<std::size_t>(I) + 1);

        tr.encoder[0] = stem_act_.forward(stem_.forward(xin));
        for (int i = 1; i <= I; ++i) {
            Tensor4<T> pooled = pools_[i - 1].forward(tr.encoder[i - 1]);
            Tensor4<T> raw = enc_act_[i - 1].forward(enc_[i - 1].forward(pooled));
            if (fused_ && !opts.disable_fusion) {
                Tensor4<T> d_ext = (*coarse_decoder)[i - 1];
                if (opts.zero_coarse_features) d_ext.fill(T(0));
                tr.encoder[i] = fuse_site(i, raw, d_ext);
                fusion_ran_[i] = true;
            } else {
                tr.encoder[i] = std::move(raw);
            }
        }

        tr.decoder[I] = bott_act_.forward(bott_.forward(tr.encoder[I]));
        for (int i = I - 1; i >= 0; --i) {
            Tensor4<T> up = upc_act_[i].forward(upc_[i].forward(ups_[i].forward(tr.decoder[i + 1])));
            Tensor4<T> merged = nn::concat_channels(up, tr.encoder[i]);
            tr.decoder[i] = merge_act_[i].forward(merge_[i].forward(merged));
        }

        tr.prediction = head_.forward(tr.decoder[0]);
        return tr;
    }

    /// g_pred: dL/d prediction. g_decoder_ext[i] (optional, may hold empty
    /// tensors): externally accumulated dL/dD_i from the finer level's
    /// fusion sites. Parameter gradients are accumulated in place.
    SubnetBackwardResult<T> backward(const Tensor4<T>& g_pred,
                                     const std::vector<Tensor4<T>>& g_decoder_ext) {
        const int I = depth_;
        std::vector<Tensor4<T>> gD(static_cast<std::size_t>(I) + 1);
        std::vector<Tensor4<T>> gE(static_cast<std::size_t>(I) + 1);
        for (int i = 0; i <= I; ++i)
            if (static_cast<std::size_t>(i) < g_decoder_ext.size() && !g_decoder_ext[i].empty())
                gD[i] = g_decoder_ext[i];

        accumulate(gD[0], head_.backward(g_pred));

        for (int i = 0; i < I; ++i) {
            Tensor4<T> g_merged = merge_[i].backward(merge_act_[i].backward(gD[i]));
            Tensor4<T> g_up, g_skip;
            nn::split_channels_grad(g_merged, ch_[i], &g_up, &g_skip);
            accumulate(gE[i], g_skip);
            Tensor4<T> g_coarse_d =
                ups_[i].backward(upc_[i].backward(upc_act_[i].backward(g_up)));
            accumulate(gD[i + 1], g_coarse_d);
        }

        accumulate(gE[I], bott_.backward(bott_act_.backward(gD[I])));

        SubnetBackwardResult<T> out;
        out.g_coarse_decoder.resize(static_cast<std::size_t>(I));
        for (int i = I; i >= 1; --i) {
            Tensor4<T> g_raw;
            if (fusion_ran_[i]) {
                Tensor4<T> g_ext;
                unfuse_site(i, gE[i], &g_raw, &g_ext);
                if (!last_opts_.zero_coarse_features)
                    out.g_coarse_decoder[i - 1] = std::move(g_ext);
            } else {
                g_raw = std::move(gE[i]);
            }
            Tensor4<T> g_pooled = enc_[i - 1].backward(enc_act_[i - 1].backward(g_raw));
            accumulate(gE[i - 1], pools_[i - 1].backward(g_pooled));
        }

        out.g_input = stem_.backward(stem_act_.backward(gE[0]));
        return out;
    }

    void collect_params(std::vector<nn::ParamTensor<T>*>& out) {
        stem_.collect(out);
        for (auto& l : enc_) l.collect(out);
        for (auto& l : proj_)
            if (!l.weight.value.empty()) l.collect(out);
        bott_.collect(out);
        for (auto& l : upc_) l.collect(out);
        for (auto& l : merge_) l.collect(out);
        head_.collect(out);
    }

private:
    // Encoder feature width at stage i as seen by downstream consumers
    // (concat-mode fusion widens stages 1..I).
    int enc_in_channels(int i) const {
        int c = ch_[i];
        if (i >= 1 && fused_ && fusion_ == FusionMode::concat) c += ch_[i - 1];
        return c;
    }

    Tensor4<T> fuse_site(int i, const Tensor4<T>& raw, const Tensor4<T>& d_ext) {
        if (raw.h != d_ext.h || raw.w != d_ext.w)
            throw contract_error("fusion at stage " + std::to_string(i) +
                                 ": spatial mismatch " + raw.shape_str() + " vs " +
                                 d_ext.shape_str());
        if (fusion_ == FusionMode::concat) return nn::concat_channels(raw, d_ext);
        Tensor4<T> addend = d_ext;
        if (d_ext.c != raw.c) {
            if (proj_[i - 1].weight.value.empty())
                throw config_error("fusion at stage " + std::to_string(i) +
                                   ": channel mismatch with no projection configured");
            addend = proj_[i - 1].forward(d_ext);
        }
        Tensor4<T> out = raw;
        for (std::size_t j = 0; j < out.size(); ++j) out.data[j] += addend.data[j];
        return out;
    }

    void unfuse_site(int i, const Tensor4<T>& g, Tensor4<T>* g_raw, Tensor4<T>* g_ext) {
        if (fusion_ == FusionMode::concat) {
            nn::split_channels_grad(g, ch_[i], g_raw, g_ext);
            return;
        }
        *g_raw = g;
        *g_ext = proj_[i - 1].weight.value.empty() ? g : proj_[i - 1].backward(g);
    }

    static void accumulate(Tensor4<T>& acc, const Tensor4<T>& g) {
        if (acc.empty()) {
            acc = g;
            return;
        }
        if (!acc.same_shape(g))
            throw contract_error("gradient accumulation shape mismatch " + acc.shape_str() +
                                 " vs " + g.shape_str());
        for (std::size_t j = 0; j < acc.size(); ++j) acc.data[j] += g.data[j];
    }

    int level_ = 1;
    int depth_ = 1;
    bool fused_ = false;
    FusionMode fusion_ = FusionMode::residual;
    std::vector<int> ch_;

    nn::Conv2dLayer<T> stem_;
    nn::ReluLayer<T> stem_act_;
    std::vector<nn::MaxPoolLayer<T>> pools_;
    std::vector<nn::Conv2dLayer<T>> enc_;
    std::vector<nn::ReluLayer<T>> enc_act_;
    std::vector<nn::Conv2dLayer<T>> proj_;
    nn::Conv2dLayer<T> bott_;
    nn::ReluLayer<T> bott_act_;
    std::vector<nn::UpsampleLayer<T>> ups_;
    std::vector<nn::Conv2dLayer<T>> upc_;
    std::vector<nn::ReluLayer<T>> upc_act_;
    std::vector<nn::Conv2dLayer<T>> merge_;
    std::vector<nn::ReluLayer<T>> merge_act_;
    nn::Conv2dLayer<T> head_;

    std::vector<bool> fusion_ran_;
    SubnetForwardOpts last_opts_;
};

} // namespace nudc::model

#endif // NUDC_MODEL_UNET_HPP
