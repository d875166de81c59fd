#ifndef NUDC_MODEL_NESTED_HPP
#define NUDC_MODEL_NESTED_HPP

#include <cstdint>
#include <vector>

#include "nudc/model/pyramid.hpp"
#include "nudc/model/unet.hpp"

namespace nudc::model {

/// The N-level nested U-Net. Subnetworks run coarse to fine: level N sees
/// only x_N; level n < N sees (x_n : upsampled prediction of level n+1)
/// and fuses level n+1's decoder features at its encoder stages.
template <typename T>
class NestedModel {
public:
    static NestedModel build(const NestedConfig& cfg, std::uint64_t seed) {
        cfg.validate();
        NestedModel m;
        m.cfg_ = cfg;
        m.nets_.resize(static_cast<std::size_t>(cfg.levels));
        for (int n = 1; n <= cfg.levels; ++n)
            m.nets_[n - 1].configure(n, cfg.levels, cfg, seed);
        m.pred_ups_.resize(static_cast<std::size_t>(cfg.levels));
        return m;
    }

    const NestedConfig& config() const { return cfg_; }

    std::vector<nn::ParamTensor<T>*> params() {
        std::vector<nn::ParamTensor<T>*> out;
        for (auto& net : nets_) net.collect_params(out);
        return out;
    }

    long long count_params() {
        long long total = 0;
        for (auto* p : params())
            if (p->trainable) total += static_cast<long long>(p->count());
        return total;
    }

    /// Forward one subnetwork in isolation (level n, 1-based). Useful for
    /// probing; forward() below is the full coarse-to-fine sweep.
    SubnetTrace<T> subnet_forward(int n, const Tensor4<T>& x_n,
                                  const Tensor4<T>* coarse_pred,
                                  const SubnetTrace<T>* coarse_trace,
                                  const SubnetForwardOpts& opts = {}) {
        if (n < 1 || n > cfg_.levels)
            throw contract_error("subnet_forward: level out of range");
        const bool coarsest = (n == cfg_.levels);
        if (coarsest && (coarse_pred || coarse_trace))
            throw contract_error("subnet_forward: coarsest level takes no coarse inputs");
        if (!coarsest && (!coarse_pred || !coarse_trace))
            throw contract_error("subnet_forward: level " + std::to_string(n) +
                                 " requires coarse prediction and trace");
        if (coarsest) return nets_[n - 1].forward(x_n, nullptr, opts);
        Tensor4<T> up = nn::upsample2x_forward(*coarse_pred);
        Tensor4<T> xin = nn::concat_channels(x_n, up);
        return nets_[n - 1].forward(xin, &coarse_trace->decoder, opts);
    }

    /// Coarse-to-fine sweep over the whole pyramid; returns predictions
    /// for levels 1..N (finest first), each at its level's resolution.
    std::vector<Tensor4<T>> forward(const Pyramid<T>& pyramid,
                                    const SubnetForwardOpts& opts = {}) {
        const int N = cfg_.levels;
        if (static_cast<int>(pyramid.size()) != N)
            throw contract_error("forward: pyramid has " + std::to_string(pyramid.size()) +
                                 " levels, model expects " + std::to_string(N));
        traces_.assign(static_cast<std::size_t>(N), SubnetTrace<T>{});
        last_opts_ = opts;
        for (int n = N; n >= 1; --n) {
            const std::size_t k = static_cast<std::size_t>(n - 1);
            if (n == N) {
                traces_[k] = nets_[k].forward(pyramid[k], nullptr, opts);
            } else {
                Tensor4<T> up = pred_ups_[k].forward(traces_[k + 1].prediction);
                Tensor4<T> xin = nn::concat_channels(pyramid[k], up);
                traces_[k] = nets_[k].forward(xin, &traces_[k + 1].decoder, opts);
            }
        }
        std::vector<Tensor4<T>> preds;
        preds.reserve(static_cast<std::size_t>(N));
        for (auto& tr : traces_) preds.push_back(tr.prediction);
        return preds;
    }

    const std::vector<SubnetTrace<T>>& traces() const { return traces_; }

    /// Accumulates parameter gradients for dL/d(prediction_n) given per
    /// level. Must follow a forward() on this instance. Runs fine to
    /// coarse: level n's backward feeds both the upsampled-prediction path
    /// and the fusion-site gradients of level n+1.
    void backward(const std::vector<Tensor4<T>>& g_preds) {
        const int N = cfg_.levels;
        if (static_cast<int>(g_preds.size()) != N)
            throw contract_error("backward: expected " + std::to_string(N) + " gradients");
        const int I = cfg_.unet_depth;
        std::vector<Tensor4<T>> g_pred_acc(g_preds.begin(), g_preds.end());
        std::vector<std::vector<Tensor4<T>>> g_dec_ext(
            static_cast<std::size_t>(N), std::vector<Tensor4<T>>(static_cast<std::size_t>(I)));

        for (int n = 1; n <= N; ++n) {
            const std::size_t k = static_cast<std::size_t>(n - 1);
            auto res = nets_[k].backward(g_pred_acc[k], g_dec_ext[k]);
            if (n == N) break;
            Tensor4<T> g_up;
            nn::split_channels_grad<T>(res.g_input, cfg_.in_channels, nullptr, &g_up);
            Tensor4<T> g_coarse_pred = pred_ups_[k].backward(g_up);
            add_into(g_pred_acc[k + 1], g_coarse_pred);
            for (int i = 0; i < I; ++i)
                if (!res.g_coarse_decoder[i].empty())
                    add_into(g_dec_ext[k + 1][i], res.g_coarse_decoder[i]);
        }
    }

    void zero_grads() {
        for (auto* p : params()) p->zero_grad();
    }

private:
    static void add_into(Tensor4<T>& acc, const Tensor4<T>& g) {
        if (acc.empty()) {
            acc = g;
            return;
        }
        for (std::size_t j = 0; j < acc.size(); ++j) acc.data[j] += g.data[j];
    }

    NestedConfig cfg_;
    std::vector<Subnet<T>> nets_;
    std::vector<nn::UpsampleLayer<T>> pred_ups_;
    std::vector<SubnetTrace<T>> traces_;
    SubnetForwardOpts last_opts_;
};

} // namespace nudc::model

#endif // NUDC_MODEL_NESTED_HPP
