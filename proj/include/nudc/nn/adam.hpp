#ifndef NUDC_NN_ADAM_HPP
#define NUDC_NN_ADAM_HPP

#include <cmath>
#include <vector>

#include "nudc/nn/param.hpp"
#include "nudc/tensor.hpp"

namespace nudc::nn {

struct AdamHyper {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Per-parameter first/second moments plus the shared step counter.
/// Slots are aligned with the parameter list they were initialized from.
template <typename T>
struct AdamState {
    AdamHyper hyper;
    long long t = 0;
    struct Slot {
        Tensor4<T> m, v;
    };
    std::vector<Slot> slots;

    void init_for(const std::vector<ParamTensor<T>*>& params) {
        t = 0;
        slots.clear();
        slots.reserve(params.size());
        for (const auto* p : params)
            slots.push_back({Tensor4<T>::zeros_like(p->value), Tensor4<T>::zeros_like(p->value)});
    }
};

/// One Adam update with bias correction. Validates every gradient before
/// mutating anything, so a NaN aborts with parameters untouched; gradients
/// are zeroed afterwards.
template <typename T>
void adam_step(const std::vector<ParamTensor<T>*>& params, AdamState<T>& state) {
    if (params.size() != state.slots.size())
        throw contract_error("adam_step: state initialized for " +
                             std::to_string(state.slots.size()) + " params, got " +
                             std::to_string(params.size()));
    for (const auto* p : params) {
        if (!p->trainable) continue;
        for (T g : p->grad.data)
            if (!std::isfinite(static_cast<double>(g)))
                throw numeric_error("adam_step: non-finite gradient in parameter '" + p->id + "'");
    }

    state.t += 1;
    const double b1 = state.hyper.beta1, b2 = state.hyper.beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.t));

    for (std::size_t k = 0; k < params.size(); ++k) {
        ParamTensor<T>& p = *params[k];
        if (!p.trainable) continue;
        auto& slot = state.slots[k];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            double g = static_cast<double>(p.grad.data[i]);
            double m = b1 * static_cast<double>(slot.m.data[i]) + (1.0 - b1) * g;
            double v = b2 * static_cast<double>(slot.v.data[i]) + (1.0 - b2) * g * g;
            slot.m.data[i] = static_cast<T>(m);
            slot.v.data[i] = static_cast<T>(v);
            double m_hat = m / corr1;
            double v_hat = v / corr2;
            p.value.data[i] = static_cast<T>(
                static_cast<double>(p.value.data[i]) -
                state.hyper.lr * m_hat / (std::sqrt(v_hat) + state.hyper.eps));
        }
        p.zero_grad();
    }
}

} // namespace nudc::nn

#endif // NUDC_NN_ADAM_HPP
