#ifndef NUDC_MODEL_TRAIN_HPP
#define NUDC_MODEL_TRAIN_HPP

#include <cmath>
#include <string>

#include "nudc/model/loss.hpp"
#include "nudc/model/nested.hpp"
#include "nudc/nn/adam.hpp"
#include "nudc/nn/pad.hpp"

namespace nudc::model {

struct StepContext {
    int epoch = 0;
    int batch = 0;
};

/// Reflect-pads a batch to the model's divisibility requirement and builds
/// its pyramid.
template <typename T>
Pyramid<T> padded_pyramid(const Tensor4<T>& x, const NestedConfig& cfg) {
    auto plan = nn::pad_to_multiple(x.h, x.w, cfg.divisor());
    if (plan.none()) return make_pyramid(x, cfg.levels);
    return make_pyramid(nn::reflect_pad(x, plan.top, plan.bottom, plan.left, plan.right),
                        cfg.levels);
}

/// Full-resolution inference: pad, sweep, crop the finest prediction back
/// to the input's spatial dims.
template <typename T>
Tensor4<T> predict(NestedModel<T>& m, const Tensor4<T>& x) {
    auto plan = nn::pad_to_multiple(x.h, x.w, m.config().divisor());
    auto preds = m.forward(padded_pyramid(x, m.config()));
    if (plan.none()) return preds[0];
    return nn::crop(preds[0], plan.top, plan.left, x.h, x.w);
}

/// One optimization step on a batch: forward sweep over the padded
/// pyramids, multi-scale loss, backward, Adam update. Returns the
/// pre-step loss.
template <typename T>
double train_step(NestedModel<T>& m, const Tensor4<T>& x, const Tensor4<T>& y,
                  nn::AdamState<T>& adam, const StepContext& ctx = {}) {
    if (x.n != y.n || x.h != y.h || x.w != y.w)
        throw contract_error("train_step: input/target shape mismatch " + x.shape_str() +
                             " vs " + y.shape_str());
    const auto& cfg = m.config();
    Pyramid<T> px = padded_pyramid(x, cfg);
    Pyramid<T> py = padded_pyramid(y, cfg);
    auto preds = m.forward(px);
    double loss = multiscale_loss(preds, py, cfg.loss);
    if (!std::isfinite(loss)) {
        std::string worst = "loss";
        for (std::size_t lvl = 0; lvl < preds.size(); ++lvl)
            if (!preds[lvl].all_finite()) {
                worst = "prediction.level" + std::to_string(lvl + 1);
                break;
            }
        throw numeric_error("train_step: non-finite loss at epoch " +
                            std::to_string(ctx.epoch) + ", batch " + std::to_string(ctx.batch) +
                            " (worst tensor: " + worst + ")");
    }
    m.backward(multiscale_loss_grad(preds, py, cfg.loss));
    auto params = m.params();
    adam_step(params, adam);
    return loss;
}

} // namespace nudc::model

#endif // NUDC_MODEL_TRAIN_HPP
