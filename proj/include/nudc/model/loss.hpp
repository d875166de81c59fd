#ifndef NUDC_MODEL_LOSS_HPP
#define NUDC_MODEL_LOSS_HPP

#include <cmath>
#include <vector>

#include "nudc/model/config.hpp"
#include "nudc/tensor.hpp"

namespace nudc::model {

/// Multi-scale content loss: sum over levels of the per-level mean
/// absolute (l1) or mean squared (l2) error. Zero iff preds == targets.
template <typename T>
double multiscale_loss(const std::vector<Tensor4<T>>& preds,
                       const std::vector<Tensor4<T>>& targets, LossKind kind) {
    if (preds.size() != targets.size())
        throw contract_error("multiscale_loss: level count mismatch");
    double total = 0.0;
    for (std::size_t lvl = 0; lvl < preds.size(); ++lvl) {
        const auto& p = preds[lvl];
        const auto& t = targets[lvl];
        if (!p.same_shape(t))
            throw contract_error("multiscale_loss: level " + std::to_string(lvl + 1) +
                                 " shape mismatch " + p.shape_str() + " vs " + t.shape_str());
        double acc = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            double d = static_cast<double>(p.data[j]) - static_cast<double>(t.data[j]);
            acc += (kind == LossKind::l1) ? std::abs(d) : d * d;
        }
        total += acc / static_cast<double>(p.size());
    }
    return total;
}

template <typename T>
std::vector<Tensor4<T>> multiscale_loss_grad(const std::vector<Tensor4<T>>& preds,
                                             const std::vector<Tensor4<T>>& targets,
                                             LossKind kind) {
    if (preds.size() != targets.size())
        throw contract_error("multiscale_loss_grad: level count mismatch");
    std::vector<Tensor4<T>> grads;
    grads.reserve(preds.size());
    for (std::size_t lvl = 0; lvl < preds.size(); ++lvl) {
        const auto& p = preds[lvl];
        const auto& t = targets[lvl];
        if (!p.same_shape(t))
            throw contract_error("multiscale_loss_grad: level " + std::to_string(lvl + 1) +
                                 " shape mismatch");
        Tensor4<T> g(p.n, p.c, p.h, p.w);
        const double inv = 1.0 / static_cast<double>(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            double d = static_cast<double>(p.data[j]) - static_cast<double>(t.data[j]);
            if (kind == LossKind::l1)
                g.data[j] = static_cast<T>(d > 0 ? inv : (d < 0 ? -inv : 0.0));
            else
                g.data[j] = static_cast<T>(2.0 * d * inv);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

} // namespace nudc::model

#endif // NUDC_MODEL_LOSS_HPP
