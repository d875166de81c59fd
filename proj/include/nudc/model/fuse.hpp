#ifndef NUDC_MODEL_FUSE_HPP
#define NUDC_MODEL_FUSE_HPP

#include "nudc/model/config.hpp"
#include "nudc/nn/layers.hpp"

namespace nudc::model {

/// Merges a coarse decoder feature map into an encoder feature map.
/// Residual mode sums element-wise, projecting channels with the given
/// 1x1 convolution when counts differ; concat mode appends channels.
/// Spatial dims must already match (callers resize beforehand).
template <typename T>
Tensor4<T> fuse_features(const Tensor4<T>& e, const Tensor4<T>& d_coarse, FusionMode mode,
                         const nn::ParamTensor<T>* projection = nullptr) {
    if (e.n != d_coarse.n || e.h != d_coarse.h || e.w != d_coarse.w)
        throw contract_error("fuse_features: spatial mismatch " + e.shape_str() + " vs " +
                             d_coarse.shape_str());
    if (mode == FusionMode::concat) return nn::concat_channels(e, d_coarse);

    Tensor4<T> addend = d_coarse;
    if (d_coarse.c != e.c) {
        if (!projection || projection->value.empty())
            throw config_error("fuse_features: residual mode with " + std::to_string(d_coarse.c) +
                               " -> " + std::to_string(e.c) +
                               " channels and no projection configured");
        if (projection->value.n != e.c || projection->value.c != d_coarse.c)
            throw config_error("fuse_features: projection shape " + projection->value.shape_str() +
                               " incompatible");
        addend = nn::conv2d_forward(d_coarse, projection->value, Tensor4<T>{}, 1, 0);
    }
    Tensor4<T> out = e;
    for (std::size_t j = 0; j < out.size(); ++j) out.data[j] += addend.data[j];
    return out;
}

} // namespace nudc::model

#endif // NUDC_MODEL_FUSE_HPP
