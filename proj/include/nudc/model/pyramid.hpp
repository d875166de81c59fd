#ifndef NUDC_MODEL_PYRAMID_HPP
#define NUDC_MODEL_PYRAMID_HPP

#include <vector>

#include "nudc/nn/pool.hpp"
#include "nudc/tensor.hpp"

namespace nudc::model {

/// Downsampled input stack: level 1 (index 0) is the full-resolution
/// image, each following level is the 2x2 average pool of the previous.
template <typename T>
using Pyramid = std::vector<Tensor4<T>>;

template <typename T>
Pyramid<T> make_pyramid(const Tensor4<T>& x, int levels) {
    if (levels < 1) throw contract_error("make_pyramid: levels must be >= 1");
    const int need = 1 << (levels - 1);
    if (x.h % need != 0 || x.w % need != 0)
        throw shape_error("make_pyramid: dims " + x.shape_str() + " not divisible by 2^" +
                          std::to_string(levels - 1) + " (pad first)");
    Pyramid<T> pyr;
    pyr.reserve(static_cast<std::size_t>(levels));
    pyr.push_back(x);
    for (int n = 1; n < levels; ++n)
        pyr.push_back(nn::avgpool_down2x(pyr.back()));
    return pyr;
}

} // namespace nudc::model

#endif // NUDC_MODEL_PYRAMID_HPP
