#ifndef NUDC_NN_RELU_HPP
#define NUDC_NN_RELU_HPP

#include "nudc/tensor.hpp"

namespace nudc::nn {

template <typename T>
Tensor4<T> relu_forward(const Tensor4<T>& x) {
    Tensor4<T> out(x.n, x.c, x.h, x.w);
    for (std::size_t i = 0; i < x.size(); ++i)
        out.data[i] = x.data[i] > T(0) ? x.data[i] : T(0);
    return out;
}

/// Subgradient 0 at the kink.
template <typename T>
Tensor4<T> relu_backward(const Tensor4<T>& x, const Tensor4<T>& gout) {
    if (!x.same_shape(gout))
        throw contract_error("relu_backward: shape mismatch " + x.shape_str() +
                             " vs " + gout.shape_str());
    Tensor4<T> gx(x.n, x.c, x.h, x.w);
    for (std::size_t i = 0; i < x.size(); ++i)
        gx.data[i] = x.data[i] > T(0) ? gout.data[i] : T(0);
    return gx;
}

} // namespace nudc::nn

#endif // NUDC_NN_RELU_HPP
