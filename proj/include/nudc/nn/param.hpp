#ifndef NUDC_NN_PARAM_HPP
#define NUDC_NN_PARAM_HPP

#include <string>

#include "nudc/tensor.hpp"

namespace nudc::nn {

/// A named, trainable tensor with its gradient accumulator. Biases use the
/// degenerate shape (1, c, 1, 1). grad always matches value's shape and is
/// zeroed between optimizer steps.
template <typename T>
struct ParamTensor {
    std::string id;
    Tensor4<T> value;
    Tensor4<T> grad;
    bool trainable = true;

    ParamTensor() = default;

    ParamTensor(std::string id_, Tensor4<T> value_, bool trainable_ = true)
        : id(std::move(id_)),
          value(std::move(value_)),
          grad(Tensor4<T>::zeros_like(value)),
          trainable(trainable_) {}

    std::size_t count() const { return value.size(); }
    void zero_grad() { grad.fill(T(0)); }
};

} // namespace nudc::nn

#endif // NUDC_NN_PARAM_HPP
