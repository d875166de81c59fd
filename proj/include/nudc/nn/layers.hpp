#ifndef NUDC_NN_LAYERS_HPP
#define NUDC_NN_LAYERS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nudc/nn/conv2d.hpp"
#include "nudc/nn/init.hpp"
#include "nudc/nn/param.hpp"
#include "nudc/nn/pool.hpp"
#include "nudc/nn/relu.hpp"
#include "nudc/nn/upsample.hpp"

namespace nudc::nn {

/// Convolution layer owning its parameters and the input cache for the
/// backward pass. One forward at a time per instance.
template <typename T>
struct Conv2dLayer {
    ParamTensor<T> weight;
    ParamTensor<T> bias; // (1, c_out, 1, 1); empty when bias-free
    int stride = 1;
    int pad = 0;
    Tensor4<T> cached_input;

    void configure(const std::string& name, int c_in, int c_out, int k, int pad_,
                   bool with_bias, std::uint64_t seed) {
        stride = 1;
        pad = pad_;
        weight = ParamTensor<T>(name + ".w", he_init<T>(c_out, c_in, k, k, seed));
        if (with_bias)
            bias = ParamTensor<T>(name + ".b", Tensor4<T>(1, c_out, 1, 1));
        else
            bias = ParamTensor<T>();
    }

    Tensor4<T> forward(const Tensor4<T>& x) {
        cached_input = x;
        return conv2d_forward(x, weight.value, bias.value, stride, pad);
    }

    Tensor4<T> backward(const Tensor4<T>& gout) {
        Tensor4<T> gx;
        conv2d_backward(cached_input, weight.value, gout, stride, pad, &gx,
                        &weight.grad, bias.value.empty() ? nullptr : &bias.grad);
        return gx;
    }

    void collect(std::vector<ParamTensor<T>*>& out) {
        out.push_back(&weight);
        if (!bias.value.empty()) out.push_back(&bias);
    }

    long long param_count() const {
        return static_cast<long long>(weight.count()) + static_cast<long long>(bias.count());
    }
};

template <typename T>
struct ReluLayer {
    Tensor4<T> cached_input;

    Tensor4<T> forward(const Tensor4<T>& x) {
        cached_input = x;
        return relu_forward(x);
    }
    Tensor4<T> backward(const Tensor4<T>& gout) {
        return relu_backward(cached_input, gout);
    }
};

template <typename T>
struct MaxPoolLayer {
    int in_n = 0, in_c = 0, in_h = 0, in_w = 0;
    std::vector<std::uint32_t> argmax;

    Tensor4<T> forward(const Tensor4<T>& x) {
        in_n = x.n; in_c = x.c; in_h = x.h; in_w = x.w;
        return pool_down2x_forward(x, &argmax);
    }
    Tensor4<T> backward(const Tensor4<T>& gout) {
        return pool_down2x_backward_shape(in_n, in_c, in_h, in_w, argmax, gout);
    }
};

template <typename T>
struct UpsampleLayer {
    int in_h = 0, in_w = 0;

    Tensor4<T> forward(const Tensor4<T>& x) {
        in_h = x.h;
        in_w = x.w;
        return upsample2x_forward(x);
    }
    Tensor4<T> backward(const Tensor4<T>& gout) {
        return upsample2x_backward(in_h, in_w, gout);
    }
};

/// Channel concatenation [a : b] and its gradient split.
template <typename T>
Tensor4<T> concat_channels(const Tensor4<T>& a, const Tensor4<T>& b) {
    if (a.n != b.n || a.h != b.h || a.w != b.w)
        throw contract_error("concat_channels: incompatible shapes " + a.shape_str() +
                             " vs " + b.shape_str());
    Tensor4<T> out(a.n, a.c + b.c, a.h, a.w);
    const std::size_t plane = static_cast<std::size_t>(a.h) * a.w;
    for (int n = 0; n < a.n; ++n) {
        std::copy(&a.data[a.index(n, 0, 0, 0)], &a.data[a.index(n, 0, 0, 0)] + plane * a.c,
                  &out.data[out.index(n, 0, 0, 0)]);
        std::copy(&b.data[b.index(n, 0, 0, 0)], &b.data[b.index(n, 0, 0, 0)] + plane * b.c,
                  &out.data[out.index(n, a.c, 0, 0)]);
    }
    return out;
}

template <typename T>
void split_channels_grad(const Tensor4<T>& gout, int c_a, Tensor4<T>* ga, Tensor4<T>* gb) {
    const std::size_t plane = static_cast<std::size_t>(gout.h) * gout.w;
    if (ga) *ga = Tensor4<T>(gout.n, c_a, gout.h, gout.w);
    if (gb) *gb = Tensor4<T>(gout.n, gout.c - c_a, gout.h, gout.w);
    for (int n = 0; n < gout.n; ++n) {
        if (ga)
            std::copy(&gout.data[gout.index(n, 0, 0, 0)],
                      &gout.data[gout.index(n, 0, 0, 0)] + plane * c_a,
                      &ga->data[ga->index(n, 0, 0, 0)]);
        if (gb)
            std::copy(&gout.data[gout.index(n, c_a, 0, 0)],
                      &gout.data[gout.index(n, c_a, 0, 0)] + plane * (gout.c - c_a),
                      &gb->data[gb->index(n, 0, 0, 0)]);
    }
}

} // namespace nudc::nn

#endif // NUDC_NN_LAYERS_HPP
