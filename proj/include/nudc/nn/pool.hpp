#ifndef NUDC_NN_POOL_HPP
#define NUDC_NN_POOL_HPP

#include <cstdint>
#include <vector>

#include "nudc/tensor.hpp"

namespace nudc::nn {

/// 2x2 max pooling over even-sized inputs. argmax records, per output
/// element, the flat input index of the first maximal element in scan
/// order (ties go to the earliest position, so backward is deterministic).
template <typename T>
Tensor4<T> pool_down2x_forward(const Tensor4<T>& x, std::vector<std::uint32_t>* argmax = nullptr) {
    if (x.h % 2 != 0 || x.w % 2 != 0)
        throw shape_error("pool_down2x: spatial dims must be even, got " + x.shape_str());
    Tensor4<T> out(x.n, x.c, x.h / 2, x.w / 2);
    if (argmax) argmax->assign(out.size(), 0);
    std::size_t o = 0;
    for (int b = 0; b < x.n; ++b) {
        for (int ch = 0; ch < x.c; ++ch) {
            for (int y = 0; y < out.h; ++y) {
                for (int xo = 0; xo < out.w; ++xo, ++o) {
                    std::size_t i00 = x.index(b, ch, 2 * y, 2 * xo);
                    std::size_t cand[4] = {i00, i00 + 1, i00 + x.w, i00 + x.w + 1};
                    std::size_t best = cand[0];
                    T bv = x.data[best];
                    for (int j = 1; j < 4; ++j) {
                        if (x.data[cand[j]] > bv) {
                            bv = x.data[cand[j]];
                            best = cand[j];
                        }
                    }
                    out.data[o] = bv;
                    if (argmax) (*argmax)[o] = static_cast<std::uint32_t>(best);
                }
            }
        }
    }
    return out;
}

template <typename T>
Tensor4<T> pool_down2x_backward_shape(int n, int c, int h, int w,
                                      const std::vector<std::uint32_t>& argmax,
                                      const Tensor4<T>& gout) {
    Tensor4<T> gx(n, c, h, w);
    for (std::size_t o = 0; o < gout.size(); ++o)
        gx.data[argmax[o]] += gout.data[o];
    return gx;
}

template <typename T>
Tensor4<T> pool_down2x_backward(const Tensor4<T>& x, const std::vector<std::uint32_t>& argmax,
                                const Tensor4<T>& gout) {
    return pool_down2x_backward_shape(x.n, x.c, x.h, x.w, argmax, gout);
}

/// 2x2 average pooling; used for the input/target pyramids, forward only.
template <typename T>
Tensor4<T> avgpool_down2x(const Tensor4<T>& x) {
    if (x.h % 2 != 0 || x.w % 2 != 0)
        throw shape_error("avgpool_down2x: spatial dims must be even, got " + x.shape_str());
    Tensor4<T> out(x.n, x.c, x.h / 2, x.w / 2);
    std::size_t o = 0;
    for (int b = 0; b < x.n; ++b)
        for (int ch = 0; ch < x.c; ++ch)
            for (int y = 0; y < out.h; ++y)
                for (int xo = 0; xo < out.w; ++xo, ++o) {
                    std::size_t i00 = x.index(b, ch, 2 * y, 2 * xo);
                    out.data[o] = (x.data[i00] + x.data[i00 + 1] +
                                   x.data[i00 + x.w] + x.data[i00 + x.w + 1]) * T(0.25);
                }
    return out;
}

} // namespace nudc::nn

#endif // NUDC_NN_POOL_HPP
