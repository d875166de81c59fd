#ifndef NUDC_NN_UPSAMPLE_HPP
#define NUDC_NN_UPSAMPLE_HPP

#include <algorithm>
#include <cmath>

#include "nudc/tensor.hpp"

namespace nudc::nn {

namespace detail {

// Source taps for one output coordinate under the align-corners=false
// convention: src = (o + 0.5) / 2 - 0.5, clamped to the valid range.
struct LinTap {
    int i0, i1;
    double w1; // weight of i1; i0 gets (1 - w1)
};

inline LinTap upsample2x_tap(int o, int in_extent) {
    double src = (o + 0.5) * 0.5 - 0.5;
    double fl = std::floor(src);
    LinTap t;
    t.w1 = src - fl;
    t.i0 = std::clamp(static_cast<int>(fl), 0, in_extent - 1);
    t.i1 = std::clamp(static_cast<int>(fl) + 1, 0, in_extent - 1);
    return t;
}

} // namespace detail

/// Bilinear 2x upsampling, align-corners=false. Reproduces linear ramps
/// exactly in the interior; edges clamp.
template <typename T>
Tensor4<T> upsample2x_forward(const Tensor4<T>& x) {
    if (x.h < 1 || x.w < 1)
        throw shape_error("upsample2x: empty spatial dims " + x.shape_str());
    Tensor4<T> out(x.n, x.c, 2 * x.h, 2 * x.w);
    for (int b = 0; b < x.n; ++b) {
        for (int ch = 0; ch < x.c; ++ch) {
            const T* in_plane = &x.data[x.index(b, ch, 0, 0)];
            T* out_plane = &out.data[out.index(b, ch, 0, 0)];
            for (int y = 0; y < out.h; ++y) {
                auto ty = detail::upsample2x_tap(y, x.h);
                const T* r0 = in_plane + static_cast<std::size_t>(ty.i0) * x.w;
                const T* r1 = in_plane + static_cast<std::size_t>(ty.i1) * x.w;
                for (int xo = 0; xo < out.w; ++xo) {
                    auto tx = detail::upsample2x_tap(xo, x.w);
                    double v0 = (1.0 - tx.w1) * r0[tx.i0] + tx.w1 * r0[tx.i1];
                    double v1 = (1.0 - tx.w1) * r1[tx.i0] + tx.w1 * r1[tx.i1];
                    out_plane[static_cast<std::size_t>(y) * out.w + xo] =
                        static_cast<T>((1.0 - ty.w1) * v0 + ty.w1 * v1);
                }
            }
        }
    }
    return out;
}

/// Transpose of the bilinear interpolation map.
template <typename T>
Tensor4<T> upsample2x_backward(int in_h, int in_w, const Tensor4<T>& gout) {
    Tensor4<T> gx(gout.n, gout.c, in_h, in_w);
    for (int b = 0; b < gout.n; ++b) {
        for (int ch = 0; ch < gout.c; ++ch) {
            const T* g_plane = &gout.data[gout.index(b, ch, 0, 0)];
            T* gx_plane = &gx.data[gx.index(b, ch, 0, 0)];
            for (int y = 0; y < gout.h; ++y) {
                auto ty = detail::upsample2x_tap(y, in_h);
                for (int xo = 0; xo < gout.w; ++xo) {
                    auto tx = detail::upsample2x_tap(xo, in_w);
                    double g = g_plane[static_cast<std::size_t>(y) * gout.w + xo];
                    gx_plane[static_cast<std::size_t>(ty.i0) * in_w + tx.i0] +=
                        static_cast<T>((1.0 - ty.w1) * (1.0 - tx.w1) * g);
                    gx_plane[static_cast<std::size_t>(ty.i0) * in_w + tx.i1] +=
                        static_cast<T>((1.0 - ty.w1) * tx.w1 * g);
                    gx_plane[static_cast<std::size_t>(ty.i1) * in_w + tx.i0] +=
                        static_cast<T>(ty.w1 * (1.0 - tx.w1) * g);
                    gx_plane[static_cast<std::size_t>(ty.i1) * in_w + tx.i1] +=
                        static_cast<T>(ty.w1 * tx.w1 * g);
                }
            }
        }
    }
    return gx;
}

} // namespace nudc::nn

#endif // NUDC_NN_UPSAMPLE_HPP
