#ifndef NUDC_NN_CONV2D_HPP
#define NUDC_NN_CONV2D_HPP

#include <algorithm>
#include <cstddef>

#include "nudc/parallel.hpp"
#include "nudc/tensor.hpp"

namespace nudc::nn {

/// Output spatial extent of a convolution along one axis.
inline int conv_out_extent(int in, int k, int stride, int pad) {
    return (in + 2 * pad - k) / stride + 1;
}

namespace detail {

template <typename T>
void conv2d_validate(const Tensor4<T>& x, const Tensor4<T>& w, int stride, int pad) {
    if (w.h != w.w || w.h % 2 == 0)
        throw config_error("conv2d: kernel must be square with odd extent, got " +
                           std::to_string(w.h) + "x" + std::to_string(w.w));
    if (x.c != w.c)
        throw config_error("conv2d: input has " + std::to_string(x.c) +
                           " channels, weight expects " + std::to_string(w.c));
    if (stride < 1) throw config_error("conv2d: stride must be >= 1");
    if (pad < 0) throw config_error("conv2d: pad must be >= 0");
    if (x.h + 2 * pad < w.h || x.w + 2 * pad < w.w)
        throw shape_error("conv2d: kernel larger than padded input " + x.shape_str());
}

} // namespace detail

/// Direct convolution (cross-correlation, the CNN convention).
/// weight shape (c_out, c_in, k, k); bias shape (1, c_out, 1, 1) or empty.
template <typename T>
Tensor4<T> conv2d_forward(const Tensor4<T>& x, const Tensor4<T>& w,
                          const Tensor4<T>& bias, int stride, int pad) {
    detail::conv2d_validate(x, w, stride, pad);
    const int k = w.h, c_out = w.n, c_in = w.c;
    const int oh = conv_out_extent(x.h, k, stride, pad);
    const int ow = conv_out_extent(x.w, k, stride, pad);
    Tensor4<T> out(x.n, c_out, oh, ow);

    const std::size_t cost = 2ull * x.n * c_out * oh * ow * c_in * k * k;
    parallel_for(x.n * c_out, cost, [&](int job) {
        const int b = job / c_out;
        const int oc = job % c_out;
        T* out_plane = &out.data[out.index(b, oc, 0, 0)];
        const T bv = bias.empty() ? T(0) : bias.data[static_cast<std::size_t>(oc)];
        std::fill(out_plane, out_plane + static_cast<std::size_t>(oh) * ow, bv);
        for (int ic = 0; ic < c_in; ++ic) {
            const T* in_plane = &x.data[x.index(b, ic, 0, 0)];
            const T* w_tap = &w.data[w.index(oc, ic, 0, 0)];
            for (int kh = 0; kh < k; ++kh) {
                for (int kw = 0; kw < k; ++kw) {
                    const T wv = w_tap[kh * k + kw];
                    if (wv == T(0)) continue;
                    if (stride == 1) {
                        // contiguous row segments; the hot path
                        const int x0 = std::max(0, pad - kw);
                        const int x1 = std::min(ow, x.w + pad - kw);
                        const int shift = kw - pad;
                        for (int y = 0; y < oh; ++y) {
                            const int iy = y + kh - pad;
                            if (iy < 0 || iy >= x.h) continue;
                            const T* in_row = in_plane + static_cast<std::size_t>(iy) * x.w;
                            T* out_row = out_plane + static_cast<std::size_t>(y) * ow;
                            for (int xo = x0; xo < x1; ++xo)
                                out_row[xo] += wv * in_row[xo + shift];
                        }
                    } else {
                        for (int y = 0; y < oh; ++y) {
                            const int iy = y * stride + kh - pad;
                            if (iy < 0 || iy >= x.h) continue;
                            for (int xo = 0; xo < ow; ++xo) {
                                const int ix = xo * stride + kw - pad;
                                if (ix < 0 || ix >= x.w) continue;
                                out_plane[static_cast<std::size_t>(y) * ow + xo] +=
                                    wv * in_plane[static_cast<std::size_t>(iy) * x.w + ix];
                            }
                        }
                    }
                }
            }
        }
    });
    return out;
}

/// Gradients of conv2d_forward. Any of gx/gw/gb may be null to skip; gw and
/// gb are accumulated into (callers zero them between steps), gx is assigned.
template <typename T>
void conv2d_backward(const Tensor4<T>& x, const Tensor4<T>& w, const Tensor4<T>& gout,
                     int stride, int pad, Tensor4<T>* gx, Tensor4<T>* gw, Tensor4<T>* gb) {
    detail::conv2d_validate(x, w, stride, pad);
    const int k = w.h, c_out = w.n, c_in = w.c;
    const int oh = gout.h, ow = gout.w;
    const std::size_t cost = 2ull * x.n * c_out * oh * ow * c_in * k * k;

    if (gb && !gb->empty()) {
        for (int oc = 0; oc < c_out; ++oc) {
            T acc = T(0);
            for (int b = 0; b < x.n; ++b) {
                const T* g = &gout.data[gout.index(b, oc, 0, 0)];
                for (std::size_t i = 0; i < static_cast<std::size_t>(oh) * ow; ++i)
                    acc += g[i];
            }
            gb->data[static_cast<std::size_t>(oc)] += acc;
        }
    }

    if (gw) {
        parallel_for(c_out, cost, [&](int oc) {
            for (int ic = 0; ic < c_in; ++ic) {
                for (int kh = 0; kh < k; ++kh) {
                    for (int kw = 0; kw < k; ++kw) {
                        T acc = T(0);
                        for (int b = 0; b < x.n; ++b) {
                            const T* in_plane = &x.data[x.index(b, ic, 0, 0)];
                            const T* g_plane = &gout.data[gout.index(b, oc, 0, 0)];
                            if (stride == 1) {
                                const int x0 = std::max(0, pad - kw);
                                const int x1 = std::min(ow, x.w + pad - kw);
                                const int shift = kw - pad;
                                for (int y = 0; y < oh; ++y) {
                                    const int iy = y + kh - pad;
                                    if (iy < 0 || iy >= x.h) continue;
                                    const T* in_row = in_plane + static_cast<std::size_t>(iy) * x.w;
                                    const T* g_row = g_plane + static_cast<std::size_t>(y) * ow;
                                    for (int xo = x0; xo < x1; ++xo)
                                        acc += in_row[xo + shift] * g_row[xo];
                                }
                            } else {
                                for (int y = 0; y < oh; ++y) {
                                    const int iy = y * stride + kh - pad;
                                    if (iy < 0 || iy >= x.h) continue;
                                    for (int xo = 0; xo < ow; ++xo) {
                                        const int ix = xo * stride + kw - pad;
                                        if (ix < 0 || ix >= x.w) continue;
                                        acc += in_plane[static_cast<std::size_t>(iy) * x.w + ix] *
                                               g_plane[static_cast<std::size_t>(y) * ow + xo];
                                    }
                                }
                            }
                        }
                        gw->data[gw->index(oc, ic, kh, kw)] += acc;
                    }
                }
            }
        });
    }

    if (gx) {
        *gx = Tensor4<T>(x.n, x.c, x.h, x.w);
        parallel_for(x.n, cost, [&](int b) {
            for (int oc = 0; oc < c_out; ++oc) {
                const T* g_plane = &gout.data[gout.index(b, oc, 0, 0)];
                for (int ic = 0; ic < c_in; ++ic) {
                    T* gx_plane = &gx->data[gx->index(b, ic, 0, 0)];
                    const T* w_tap = &w.data[w.index(oc, ic, 0, 0)];
                    for (int kh = 0; kh < k; ++kh) {
                        for (int kw = 0; kw < k; ++kw) {
                            const T wv = w_tap[kh * k + kw];
                            if (wv == T(0)) continue;
                            if (stride == 1) {
                                const int x0 = std::max(0, pad - kw);
                                const int x1 = std::min(ow, x.w + pad - kw);
                                const int shift = kw - pad;
                                for (int y = 0; y < oh; ++y) {
                                    const int iy = y + kh - pad;
                                    if (iy < 0 || iy >= x.h) continue;
                                    T* gx_row = gx_plane + static_cast<std::size_t>(iy) * x.w;
                                    const T* g_row = g_plane + static_cast<std::size_t>(y) * ow;
                                    for (int xo = x0; xo < x1; ++xo)
                                        gx_row[xo + shift] += wv * g_row[xo];
                                }
                            } else {
                                for (int y = 0; y < oh; ++y) {
                                    const int iy = y * stride + kh - pad;
                                    if (iy < 0 || iy >= x.h) continue;
                                    for (int xo = 0; xo < ow; ++xo) {
                                        const int ix = xo * stride + kw - pad;
                                        if (ix < 0 || ix >= x.w) continue;
                                        gx_plane[static_cast<std::size_t>(iy) * x.w + ix] +=
                                            wv * g_plane[static_cast<std::size_t>(y) * ow + xo];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        });
    }
}

} // namespace nudc::nn

#endif // NUDC_NN_CONV2D_HPP
