#ifndef NUDC_NN_PAD_HPP
#define NUDC_NN_PAD_HPP

#include "nudc/tensor.hpp"

namespace nudc::nn {

/// Folds any integer coordinate into [0, n) by symmetric reflection with
/// the edge sample included: -1 -> 0, n -> n-1, period 2n. Valid for
/// arbitrarily large overshoot.
inline int reflect_index(int i, int n) {
    if (n == 1) return 0;
    int p = i % (2 * n);
    if (p < 0) p += 2 * n;
    return p < n ? p : 2 * n - 1 - p;
}

/// Reflect-pads the spatial dims (top, bottom, left, right).
template <typename T>
Tensor4<T> reflect_pad(const Tensor4<T>& x, int top, int bottom, int left, int right) {
    if (top < 0 || bottom < 0 || left < 0 || right < 0)
        throw shape_error("reflect_pad: negative padding");
    Tensor4<T> out(x.n, x.c, x.h + top + bottom, x.w + left + right);
    for (int b = 0; b < x.n; ++b)
        for (int ch = 0; ch < x.c; ++ch)
            for (int y = 0; y < out.h; ++y) {
                int sy = reflect_index(y - top, x.h);
                for (int xo = 0; xo < out.w; ++xo)
                    out.at(b, ch, y, xo) = x.at(b, ch, sy, reflect_index(xo - left, x.w));
            }
    return out;
}

/// Extracts the window starting at (top, left) with the given extent.
template <typename T>
Tensor4<T> crop(const Tensor4<T>& x, int top, int left, int height, int width) {
    if (top < 0 || left < 0 || top + height > x.h || left + width > x.w)
        throw shape_error("crop: window exceeds " + x.shape_str());
    Tensor4<T> out(x.n, x.c, height, width);
    for (int b = 0; b < x.n; ++b)
        for (int ch = 0; ch < x.c; ++ch)
            for (int y = 0; y < height; ++y)
                for (int xo = 0; xo < width; ++xo)
                    out.at(b, ch, y, xo) = x.at(b, ch, top + y, left + xo);
    return out;
}

/// Padding needed to reach the next multiple of `divisor`, split centered.
struct PadPlan {
    int top = 0, bottom = 0, left = 0, right = 0;
    bool none() const { return top == 0 && bottom == 0 && left == 0 && right == 0; }
};

inline PadPlan pad_to_multiple(int h, int w, int divisor) {
    PadPlan p;
    int ph = (divisor - h % divisor) % divisor;
    int pw = (divisor - w % divisor) % divisor;
    p.top = ph / 2;
    p.bottom = ph - p.top;
    p.left = pw / 2;
    p.right = pw - p.left;
    return p;
}

} // namespace nudc::nn

#endif // NUDC_NN_PAD_HPP
