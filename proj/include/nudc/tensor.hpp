#ifndef NUDC_TENSOR_HPP
#define NUDC_TENSOR_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nudc/errors.hpp"

namespace nudc {

/// Dense 4-axis array in (batch, channel, height, width) order, row-major
/// within (h, w). Carries images, activations and gradients throughout the
/// framework. T is float for training, double for verification paths.
template <typename T>
struct Tensor4 {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> data;

    Tensor4() = default;

    Tensor4(int n_, int c_, int h_, int w_, T fill = T(0))
        : n(n_), c(c_), h(h_), w(w_),
          data(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {
        if (n_ < 0 || c_ < 0 || h_ < 0 || w_ < 0)
            throw shape_error("Tensor4: negative dimension");
    }

    static Tensor4 zeros_like(const Tensor4& other) {
        return Tensor4(other.n, other.c, other.h, other.w);
    }

    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }

    std::size_t index(int b, int ch, int y, int x) const {
        return ((static_cast<std::size_t>(b) * c + ch) * h + y) * w + x;
    }

    T& at(int b, int ch, int y, int x) { return data[index(b, ch, y, x)]; }
    const T& at(int b, int ch, int y, int x) const { return data[index(b, ch, y, x)]; }

    bool same_shape(const Tensor4& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }

    std::string shape_str() const {
        return "(" + std::to_string(n) + "," + std::to_string(c) + "," +
               std::to_string(h) + "," + std::to_string(w) + ")";
    }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }

    bool all_finite() const {
        for (T v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }
};

using Tensor4f = Tensor4<float>;
using Tensor4d = Tensor4<double>;

template <typename To, typename From>
Tensor4<To> tensor_cast(const Tensor4<From>& x) {
    Tensor4<To> out(x.n, x.c, x.h, x.w);
    for (std::size_t i = 0; i < x.size(); ++i)
        out.data[i] = static_cast<To>(x.data[i]);
    return out;
}

} // namespace nudc

#endif // NUDC_TENSOR_HPP
