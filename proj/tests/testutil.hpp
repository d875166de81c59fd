#ifndef NUDC_TESTS_TESTUTIL_HPP
#define NUDC_TESTS_TESTUTIL_HPP

// Independent oracles for the test suites. Everything here is written
// directly from the defining formulas (plain double loops, no shared code
// with the implementations under test).

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "nudc/rng.hpp"
#include "nudc/sim/psf.hpp"
#include "nudc/tensor.hpp"

namespace testutil {

template <typename T>
nudc::Tensor4<T> random_tensor(int n, int c, int h, int w, std::uint64_t seed,
                               double lo = -1.0, double hi = 1.0) {
    nudc::Rng rng(seed);
    nudc::Tensor4<T> out(n, c, h, w);
    for (auto& v : out.data) v = static_cast<T>(rng.uniform(lo, hi));
    return out;
}

/// Zero-padded cross-correlation by definition; bias per output channel.
template <typename T>
nudc::Tensor4<T> conv2d_oracle(const nudc::Tensor4<T>& x, const nudc::Tensor4<T>& w,
                               const std::vector<T>& bias, int stride, int pad) {
    const int k = w.h;
    const int oh = (x.h + 2 * pad - k) / stride + 1;
    const int ow = (x.w + 2 * pad - k) / stride + 1;
    nudc::Tensor4<T> out(x.n, w.n, oh, ow);
    for (int b = 0; b < x.n; ++b)
        for (int oc = 0; oc < w.n; ++oc)
            for (int y = 0; y < oh; ++y)
                for (int xo = 0; xo < ow; ++xo) {
                    double acc = bias.empty() ? 0.0 : static_cast<double>(bias[static_cast<std::size_t>(oc)]);
                    for (int ic = 0; ic < x.c; ++ic)
                        for (int ky = 0; ky < k; ++ky)
                            for (int kx = 0; kx < k; ++kx) {
                                const int iy = y * stride + ky - pad;
                                const int ix = xo * stride + kx - pad;
                                if (iy < 0 || iy >= x.h || ix < 0 || ix >= x.w) continue;
                                acc += static_cast<double>(x.at(b, ic, iy, ix)) *
                                       static_cast<double>(w.at(oc, ic, ky, kx));
                            }
                    out.at(b, oc, y, xo) = static_cast<T>(acc);
                }
    return out;
}

/// Disjoint-window max by definition.
template <typename T>
nudc::Tensor4<T> maxpool_oracle(const nudc::Tensor4<T>& x) {
    nudc::Tensor4<T> out(x.n, x.c, x.h / 2, x.w / 2);
    for (int b = 0; b < x.n; ++b)
        for (int c = 0; c < x.c; ++c)
            for (int y = 0; y < out.h; ++y)
                for (int xo = 0; xo < out.w; ++xo) {
                    T m = x.at(b, c, 2 * y, 2 * xo);
                    m = std::max(m, x.at(b, c, 2 * y, 2 * xo + 1));
                    m = std::max(m, x.at(b, c, 2 * y + 1, 2 * xo));
                    m = std::max(m, x.at(b, c, 2 * y + 1, 2 * xo + 1));
                    out.at(b, c, y, xo) = m;
                }
    return out;
}

/// The Adam recurrence transcribed directly for one scalar parameter.
struct AdamOracle {
    double lr, beta1, beta2, eps;
    double m = 0.0, v = 0.0;
    long long t = 0;

    double step(double theta, double g) {
        ++t;
        m = beta1 * m + (1 - beta1) * g;
        v = beta2 * v + (1 - beta2) * g * g;
        const double m_hat = m / (1 - std::pow(beta1, static_cast<double>(t)));
        const double v_hat = v / (1 - std::pow(beta2, static_cast<double>(t)));
        return theta - lr * m_hat / (std::sqrt(v_hat) + eps);
    }
};

inline double psnr_oracle(const nudc::Tensor4f& a, const nudc::Tensor4f& b, double range) {
    double se = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        se += d * d;
    }
    const double mse = se / static_cast<double>(a.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(range * range / mse);
}

/// SSIM from the defining windowed statistics, one window at a time.
inline double ssim_oracle(const nudc::Tensor4f& a, const nudc::Tensor4f& b, double range) {
    const int win = 11;
    const double sigma = 1.5, k1 = 0.01, k2 = 0.03;
    std::vector<double> weight(win * win);
    {
        double sum = 0.0;
        for (int y = 0; y < win; ++y)
            for (int x = 0; x < win; ++x) {
                const double dy = y - win / 2, dx = x - win / 2;
                weight[static_cast<std::size_t>(y) * win + x] =
                    std::exp(-(dy * dy + dx * dx) / (2 * sigma * sigma));
                sum += weight[static_cast<std::size_t>(y) * win + x];
            }
        for (auto& v : weight) v /= sum;
    }
    const double c1 = (k1 * range) * (k1 * range), c2 = (k2 * range) * (k2 * range);
    double total = 0.0;
    long long planes = 0;
    for (int n = 0; n < a.n; ++n)
        for (int ch = 0; ch < a.c; ++ch) {
            double acc = 0.0;
            long long count = 0;
            for (int y = 0; y + win <= a.h; ++y)
                for (int x = 0; x + win <= a.w; ++x) {
                    double mu1 = 0, mu2 = 0;
                    for (int wy = 0; wy < win; ++wy)
                        for (int wx = 0; wx < win; ++wx) {
                            const double wv = weight[static_cast<std::size_t>(wy) * win + wx];
                            mu1 += wv * a.at(n, ch, y + wy, x + wx);
                            mu2 += wv * b.at(n, ch, y + wy, x + wx);
                        }
                    double var1 = 0, var2 = 0, cov = 0;
                    for (int wy = 0; wy < win; ++wy)
                        for (int wx = 0; wx < win; ++wx) {
                            const double wv = weight[static_cast<std::size_t>(wy) * win + wx];
                            const double da = a.at(n, ch, y + wy, x + wx) - mu1;
                            const double db = b.at(n, ch, y + wy, x + wx) - mu2;
                            var1 += wv * da * da;
                            var2 += wv * db * db;
                            cov += wv * da * db;
                        }
                    acc += ((2 * mu1 * mu2 + c1) * (2 * cov + c2)) /
                           ((mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2));
                    ++count;
                }
            total += acc / static_cast<double>(count);
            ++planes;
        }
    return total / static_cast<double>(planes);
}

/// Reflect-boundary blur by definition (for the simulator check).
inline nudc::Tensor4f blur_oracle(const nudc::Tensor4f& x, const nudc::sim::Kernel2d& k) {
    auto mirror = [](int i, int n) {
        if (n == 1) return 0;
        int p = i % (2 * n);
        if (p < 0) p += 2 * n;
        return p < n ? p : 2 * n - 1 - p;
    };
    nudc::Tensor4f out(x.n, x.c, x.h, x.w);
    for (int b = 0; b < x.n; ++b)
        for (int c = 0; c < x.c; ++c)
            for (int y = 0; y < x.h; ++y)
                for (int xo = 0; xo < x.w; ++xo) {
                    double acc = 0.0;
                    for (int dy = -k.radius; dy <= k.radius; ++dy)
                        for (int dx = -k.radius; dx <= k.radius; ++dx)
                            acc += k.at(dy, dx) *
                                   x.at(b, c, mirror(y + dy, x.h), mirror(xo + dx, x.w));
                    out.at(b, c, y, xo) = static_cast<float>(std::clamp(acc, 0.0, 1.0));
                }
    return out;
}

template <typename T>
double max_abs_diff(const nudc::Tensor4<T>& a, const nudc::Tensor4<T>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(static_cast<double>(a.data[i]) -
                                         static_cast<double>(b.data[i])));
    return worst;
}

template <typename T>
bool bitwise_equal(const nudc::Tensor4<T>& a, const nudc::Tensor4<T>& b) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.data[i] != b.data[i]) return false;
    return true;
}

} // namespace testutil

#endif // NUDC_TESTS_TESTUTIL_HPP
