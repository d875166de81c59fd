#include "nudc/metrics/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace nudc::metrics {

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

const std::vector<double>& gaussian_window() {
    static const std::vector<double> w = [] {
        std::vector<double> out(kWindow * kWindow);
        const int r = kWindow / 2;
        double sum = 0.0;
        for (int y = 0; y < kWindow; ++y)
            for (int x = 0; x < kWindow; ++x) {
                double d2 = (y - r) * (y - r) + (x - r) * (x - r);
                double v = std::exp(-d2 / (2.0 * kWindowSigma * kWindowSigma));
                out[static_cast<std::size_t>(y) * kWindow + x] = v;
                sum += v;
            }
        for (auto& v : out) v /= sum;
        return out;
    }();
    return w;
}

void require_same_shape(const Tensor4f& a, const Tensor4f& b, const char* who) {
    if (!a.same_shape(b))
        throw contract_error(std::string(who) + ": shape mismatch " + a.shape_str() + " vs " +
                             b.shape_str());
}

} // namespace

double psnr(const Tensor4f& a, const Tensor4f& b, double data_range) {
    require_same_shape(a, b, "psnr");
    if (data_range <= 0.0) throw contract_error("psnr: data_range must be > 0");
    if (a.size() == 0) throw contract_error("psnr: empty tensors");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        acc += d * d;
    }
    const double mse = acc / static_cast<double>(a.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(data_range * data_range / mse);
}

double ssim(const Tensor4f& a, const Tensor4f& b, double data_range) {
    require_same_shape(a, b, "ssim");
    if (data_range <= 0.0) throw contract_error("ssim: data_range must be > 0");
    if (a.h < kWindow || a.w < kWindow)
        throw contract_error("ssim: image " + a.shape_str() + " smaller than the " +
                             std::to_string(kWindow) + "x" + std::to_string(kWindow) + " window");

    const auto& win = gaussian_window();
    const double c1 = (kK1 * data_range) * (kK1 * data_range);
    const double c2 = (kK2 * data_range) * (kK2 * data_range);
    const int oh = a.h - kWindow + 1;
    const int ow = a.w - kWindow + 1;

    double total = 0.0;
    long long planes = 0;
    for (int n = 0; n < a.n; ++n) {
        for (int ch = 0; ch < a.c; ++ch) {
            double plane_acc = 0.0;
            for (int y = 0; y < oh; ++y) {
                for (int x = 0; x < ow; ++x) {
                    double mu1 = 0, mu2 = 0, s11 = 0, s22 = 0, s12 = 0;
                    for (int wy = 0; wy < kWindow; ++wy) {
                        const float* ra = &a.data[a.index(n, ch, y + wy, x)];
                        const float* rb = &b.data[b.index(n, ch, y + wy, x)];
                        const double* wrow = &win[static_cast<std::size_t>(wy) * kWindow];
                        for (int wx = 0; wx < kWindow; ++wx) {
                            const double va = ra[wx], vb = rb[wx];
                            const double wv = wrow[wx];
                            mu1 += wv * va;
                            mu2 += wv * vb;
                            s11 += wv * va * va;
                            s22 += wv * vb * vb;
                            s12 += wv * va * vb;
                        }
                    }
                    const double var1 = s11 - mu1 * mu1;
                    const double var2 = s22 - mu2 * mu2;
                    const double cov = s12 - mu1 * mu2;
                    plane_acc += ((2 * mu1 * mu2 + c1) * (2 * cov + c2)) /
                                 ((mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2));
                }
            }
            total += plane_acc / (static_cast<double>(oh) * ow);
            ++planes;
        }
    }
    return total / static_cast<double>(planes);
}

} // namespace nudc::metrics
