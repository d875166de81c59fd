#ifndef NUDC_METRICS_METRICS_HPP
#define NUDC_METRICS_METRICS_HPP

#include "nudc/tensor.hpp"

namespace nudc::metrics {

/// Peak signal-to-noise ratio in dB: 10 log10(range^2 / MSE), MSE averaged
/// over every sample and channel. Identical inputs give +infinity.
double psnr(const Tensor4f& a, const Tensor4f& b, double data_range);

/// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03; computed over valid window positions per channel, averaged
/// across channels and batch items. Symmetric in (a, b).
double ssim(const Tensor4f& a, const Tensor4f& b, double data_range);

} // namespace nudc::metrics

#endif // NUDC_METRICS_METRICS_HPP
