#ifndef NUDC_NN_GRAD_CHECK_HPP
#define NUDC_NN_GRAD_CHECK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "nudc/rng.hpp"
#include "nudc/tensor.hpp"

namespace nudc::nn {

struct GradCheckOptions {
    double eps = 1e-5;
    /// 0 checks every coordinate; otherwise a seeded random subset of at
    /// least this many coordinates (all of them when the tensor is smaller).
    int max_coords = 0;
    std::uint64_t seed = 0x6e75646351ull;
};

/// Central finite differences against an analytic gradient, in double.
/// `storage` is the tensor the scalar function reads from (an input or a
/// parameter value); `analytic` is dL/dstorage at the current point; `loss`
/// re-evaluates the scalar at the (perturbed) current point. Returns the
/// worst relative error max|a - n| / max(|a|, |n|, 1e-8) over the checked
/// coordinates. Thresholds are the caller's business.
inline double grad_check(Tensor4<double>& storage, const Tensor4<double>& analytic,
                         const std::function<double()>& loss,
                         const GradCheckOptions& opt = {}) {
    if (!storage.same_shape(analytic))
        throw contract_error("grad_check: analytic gradient shape " + analytic.shape_str() +
                             " does not match " + storage.shape_str());
    std::vector<std::size_t> coords(storage.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (opt.max_coords > 0 && coords.size() > static_cast<std::size_t>(opt.max_coords)) {
        Rng rng(opt.seed);
        for (std::size_t i = 0; i < static_cast<std::size_t>(opt.max_coords); ++i) {
            std::size_t j = static_cast<std::size_t>(
                rng.uniform_int(static_cast<long long>(i), static_cast<long long>(coords.size()) - 1));
            std::swap(coords[i], coords[j]);
        }
        coords.resize(static_cast<std::size_t>(opt.max_coords));
    }

    double worst = 0.0;
    for (std::size_t idx : coords) {
        const double saved = storage.data[idx];
        storage.data[idx] = saved + opt.eps;
        const double f_plus = loss();
        storage.data[idx] = saved - opt.eps;
        const double f_minus = loss();
        storage.data[idx] = saved;
        const double numeric = (f_plus - f_minus) / (2.0 * opt.eps);
        const double a = analytic.data[idx];
        const double rel = std::abs(a - numeric) /
                           std::max({std::abs(a), std::abs(numeric), 1e-8});
        worst = std::max(worst, rel);
    }
    return worst;
}

} // namespace nudc::nn

#endif // NUDC_NN_GRAD_CHECK_HPP
