#include "nudc/sim/psf.hpp"

#include <cmath>

namespace nudc::sim {

Kernel2d gaussian_psf(const PSFSpec& spec) {
    if (spec.sigma_per_um <= 0.0)
        throw config_error("gaussian_psf: sigma_per_um must be > 0");
    const double sigma = spec.sigma_per_um * std::abs(spec.z);

    Kernel2d k;
    if (sigma < spec.min_sigma) {
        k.radius = 0;
        k.weights = {1.0};
        return k;
    }

    k.radius = spec.radius >= 0 ? spec.radius
                                : static_cast<int>(std::ceil(3.0 * sigma));
    if (k.radius < 1) k.radius = 1;
    const int e = k.extent();
    k.weights.resize(static_cast<std::size_t>(e) * e);

    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    double sum = 0.0;
    for (int dy = -k.radius; dy <= k.radius; ++dy)
        for (int dx = -k.radius; dx <= k.radius; ++dx) {
            double v = std::exp(-(dx * dx + dy * dy) * inv2s2);
            k.weights[static_cast<std::size_t>(dy + k.radius) * e + (dx + k.radius)] = v;
            sum += v;
        }
    for (double& v : k.weights) v /= sum;
    return k;
}

} // namespace nudc::sim
