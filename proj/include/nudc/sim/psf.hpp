#ifndef NUDC_SIM_PSF_HPP
#define NUDC_SIM_PSF_HPP

#include <vector>

#include "nudc/errors.hpp"

namespace nudc::sim {

/// z-parameterized Gaussian blur kernel description. The kernel width is
/// sigma_per_um * |z| pixels; below min_sigma the kernel degenerates to
/// the identity (in-focus limit). This is a simulation surrogate, not an
/// instrument PSF; z uses the simulator's own scale.
struct PSFSpec {
    double z = 0.0;            // micrometers from the focal plane
    double sigma_per_um = 0.15;
    int radius = -1;           // kernel half-width; -1 derives ceil(3 sigma)
    double min_sigma = 0.05;
};

struct Kernel2d {
    int radius = 0;
    std::vector<double> weights; // (2r+1)^2 row-major, sums to 1

    int extent() const { return 2 * radius + 1; }
    double at(int dy, int dx) const {
        return weights[static_cast<std::size_t>(dy + radius) * extent() + (dx + radius)];
    }
    bool identity() const { return radius == 0; }
};

/// Normalized Gaussian kernel for the given defocus description.
Kernel2d gaussian_psf(const PSFSpec& spec);

} // namespace nudc::sim

#endif // NUDC_SIM_PSF_HPP
