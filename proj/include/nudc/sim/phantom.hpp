#ifndef NUDC_SIM_PHANTOM_HPP
#define NUDC_SIM_PHANTOM_HPP

#include <cstdint>

#include "nudc/tensor.hpp"

namespace nudc::sim {

/// Two-channel fluorescence-like test scene: channel 0 carries bright
/// round spots (nuclei-like), channel 1 carries curved filaments anchored
/// at the spots plus dimmer spot echoes (cytoskeleton-like), so the
/// channels are structurally correlated but not identical.
struct PhantomSpec {
    int height = 96;
    int width = 96;
    int spot_count_min = 6;
    int spot_count_max = 14;
    double spot_sigma_min = 1.5;
    double spot_sigma_max = 4.0;
    int filament_count_min = 2;
    int filament_count_max = 5;
    double intensity_min = 0.35;
    double intensity_max = 0.9;
    double background = 0.04;

    void validate() const;
};

/// Adds an isotropic Gaussian bump intensity * exp(-d^2 / (2 sigma^2))
/// to one channel, evaluated at every pixel (no cutoff).
void render_spot(Tensor4f& img, int channel, double cy, double cx, double sigma,
                 double intensity);

/// Adds a smooth constant-intensity tube along the quadratic Bezier curve
/// (p0, pc, p1); profile falls off as a Gaussian of the distance to the
/// sampled curve.
void render_filament(Tensor4f& img, int channel, double y0, double x0, double yc,
                     double xc, double y1, double x1, double thickness_sigma,
                     double intensity);

/// Deterministic per seed. Output values lie in [0, 1].
Tensor4f phantom_image(const PhantomSpec& spec, std::uint64_t seed);

} // namespace nudc::sim

#endif // NUDC_SIM_PHANTOM_HPP
