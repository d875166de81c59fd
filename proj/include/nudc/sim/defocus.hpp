#ifndef NUDC_SIM_DEFOCUS_HPP
#define NUDC_SIM_DEFOCUS_HPP

#include <cstdint>

#include "nudc/sim/psf.hpp"
#include "nudc/tensor.hpp"

namespace nudc::sim {

/// Image formation: per-channel convolution with the blur kernel under
/// reflect boundary handling, plus zero-mean Gaussian noise of std
/// noise_sigma, clipped to [0, 1]. Deterministic for a fixed seed.
/// Accumulation runs in double regardless of storage precision.
Tensor4f apply_defocus(const Tensor4f& sharp, const Kernel2d& kernel,
                       double noise_sigma, std::uint64_t seed);

} // namespace nudc::sim

#endif // NUDC_SIM_DEFOCUS_HPP
