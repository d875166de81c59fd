#ifndef NUDC_IO_PATCHIFY_HPP
#define NUDC_IO_PATCHIFY_HPP

#include <array>

#include "nudc/tensor.hpp"

namespace nudc::io {

/// Quadrant segmentation of the dataset's 696x520 frames into four
/// non-overlapping 348x260 patches, row-major quadrant order (top-left,
/// top-right, bottom-left, bottom-right).
std::array<Tensor4f, 4> patchify(const Tensor4f& image);

/// Inverse of patchify; bit-exact reassembly.
Tensor4f unpatchify(const std::array<Tensor4f, 4>& patches);

} // namespace nudc::io

#endif // NUDC_IO_PATCHIFY_HPP
