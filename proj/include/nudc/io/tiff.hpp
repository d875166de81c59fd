#ifndef NUDC_IO_TIFF_HPP
#define NUDC_IO_TIFF_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nudc/io/img16.hpp"

namespace nudc::io {

/// Imports the dataset's TIFF shape: classic (non-Big) TIFF, 16-bit
/// grayscale samples, strip-organized, compression none or LZW, optional
/// horizontal predictor, 1 or 2 samples per pixel (chunky or planar).
/// A second single-channel page is read as channel 2. Anything else is an
/// unsupported-format error naming the offending tag.
Img16 import_tiff(const std::filesystem::path& path);

/// TIFF-variant LZW (MSB-first bit packing, clear code 256, early code
/// width change). expected_out is the decoded byte count from the strip
/// layout; a stream that disagrees is a decode error.
std::vector<std::uint8_t> lzw_decode(const std::uint8_t* src, std::size_t n,
                                     std::size_t expected_out);

} // namespace nudc::io

#endif // NUDC_IO_TIFF_HPP
