#ifndef NUDC_IO_IMG16_HPP
#define NUDC_IO_IMG16_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nudc/tensor.hpp"

namespace nudc::io {

/// 16-bit channel-planar raster, the framework's canonical image payload.
struct Img16 {
    std::uint32_t width = 0, height = 0, channels = 0;
    std::vector<std::uint16_t> samples;

    std::size_t expected_samples() const {
        return static_cast<std::size_t>(width) * height * channels;
    }
};

/// On-disk img16 container: magic "IM16", u32le version=1, u32le width,
/// u32le height, u32le channels, then width*height*channels u16le samples,
/// channel-planar.
void store_img16(const Img16& img, const std::filesystem::path& path);
Img16 load_img16(const std::filesystem::path& path);

/// [0,1] reals -> u16 with round-half-up; input outside [0,1] is clamped.
Img16 quantize_u16(const Tensor4f& x);

/// u16 -> sample/65535.0 as a (1, c, h, w) tensor.
Tensor4f normalize_u16(const Img16& img);

/// Convenience: quantize + store / load + normalize. Round-trip error is
/// at most 1/65535 per sample.
void write_img16(const Tensor4f& x, const std::filesystem::path& path);
Tensor4f read_img16(const std::filesystem::path& path);

} // namespace nudc::io

#endif // NUDC_IO_IMG16_HPP
