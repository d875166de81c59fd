#include "nudc/io/patchify.hpp"

namespace nudc::io {

namespace {
constexpr int kFullW = 696, kFullH = 520;
constexpr int kPatchW = kFullW / 2, kPatchH = kFullH / 2;
} // namespace

std::array<Tensor4f, 4> patchify(const Tensor4f& image) {
    if (image.n != 1 || image.h != kFullH || image.w != kFullW)
        throw shape_error("patchify: expected a single 696x520 image, got " + image.shape_str());
    std::array<Tensor4f, 4> out;
    for (int q = 0; q < 4; ++q) {
        const int oy = (q / 2) * kPatchH;
        const int ox = (q % 2) * kPatchW;
        Tensor4f patch(1, image.c, kPatchH, kPatchW);
        for (int ch = 0; ch < image.c; ++ch)
            for (int y = 0; y < kPatchH; ++y)
                for (int x = 0; x < kPatchW; ++x)
                    patch.at(0, ch, y, x) = image.at(0, ch, oy + y, ox + x);
        out[static_cast<std::size_t>(q)] = std::move(patch);
    }
    return out;
}

Tensor4f unpatchify(const std::array<Tensor4f, 4>& patches) {
    for (const auto& p : patches)
        if (p.n != 1 || p.h != kPatchH || p.w != kPatchW)
            throw shape_error("unpatchify: expected 348x260 patches, got " + p.shape_str());
    const int c = patches[0].c;
    Tensor4f out(1, c, kFullH, kFullW);
    for (int q = 0; q < 4; ++q) {
        const int oy = (q / 2) * kPatchH;
        const int ox = (q % 2) * kPatchW;
        const auto& p = patches[static_cast<std::size_t>(q)];
        if (p.c != c) throw shape_error("unpatchify: channel mismatch across patches");
        for (int ch = 0; ch < c; ++ch)
            for (int y = 0; y < kPatchH; ++y)
                for (int x = 0; x < kPatchW; ++x)
                    out.at(0, ch, oy + y, ox + x) = p.at(0, ch, y, x);
    }
    return out;
}

} // namespace nudc::io
