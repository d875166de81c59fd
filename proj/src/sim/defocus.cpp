#include "nudc/sim/defocus.hpp"

#include <algorithm>

#include "nudc/nn/pad.hpp"
#include "nudc/rng.hpp"

namespace nudc::sim {

Tensor4f apply_defocus(const Tensor4f& sharp, const Kernel2d& kernel,
                       double noise_sigma, std::uint64_t seed) {
    if (noise_sigma < 0.0)
        throw config_error("apply_defocus: noise_sigma must be >= 0");
    Tensor4f out(sharp.n, sharp.c, sharp.h, sharp.w);
    const int r = kernel.radius;

    for (int b = 0; b < sharp.n; ++b) {
        for (int ch = 0; ch < sharp.c; ++ch) {
            const float* in_plane = &sharp.data[sharp.index(b, ch, 0, 0)];
            float* out_plane = &out.data[out.index(b, ch, 0, 0)];
            for (int y = 0; y < sharp.h; ++y) {
                for (int x = 0; x < sharp.w; ++x) {
                    double acc = 0.0;
                    for (int dy = -r; dy <= r; ++dy) {
                        const int sy = nn::reflect_index(y + dy, sharp.h);
                        const float* row = in_plane + static_cast<std::size_t>(sy) * sharp.w;
                        for (int dx = -r; dx <= r; ++dx)
                            acc += kernel.at(dy, dx) * row[nn::reflect_index(x + dx, sharp.w)];
                    }
                    out_plane[static_cast<std::size_t>(y) * sharp.w + x] = static_cast<float>(acc);
                }
            }
        }
    }

    if (noise_sigma > 0.0) {
        Rng rng(seed);
        for (auto& v : out.data)
            v = static_cast<float>(v + rng.normal() * noise_sigma);
    }
    for (auto& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
    return out;
}

} // namespace nudc::sim
