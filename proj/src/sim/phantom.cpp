#include "nudc/sim/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nudc/rng.hpp"

namespace nudc::sim {

void PhantomSpec::validate() const {
    if (height < 8 || width < 8)
        throw config_error("PhantomSpec: image must be at least 8x8");
    if (spot_count_min < 0 || spot_count_max < spot_count_min)
        throw config_error("PhantomSpec: bad spot_count range");
    if (filament_count_min < 0 || filament_count_max < filament_count_min)
        throw config_error("PhantomSpec: bad filament_count range");
    if (spot_sigma_min <= 0 || spot_sigma_max < spot_sigma_min)
        throw config_error("PhantomSpec: bad spot_sigma range");
    if (intensity_min < 0 || intensity_max > 1 || intensity_max < intensity_min)
        throw config_error("PhantomSpec: intensity range must lie in [0, 1]");
    if (background < 0 || background > 1)
        throw config_error("PhantomSpec: background must lie in [0, 1]");
}

void render_spot(Tensor4f& img, int channel, double cy, double cx, double sigma,
                 double intensity) {
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x) {
            double d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
            img.at(0, channel, y, x) += static_cast<float>(intensity * std::exp(-d2 * inv2s2));
        }
}

void render_filament(Tensor4f& img, int channel, double y0, double x0, double yc,
                     double xc, double y1, double x1, double thickness_sigma,
                     double intensity) {
    // sample the curve densely, then shade each pixel by its distance to
    // the nearest sample
    const double chord = std::hypot(y1 - y0, x1 - x0) + std::hypot(yc - y0, xc - x0) +
                         std::hypot(y1 - yc, x1 - xc);
    const int steps = std::max(24, static_cast<int>(chord * 2.0));
    std::vector<double> sy(static_cast<std::size_t>(steps) + 1);
    std::vector<double> sx(static_cast<std::size_t>(steps) + 1);
    for (int s = 0; s <= steps; ++s) {
        double t = static_cast<double>(s) / steps;
        double a = (1 - t) * (1 - t), b = 2 * (1 - t) * t, c = t * t;
        sy[static_cast<std::size_t>(s)] = a * y0 + b * yc + c * y1;
        sx[static_cast<std::size_t>(s)] = a * x0 + b * xc + c * x1;
    }
    const double inv2s2 = 1.0 / (2.0 * thickness_sigma * thickness_sigma);
    const double cutoff = 9.0 * thickness_sigma * thickness_sigma; // exp(-4.5) ~ 0.011
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x) {
            double best = cutoff;
            for (std::size_t s = 0; s < sy.size(); ++s) {
                double d2 = (y - sy[s]) * (y - sy[s]) + (x - sx[s]) * (x - sx[s]);
                best = std::min(best, d2);
            }
            if (best < cutoff)
                img.at(0, channel, y, x) +=
                    static_cast<float>(intensity * std::exp(-best * inv2s2));
        }
}

Tensor4f phantom_image(const PhantomSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    Tensor4f img(1, 2, spec.height, spec.width);

    struct Spot {
        double cy, cx, sigma, intensity;
    };
    std::vector<Spot> spots;
    const int n_spots = static_cast<int>(rng.uniform_int(spec.spot_count_min, spec.spot_count_max));
    spots.reserve(static_cast<std::size_t>(n_spots));
    for (int s = 0; s < n_spots; ++s) {
        Spot sp;
        sp.cy = rng.uniform(0.0, spec.height - 1.0);
        sp.cx = rng.uniform(0.0, spec.width - 1.0);
        sp.sigma = rng.uniform(spec.spot_sigma_min, spec.spot_sigma_max);
        sp.intensity = rng.uniform(spec.intensity_min, spec.intensity_max);
        spots.push_back(sp);
    }

    for (const auto& sp : spots) {
        render_spot(img, 0, sp.cy, sp.cx, sp.sigma, sp.intensity);
        // dim, slightly wider echo on the actin channel
        render_spot(img, 1, sp.cy, sp.cx, sp.sigma * 1.4, sp.intensity * 0.25);
    }

    const int n_fil =
        static_cast<int>(rng.uniform_int(spec.filament_count_min, spec.filament_count_max));
    for (int f = 0; f < n_fil; ++f) {
        double y0, x0, y1, x1;
        if (!spots.empty()) {
            // anchor near two spots so channels correlate
            const auto& a = spots[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<long long>(spots.size()) - 1))];
            const auto& b = spots[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<long long>(spots.size()) - 1))];
            y0 = a.cy + rng.uniform(-4.0, 4.0);
            x0 = a.cx + rng.uniform(-4.0, 4.0);
            y1 = b.cy + rng.uniform(-4.0, 4.0);
            x1 = b.cx + rng.uniform(-4.0, 4.0);
        } else {
            y0 = rng.uniform(0.0, spec.height - 1.0);
            x0 = rng.uniform(0.0, spec.width - 1.0);
            y1 = rng.uniform(0.0, spec.height - 1.0);
            x1 = rng.uniform(0.0, spec.width - 1.0);
        }
        double yc = 0.5 * (y0 + y1) + rng.uniform(-0.25, 0.25) * (spec.height / 2.0);
        double xc = 0.5 * (x0 + x1) + rng.uniform(-0.25, 0.25) * (spec.width / 2.0);
        double thickness = rng.uniform(0.8, 1.6);
        double intensity = rng.uniform(spec.intensity_min, spec.intensity_max);
        render_filament(img, 1, y0, x0, yc, xc, y1, x1, thickness, intensity);
    }

    for (auto& v : img.data)
        v = std::clamp(v + static_cast<float>(spec.background), 0.0f, 1.0f);
    return img;
}

} // namespace nudc::sim
