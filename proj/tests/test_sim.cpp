#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nudc/io/img16.hpp"
#include "nudc/metrics/metrics.hpp"
#include "nudc/sim/dataset.hpp"
#include "nudc/sim/defocus.hpp"
#include "nudc/sim/phantom.hpp"
#include "nudc/sim/psf.hpp"
#include "testutil.hpp"

using namespace nudc;
using namespace nudc::sim;

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "nudc_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE_BEGIN("sim");

TEST_CASE("gaussian_psf: in-focus limit is the 1x1 identity kernel") {
    PSFSpec spec;
    spec.z = 0.0;
    auto k = gaussian_psf(spec);
    CHECK(k.radius == 0);
    REQUIRE(k.weights.size() == 1);
    CHECK(k.weights[0] == 1.0);
}

TEST_CASE("gaussian_psf: sigma=1 radius=1 matches the evaluated Gaussian") {
    PSFSpec spec;
    spec.z = 1.0;
    spec.sigma_per_um = 1.0;
    spec.radius = 1;
    auto k = gaussian_psf(spec);
    REQUIRE(k.extent() == 3);
    CHECK(k.at(0, 0) == doctest::Approx(0.2042).epsilon(1e-3));
    CHECK(k.at(0, 1) == doctest::Approx(0.1238).epsilon(1e-3));
    CHECK(k.at(1, 1) == doctest::Approx(0.0751).epsilon(1e-3));
}

TEST_CASE("gaussian_psf: kernels are normalized and fully symmetric") {
    for (double z : {0.5, 3.0, 10.0, 25.0, -12.0}) {
        PSFSpec spec;
        spec.z = z;
        spec.sigma_per_um = 0.21;
        auto k = gaussian_psf(spec);
        double sum = 0;
        for (double w : k.weights) {
            CHECK(w >= 0.0);
            sum += w;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        for (int dy = -k.radius; dy <= k.radius; ++dy)
            for (int dx = -k.radius; dx <= k.radius; ++dx) {
                CHECK(k.at(dy, dx) == k.at(-dy, dx));  // reflection
                CHECK(k.at(dy, dx) == k.at(dx, dy));   // 90-degree rotation
            }
    }
}

TEST_CASE("gaussian_psf: non-positive sigma_per_um is a configuration error") {
    PSFSpec spec;
    spec.sigma_per_um = 0.0;
    CHECK_THROWS_AS(gaussian_psf(spec), config_error);
}

TEST_CASE("apply_defocus: identity kernel with zero noise is exact") {
    auto x = testutil::random_tensor<float>(1, 2, 12, 12, 7, 0.0, 1.0);
    Kernel2d identity{0, {1.0}};
    auto y = apply_defocus(x, identity, 0.0, 1);
    CHECK(testutil::bitwise_equal(x, y));
}

TEST_CASE("apply_defocus: constant image is fixed under any normalized kernel") {
    Tensor4f x(1, 1, 10, 10, 0.31f);
    PSFSpec spec;
    spec.z = 8.0;
    spec.sigma_per_um = 0.25;
    auto y = apply_defocus(x, gaussian_psf(spec), 0.0, 1);
    for (float v : y.data) CHECK(v == doctest::Approx(0.31f).epsilon(1e-6));
}

TEST_CASE("apply_defocus: matches the brute-force reflect convolution oracle") {
    auto x = testutil::random_tensor<float>(1, 2, 16, 16, 8, 0.0, 1.0);
    PSFSpec spec;
    spec.z = 10.0;
    spec.sigma_per_um = 0.2; // sigma = 2
    auto k = gaussian_psf(spec);
    auto got = apply_defocus(x, k, 0.0, 1);
    auto want = testutil::blur_oracle(x, k);
    CHECK(testutil::max_abs_diff(got, want) < 1e-6);
}

TEST_CASE("apply_defocus: noise is deterministic per seed and clipped") {
    auto x = testutil::random_tensor<float>(1, 1, 8, 8, 9, 0.0, 1.0);
    Kernel2d identity{0, {1.0}};
    auto a = apply_defocus(x, identity, 0.05, 123);
    auto b = apply_defocus(x, identity, 0.05, 123);
    auto c = apply_defocus(x, identity, 0.05, 124);
    CHECK(testutil::bitwise_equal(a, b));
    CHECK_FALSE(testutil::bitwise_equal(a, c));
    for (float v : a.data) {
        CHECK(v >= 0.0f);
        CHECK(v <= 1.0f);
    }
}

TEST_CASE("apply_defocus: energy preserved under reflect padding, zero noise") {
    auto x = testutil::random_tensor<float>(1, 2, 20, 20, 10, 0.2, 0.8);
    PSFSpec spec;
    spec.z = 12.0;
    spec.sigma_per_um = 0.2;
    auto y = apply_defocus(x, gaussian_psf(spec), 0.0, 1);
    double mean_x = 0, mean_y = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x.data[i];
        mean_y += y.data[i];
    }
    mean_x /= static_cast<double>(x.size());
    mean_y /= static_cast<double>(y.size());
    CHECK(std::abs(mean_x - mean_y) < 1e-6);
}

TEST_CASE("phantom_image: empty scene is a uniform background") {
    PhantomSpec spec;
    spec.spot_count_min = spec.spot_count_max = 0;
    spec.filament_count_min = spec.filament_count_max = 0;
    spec.background = 0.07;
    auto img = phantom_image(spec, 3);
    CHECK(img.c == 2);
    for (float v : img.data) CHECK(v == doctest::Approx(0.07f).epsilon(1e-6));
}

TEST_CASE("phantom_image: deterministic per seed, distinct across seeds") {
    PhantomSpec spec;
    auto a = phantom_image(spec, 11);
    auto b = phantom_image(spec, 11);
    auto c = phantom_image(spec, 12);
    CHECK(testutil::bitwise_equal(a, b));
    CHECK_FALSE(testutil::bitwise_equal(a, c));
    for (float v : a.data) {
        CHECK(v >= 0.0f);
        CHECK(v <= 1.0f);
    }
}

TEST_CASE("phantom_image: channels correlate but differ") {
    PhantomSpec spec;
    auto img = phantom_image(spec, 21);
    double same = 0;
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x)
            if (img.at(0, 0, y, x) == img.at(0, 1, y, x)) same += 1;
    CHECK(same < 0.9 * img.h * img.w); // not identical planes
}

TEST_CASE("render_spot: analytic Gaussian bump plus background") {
    Tensor4f img(1, 2, 32, 32);
    render_spot(img, 0, 14.0, 19.0, 2.0, 0.8);
    const double background = 0.05;
    for (auto& v : img.data) v += static_cast<float>(background);
    for (auto [y, x] : {std::pair{14, 19}, {12, 19}, {14, 23}, {20, 25}, {0, 0}}) {
        const double d2 = (y - 14.0) * (y - 14.0) + (x - 19.0) * (x - 19.0);
        const double want = background + 0.8 * std::exp(-d2 / (2.0 * 2.0 * 2.0));
        CHECK(img.at(0, 0, y, x) == doctest::Approx(want).epsilon(1e-5));
    }
}

TEST_CASE("degradation is monotone: PSNR non-increasing in |z|") {
    PhantomSpec pspec;
    auto sharp = phantom_image(pspec, 31);
    PSFSpec psf;
    psf.sigma_per_um = 0.2;
    double prev = std::numeric_limits<double>::infinity();
    for (double z : {0.0, 4.0, 8.0, 16.0, 24.0}) {
        PSFSpec spec = psf;
        spec.z = z;
        auto blurred = apply_defocus(sharp, gaussian_psf(spec), 0.0, 1);
        const double p = metrics::psnr(blurred, sharp, 1.0);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("gen_dataset: counting, in-focus pairs, manifest round-trip") {
    auto dir = temp_dir("gen_small");
    PhantomSpec phantom;
    phantom.height = 32;
    phantom.width = 32;
    PSFSpec psf;
    psf.sigma_per_um = 0.2;
    auto manifest = gen_dataset(phantom, {10.0, 16.0}, psf, 0.0, 2, dir, 77);
    CHECK(manifest.records.size() == 4);
    for (const auto& rec : manifest.records) {
        CHECK(std::filesystem::exists(dir / rec.sharp_path));
        CHECK(std::filesystem::exists(dir / rec.blurred_path));
    }

    auto back = read_manifest(dir / "manifest.tsv");
    CHECK(back.records.size() == 4);
    CHECK(back.master_seed == 77);
    CHECK(back.records[0].z == 10.0);

    // z = 0 with zero noise degenerates to the sharp image
    auto dir0 = temp_dir("gen_zero");
    auto m0 = gen_dataset(phantom, {0.0}, psf, 0.0, 1, dir0, 78);
    auto sharp = io::read_img16(dir0 / m0.records[0].sharp_path);
    auto blur = io::read_img16(dir0 / m0.records[0].blurred_path);
    CHECK(testutil::bitwise_equal(sharp, blur));
}

TEST_CASE("gen_dataset: regeneration from the same master seed is bit-identical") {
    PhantomSpec phantom;
    phantom.height = 24;
    phantom.width = 24;
    PSFSpec psf;
    psf.sigma_per_um = 0.15;
    auto dir_a = temp_dir("gen_a");
    auto dir_b = temp_dir("gen_b");
    auto ma = gen_dataset(phantom, {6.0, 12.0}, psf, 0.004, 3, dir_a, 99);
    auto mb = gen_dataset(phantom, {6.0, 12.0}, psf, 0.004, 3, dir_b, 99);
    REQUIRE(ma.records.size() == mb.records.size());
    for (std::size_t i = 0; i < ma.records.size(); ++i) {
        CHECK(slurp(dir_a / ma.records[i].sharp_path) == slurp(dir_b / mb.records[i].sharp_path));
        CHECK(slurp(dir_a / ma.records[i].blurred_path) ==
              slurp(dir_b / mb.records[i].blurred_path));
    }
    CHECK(slurp(dir_a / "manifest.tsv") == slurp(dir_b / "manifest.tsv"));
}

TEST_SUITE_END();
