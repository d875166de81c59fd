// Rough conv throughput probe used to size the synthetic experiments.
#include <chrono>
#include <cstdio>

#include "nudc/nn/conv2d.hpp"
#include "nudc/parallel.hpp"
#include "nudc/rng.hpp"

using namespace nudc;

namespace {

Tensor4f randf(int n, int c, int h, int w, std::uint64_t seed) {
    Rng rng(seed);
    Tensor4f t(n, c, h, w);
    for (auto& v : t.data) v = static_cast<float>(rng.uniform(-1, 1));
    return t;
}

double bench(int n, int cin, int cout, int hw, int reps) {
    auto x = randf(n, cin, hw, hw, 1);
    auto w = randf(cout, cin, 3, 3, 2);
    auto b = randf(1, cout, 1, 1, 3);
    auto t0 = std::chrono::steady_clock::now();
    float sink = 0;
    Tensor4f gx, gw = Tensor4f::zeros_like(w), gb = Tensor4f::zeros_like(b);
    for (int r = 0; r < reps; ++r) {
        auto y = nn::conv2d_forward(x, w, b, 1, 1);
        nn::conv2d_backward(x, w, y, 1, 1, &gx, &gw, &gb);
        sink += y.data[0];
    }
    auto t1 = std::chrono::steady_clock::now();
    double sec = std::chrono::duration<double>(t1 - t0).count();
    double macs = 3.0 * 2.0 * n * cout * hw * hw * cin * 9 * reps; // fwd + 2 bwd passes
    std::printf("n=%d c=%d->%d %dx%d: %.2f GMAC/s (sink %.3f)\n", n, cin, cout, hw, hw,
                macs / sec / 2e9, sink);
    return macs / sec / 2e9;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) set_compute_threads(std::atoi(argv[1]));
    std::printf("threads: %d\n", compute_threads());
    bench(8, 8, 8, 96, 20);
    bench(8, 16, 16, 48, 40);
    bench(8, 32, 32, 24, 80);
    return 0;
}
