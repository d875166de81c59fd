#ifndef NUDC_NN_INIT_HPP
#define NUDC_NN_INIT_HPP

#include <cmath>
#include <cstdint>

#include "nudc/rng.hpp"
#include "nudc/tensor.hpp"

namespace nudc::nn {

/// He initialization: zero-mean normal with variance 2/fan_in, where fan_in
/// is the per-output receptive field (c * h * w of the weight shape).
/// Deterministic for a fixed (shape, seed).
template <typename T>
Tensor4<T> he_init(int n, int c, int h, int w, std::uint64_t seed) {
    long long fan_in = static_cast<long long>(c) * h * w;
    if (fan_in <= 0)
        throw config_error("he_init: zero fan-in for shape (" + std::to_string(n) + "," +
                           std::to_string(c) + "," + std::to_string(h) + "," +
                           std::to_string(w) + ")");
    double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    Rng rng(seed);
    Tensor4<T> out(n, c, h, w);
    for (auto& v : out.data)
        v = static_cast<T>(rng.normal() * stddev);
    return out;
}

} // namespace nudc::nn

#endif // NUDC_NN_INIT_HPP
