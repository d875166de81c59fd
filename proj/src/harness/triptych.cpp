#include "nudc/harness/triptych.hpp"

#include <algorithm>
#include <fstream>

#include "nudc/harness/checkpoint.hpp"
#include "nudc/io/img16.hpp"
#include "nudc/model/train.hpp"

namespace nudc::harness {

namespace {

constexpr int kGutter = 4;

struct Rgb8 {
    std::uint8_t r, g, b;
};

/// Per-panel min-max normalization over all channels, then a two-color
/// overlay (channel 0 blue, channel 1 green) or grayscale for one channel.
std::vector<Rgb8> render_panel(const Tensor4f& img) {
    float lo = img.data.empty() ? 0.0f : img.data[0];
    float hi = lo;
    for (float v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const float scale = hi > lo ? 1.0f / (hi - lo) : 0.0f;
    auto norm = [&](float v) { return (v - lo) * scale; };
    auto to8 = [](float v) {
        return static_cast<std::uint8_t>(std::clamp(v, 0.0f, 1.0f) * 255.0f + 0.5f);
    };

    std::vector<Rgb8> out(static_cast<std::size_t>(img.h) * img.w);
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x) {
            Rgb8 px{0, 0, 0};
            if (img.c == 1) {
                const auto v = to8(norm(img.at(0, 0, y, x)));
                px = {v, v, v};
            } else {
                px.b = to8(norm(img.at(0, 0, y, x)));
                px.g = to8(norm(img.at(0, 1, y, x)));
            }
            out[static_cast<std::size_t>(y) * img.w + x] = px;
        }
    return out;
}

} // namespace

int triptych_canvas_width(int panel_width) { return 3 * panel_width + 2 * kGutter; }

void export_triptych(const std::filesystem::path& checkpoint_path,
                     const std::filesystem::path& input_path,
                     const std::filesystem::path& target_path,
                     const std::filesystem::path& out_path) {
    auto ckpt = load_checkpoint(checkpoint_path);
    const Tensor4f input = io::read_img16(input_path);
    const Tensor4f target = io::read_img16(target_path);
    if (input.h != target.h || input.w != target.w)
        throw contract_error("export_triptych: input and target dims differ");
    Tensor4f pred = model::predict(ckpt.model, input);

    const Tensor4f* panels[3] = {&input, &pred, &target};
    const int w = input.w, h = input.h;
    const int canvas_w = triptych_canvas_width(w);

    std::vector<Rgb8> canvas(static_cast<std::size_t>(h) * canvas_w, Rgb8{0, 0, 0});
    for (int p = 0; p < 3; ++p) {
        auto rgb = render_panel(*panels[p]);
        const int x0 = p * (w + kGutter);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                canvas[static_cast<std::size_t>(y) * canvas_w + x0 + x] =
                    rgb[static_cast<std::size_t>(y) * w + x];
    }

    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("export_triptych: cannot open '" + out_path.string() + "'");
    f << "P6\n" << canvas_w << ' ' << h << "\n255\n";
    f.write(reinterpret_cast<const char*>(canvas.data()),
            static_cast<std::streamsize>(canvas.size() * 3));
    if (!f) throw io_error("export_triptych: write failed for '" + out_path.string() + "'");
}

} // namespace nudc::harness
