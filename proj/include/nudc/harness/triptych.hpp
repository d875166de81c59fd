#ifndef NUDC_HARNESS_TRIPTYCH_HPP
#define NUDC_HARNESS_TRIPTYCH_HPP

#include <filesystem>

namespace nudc::harness {

/// Side-by-side 8-bit rendering (binary PPM): input | prediction | ground
/// truth, each panel min-max normalized on its own, two-channel images
/// rendered as a green/blue fluorescence overlay, 4-pixel gutters.
void export_triptych(const std::filesystem::path& checkpoint_path,
                     const std::filesystem::path& input_path,
                     const std::filesystem::path& target_path,
                     const std::filesystem::path& out_path);

/// Canvas width for a given panel width (three panels + two gutters).
int triptych_canvas_width(int panel_width);

} // namespace nudc::harness

#endif // NUDC_HARNESS_TRIPTYCH_HPP
