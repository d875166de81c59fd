#ifndef NUDC_MODEL_CONFIG_HPP
#define NUDC_MODEL_CONFIG_HPP

#include <string>

#include "nudc/errors.hpp"

namespace nudc::model {

/// How a coarse subnetwork's decoder features enter a finer encoder stage:
/// element-wise addition (with a learned 1x1 channel adapter) or channel
/// concatenation (widening the downstream convolutions).
enum class FusionMode { residual, concat };

enum class LossKind { l1, l2 };

inline std::string to_string(FusionMode m) {
    return m == FusionMode::residual ? "residual" : "concat";
}

inline std::string to_string(LossKind k) { return k == LossKind::l1 ? "l1" : "l2"; }

inline FusionMode fusion_mode_from_string(const std::string& s) {
    if (s == "residual") return FusionMode::residual;
    if (s == "concat") return FusionMode::concat;
    throw config_error("unknown fusion mode '" + s + "' (expected residual|concat)");
}

inline LossKind loss_kind_from_string(const std::string& s) {
    if (s == "l1") return LossKind::l1;
    if (s == "l2") return LossKind::l2;
    throw config_error("unknown loss kind '" + s + "' (expected l1|l2)");
}

/// Full model description. levels == 1 degenerates to a plain U-Net with
/// no fusion sites.
struct NestedConfig {
    int levels = 2;       // N: number of subnetworks / pyramid levels
    int unet_depth = 2;   // I: encoder downsamplings per subnetwork
    int base_channels = 8;
    int in_channels = 2;
    int out_channels = 2;
    FusionMode fusion = FusionMode::residual;
    LossKind loss = LossKind::l1;

    /// Spatial dims must be divisible by this after padding: the pyramid
    /// halves levels-1 times and each subnetwork pools unet_depth times.
    int divisor() const { return 1 << (levels - 1 + unet_depth); }

    void validate() const {
        if (levels < 1 || levels > 8)
            throw config_error("NestedConfig: levels must be in [1, 8], got " +
                               std::to_string(levels));
        if (unet_depth < 1)
            throw config_error("NestedConfig: unet_depth must be >= 1, got " +
                               std::to_string(unet_depth));
        if (base_channels < 1)
            throw config_error("NestedConfig: base_channels must be >= 1, got " +
                               std::to_string(base_channels));
        if (in_channels < 1 || out_channels < 1)
            throw config_error("NestedConfig: channel counts must be >= 1");
    }
};

} // namespace nudc::model

#endif // NUDC_MODEL_CONFIG_HPP
