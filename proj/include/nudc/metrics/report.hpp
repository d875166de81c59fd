#ifndef NUDC_METRICS_REPORT_HPP
#define NUDC_METRICS_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace nudc::metrics {

/// One evaluation result row. tag is the dataset label (z / distance),
/// model distinguishes e.g. "input" from a trained configuration.
struct MetricRow {
    std::string tag;
    std::string model;
    int levels = 0;
    std::string mode;
    double psnr_db = 0.0;
    double ssim = 0.0;
    long long params = 0;
};

/// Canonical float formatting for reports: six decimals, literal "inf"
/// for the infinite-PSNR sentinel.
std::string format_metric(double v);

/// CSV with header tag,model,levels,mode,psnr_db,ssim,params; rows sorted
/// by (tag, model, levels, mode) regardless of insertion order.
void write_report(std::vector<MetricRow> rows, const std::filesystem::path& path);

} // namespace nudc::metrics

#endif // NUDC_METRICS_REPORT_HPP
