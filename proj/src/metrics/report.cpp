#include "nudc/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <tuple>

#include "nudc/errors.hpp"

namespace nudc::metrics {

std::string format_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_report(std::vector<MetricRow> rows, const std::filesystem::path& path) {
    std::sort(rows.begin(), rows.end(), [](const MetricRow& a, const MetricRow& b) {
        return std::tie(a.tag, a.model, a.levels, a.mode) <
               std::tie(b.tag, b.model, b.levels, b.mode);
    });
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw io_error("write_report: cannot open '" + path.string() + "' for writing");
    f << "tag,model,levels,mode,psnr_db,ssim,params\n";
    for (const auto& r : rows)
        f << r.tag << ',' << r.model << ',' << r.levels << ',' << r.mode << ','
          << format_metric(r.psnr_db) << ',' << format_metric(r.ssim) << ',' << r.params << '\n';
    if (!f) throw io_error("write_report: write failed for '" + path.string() + "'");
}

} // namespace nudc::metrics
