#include "shapesim/metrics.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "shapesim/mask_ops.hpp"

namespace shapesim {

namespace {

// Bilinear sample of one channel at a position already known to satisfy
// 0 <= sx <= W-1 and 0 <= sy <= H-1.
double sample_channel(const RgbImage& img, double sx, double sy, int c) {
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = sx - x0;
    const double fy = sy - y0;
    const double v00 = img.at(x0, y0, c);
    const double v10 = img.at(x1, y0, c);
    const double v01 = img.at(x0, y1, c);
    const double v11 = img.at(x1, y1, c);
    return (v00 * (1.0 - fx) + v10 * fx) * (1.0 - fy) + (v01 * (1.0 - fx) + v11 * fx) * fy;
}

}  // namespace

MetricReport warping_error(const std::vector<RgbImage>& frames,
                           const std::vector<FlowField>& flows) {
    if (frames.size() < 2 || flows.size() + 1 != frames.size()) {
        throw Error(ErrorCategory::length_mismatch,
                    "warping_error: need N frames and N-1 flows, got " +
                        std::to_string(frames.size()) + " frames and " +
                        std::to_string(flows.size()) + " flows");
    }
    for (std::size_t k = 0; k < flows.size(); ++k) {
        require_same_shape(frames[k], flows[k], "warping_error");
        require_same_shape(frames[k], frames[k + 1], "warping_error");
    }

    MetricReport report;
    report.metric = "warping_error";
    std::int64_t valid_total = 0;
    std::int64_t pixel_total = 0;
    for (std::size_t k = 0; k < flows.size(); ++k) {
        const RgbImage& cur = frames[k];
        const RgbImage& next = frames[k + 1];
        const FlowField& flow = flows[k];
        double err_sum = 0.0;
        std::int64_t valid = 0;
        for (int y = 0; y < cur.height; ++y) {
            for (int x = 0; x < cur.width; ++x) {
                const double sx = x + flow.at(x, y, 0);
                const double sy = y + flow.at(x, y, 1);
                if (sx < 0.0 || sx > cur.width - 1 || sy < 0.0 || sy > cur.height - 1) {
                    continue;
                }
                double d = 0.0;
                for (int c = 0; c < 3; ++c) {
                    const double warped = sample_channel(next, sx, sy, c) / 255.0;
                    const double ref = cur.at(x, y, c) / 255.0;
                    d += std::abs(warped - ref);
                }
                err_sum += d / 3.0;
                ++valid;
            }
        }
        report.per_frame.push_back(valid > 0 ? err_sum / static_cast<double>(valid) : 0.0);
        valid_total += valid;
        pixel_total += cur.pixel_count();
    }
    double sum = 0.0;
    for (double v : report.per_frame) sum += v;
    report.mean = sum / static_cast<double>(report.per_frame.size());
    report.valid_fraction =
        pixel_total > 0 ? static_cast<double>(valid_total) / static_cast<double>(pixel_total) : 1.0;
    return report;
}

MetricReport mask_sequence_iou(const std::vector<BinaryMask>& predicted,
                               const std::vector<BinaryMask>& truth) {
    if (predicted.empty() || predicted.size() != truth.size()) {
        throw Error(ErrorCategory::length_mismatch,
                    "mask_sequence_iou: sequence lengths differ (" +
                        std::to_string(predicted.size()) + " vs " + std::to_string(truth.size()) +
                        ")");
    }
    MetricReport report;
    report.metric = "mask_iou";
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        report.per_frame.push_back(iou(predicted[k], truth[k]));
    }
    double sum = 0.0;
    for (double v : report.per_frame) sum += v;
    report.mean = sum / static_cast<double>(report.per_frame.size());
    report.valid_fraction = 1.0;
    return report;
}

void write_report(const MetricReport& report, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["metric"] = report.metric;
    doc["per_frame"] = report.per_frame;
    doc["mean"] = report.mean;
    doc["valid_fraction"] = report.valid_fraction;
    doc["external"] = nlohmann::json::object();
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCategory::io_error, "cannot write report " + path.string());
    }
    out << doc.dump(2) << "\n";
    out.flush();
    if (!out) {
        throw Error(ErrorCategory::io_error, "write failed: " + path.string());
    }
}

}  // namespace shapesim
