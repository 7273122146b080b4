#ifndef SHAPESIM_METRICS_HPP
#define SHAPESIM_METRICS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "shapesim/grid.hpp"

namespace shapesim {

struct MetricReport {
    std::string metric;
    std::vector<double> per_frame;
    double mean = 0.0;
    double valid_fraction = 1.0;
};

// Photometric residual between each frame and its successor pulled back along
// the connecting flow: frame k+1 is sampled bilinearly at p + flow(p) and
// compared with frame k at p by mean per-channel absolute difference, colors
// normalized to [0, 1]. Samples landing outside the frame are excluded, not
// clamped; valid_fraction reports how many survived.
MetricReport warping_error(const std::vector<RgbImage>& frames,
                           const std::vector<FlowField>& flows);

// Per-frame intersection-over-union of two mask sequences.
MetricReport mask_sequence_iou(const std::vector<BinaryMask>& predicted,
                               const std::vector<BinaryMask>& truth);

// {metric, per_frame, mean, valid_fraction, external:{}} — the external slot
// is left for other tools to merge their scores into.
void write_report(const MetricReport& report, const std::filesystem::path& path);

}  // namespace shapesim

#endif
