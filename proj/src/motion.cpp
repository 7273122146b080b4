#include "shapesim/motion.hpp"

#include <algorithm>
#include <cmath>

namespace shapesim {

namespace {

// Erosion with the footprint clipped to the grid, equivalent to
// complement(dilate(complement(m))): a pixel survives iff every in-grid
// footprint pixel is set, so solid regions touching the border are kept.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
    if (se.radius == 0) {
        return mask;
    }
    const auto offsets = se.offsets();
    BinaryMask out(mask.width, mask.height, 0);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool all = true;
            for (const auto& [dx, dy] : offsets) {
                const int tx = x + dx;
                const int ty = y + dy;
                if (mask.in_bounds(tx, ty) && !mask.at(tx, ty)) {
                    all = false;
                    break;
                }
            }
            out.at(x, y) = all ? 1 : 0;
        }
    }
    return out;
}

BinaryMask close_radius1(const BinaryMask& mask) {
    const StructuringElement sq1{StructuringElement::Shape::square, 1};
    return erode(dilate(mask, sq1), sq1);
}

}  // namespace

AverageFlow average_flow(const FlowField& flow, const BinaryMask& mask) {
    require_same_shape(flow, mask, "average_flow");
    // Row-major double accumulation; the mean must be reproducible by a plain
    // per-pixel reimplementation.
    double sum_u = 0.0;
    double sum_v = 0.0;
    std::int64_t count = 0;
    for (int y = 0; y < flow.height; ++y) {
        for (int x = 0; x < flow.width; ++x) {
            if (mask.at(x, y)) {
                sum_u += flow.at(x, y, 0);
                sum_v += flow.at(x, y, 1);
                ++count;
            }
        }
    }
    if (count == 0) {
        return {0.0f, 0.0f, 0};
    }
    return {static_cast<float>(sum_u / static_cast<double>(count)),
            static_cast<float>(sum_v / static_cast<double>(count)), count};
}

FlowField motion_paste(const AverageFlow& avg, const BinaryMask& edited_mask,
                       const StructuringElement& se) {
    const BinaryMask support = dilate(edited_mask, se);
    FlowField out(edited_mask.width, edited_mask.height, 0.0f);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            if (support.at(x, y)) {
                out.at(x, y, 0) = avg.u;
                out.at(x, y, 1) = avg.v;
            }
        }
    }
    return out;
}

FlowField compose_flow(const FlowField& source_flow, const FlowField& pasted,
                       const BinaryMask& edited_mask, const StructuringElement& se) {
    require_same_shape(source_flow, pasted, "compose_flow");
    require_same_shape(source_flow, edited_mask, "compose_flow");
    const BinaryMask support = dilate(edited_mask, se);
    FlowField out(source_flow.width, source_flow.height);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const bool inside = support.at(x, y) != 0;
            out.at(x, y, 0) = inside ? pasted.at(x, y, 0) : source_flow.at(x, y, 0);
            out.at(x, y, 1) = inside ? pasted.at(x, y, 1) : source_flow.at(x, y, 1);
        }
    }
    return out;
}

BinaryMask warp_mask(const BinaryMask& mask, const FlowField& flow) {
    require_same_shape(mask, flow, "warp_mask");
    Grid2<float, 1> acc(mask.width, mask.height, 0.0f);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const float tx = static_cast<float>(x) + flow.at(x, y, 0);
            const float ty = static_cast<float>(y) + flow.at(x, y, 1);
            const int x0 = static_cast<int>(std::floor(tx));
            const int y0 = static_cast<int>(std::floor(ty));
            const float fx = tx - static_cast<float>(x0);
            const float fy = ty - static_cast<float>(y0);
            const float w00 = (1.0f - fx) * (1.0f - fy);
            const float w10 = fx * (1.0f - fy);
            const float w01 = (1.0f - fx) * fy;
            const float w11 = fx * fy;
            if (acc.in_bounds(x0, y0)) acc.at(x0, y0) += w00;
            if (acc.in_bounds(x0 + 1, y0)) acc.at(x0 + 1, y0) += w10;
            if (acc.in_bounds(x0, y0 + 1)) acc.at(x0, y0 + 1) += w01;
            if (acc.in_bounds(x0 + 1, y0 + 1)) acc.at(x0 + 1, y0 + 1) += w11;
        }
    }
    BinaryMask warped(mask.width, mask.height);
    for (std::size_t i = 0; i < warped.data.size(); ++i) {
        const float w = std::min(acc.data[i], 1.0f);
        warped.data[i] = w >= 0.5f ? 1 : 0;
    }
    return close_radius1(warped);
}

MotionResult simulate_motion(const std::vector<FlowField>& flows,
                             const std::vector<BinaryMask>& masks,
                             const BinaryMask& edited_mask_first,
                             const StructuringElement& se) {
    const std::size_t n_steps = flows.size();
    if (n_steps == 0) {
        throw Error(ErrorCategory::length_mismatch, "simulate_motion: no flow steps");
    }
    if (masks.size() < n_steps) {
        throw Error(ErrorCategory::length_mismatch,
                    "simulate_motion: need a source mask per flow step, got " +
                        std::to_string(masks.size()) + " masks for " +
                        std::to_string(n_steps) + " steps");
    }
    for (std::size_t k = 0; k < n_steps; ++k) {
        require_same_shape(flows[k], edited_mask_first, "simulate_motion flow");
        require_same_shape(masks[k], edited_mask_first, "simulate_motion mask");
    }
    for (std::size_t k = n_steps; k < masks.size(); ++k) {
        require_same_shape(masks[k], edited_mask_first, "simulate_motion mask");
    }

    MotionResult result;
    result.flows.reserve(n_steps);
    result.masks.reserve(n_steps + 1);
    result.masks.push_back(edited_mask_first);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const BinaryMask& edited = result.masks.back();
        if (area(edited) == 0) {
            // Degenerate (fully removed or exited) shape: pasting is skipped,
            // the source flow passes through and the empty mask persists.
            result.flows.push_back(flows[k]);
            result.masks.push_back(edited);
            continue;
        }
        AverageFlow avg = average_flow(flows[k], masks[k]);
        if (avg.source_area == 0) {
            result.warnings.push_back("source mask empty at step " + std::to_string(k + 1) +
                                      "; edited shape holds still");
        }
        const FlowField pasted = motion_paste(avg, edited, se);
        FlowField composed = compose_flow(flows[k], pasted, edited, se);
        BinaryMask next = warp_mask(edited, composed);
        result.flows.push_back(std::move(composed));
        result.masks.push_back(std::move(next));
    }
    return result;
}

}  // namespace shapesim
