#include "shapesim/depth.hpp"

#include <cmath>
#include <optional>

namespace shapesim {

const char* to_string(DepthStrategy s) {
    switch (s) {
        case DepthStrategy::source_depth: return "source-depth";
        case DepthStrategy::pasted_depth: return "pasted-depth";
        case DepthStrategy::warp_first_depth: return "warp-first-depth";
        case DepthStrategy::refined_depth: return "refined-depth";
    }
    return "refined-depth";
}

float average_depth(const DepthMap& depth, const BinaryMask& mask, bool* has_value) {
    require_same_shape(depth, mask, "average_depth");
    double sum = 0.0;
    std::int64_t count = 0;
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            if (mask.at(x, y)) {
                sum += depth.at(x, y);
                ++count;
            }
        }
    }
    if (has_value) *has_value = count > 0;
    if (count == 0) return 0.0f;
    return static_cast<float>(sum / static_cast<double>(count));
}

DepthMap depth_paste(float mean_depth, const BinaryMask& edited_mask) {
    DepthMap out(edited_mask.width, edited_mask.height, 0.0f);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            if (edited_mask.at(x, y)) {
                out.at(x, y) = mean_depth;
            }
        }
    }
    return out;
}

DepthMap compose_depth(const DepthMap& source_depth, float mean_depth,
                       const BinaryMask& edited_mask) {
    require_same_shape(source_depth, edited_mask, "compose_depth");
    DepthMap out(source_depth.width, source_depth.height);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            out.at(x, y) = edited_mask.at(x, y) ? mean_depth : source_depth.at(x, y);
        }
    }
    return out;
}

DepthMap forward_warp_depth(const DepthMap& src, const FlowField& flow,
                            const DepthMap& hole_fill) {
    require_same_shape(src, flow, "forward_warp_depth");
    require_same_shape(src, hole_fill, "forward_warp_depth");
    Grid2<float, 1> acc_value(src.width, src.height, 0.0f);
    Grid2<float, 1> acc_weight(src.width, src.height, 0.0f);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            const float v = src.at(x, y);
            const float tx = static_cast<float>(x) + flow.at(x, y, 0);
            const float ty = static_cast<float>(y) + flow.at(x, y, 1);
            const int x0 = static_cast<int>(std::floor(tx));
            const int y0 = static_cast<int>(std::floor(ty));
            const float fx = tx - static_cast<float>(x0);
            const float fy = ty - static_cast<float>(y0);
            const float w[4] = {(1.0f - fx) * (1.0f - fy), fx * (1.0f - fy),
                                (1.0f - fx) * fy, fx * fy};
            const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
            const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
            for (int i = 0; i < 4; ++i) {
                if (acc_value.in_bounds(xs[i], ys[i])) {
                    acc_value.at(xs[i], ys[i]) += w[i] * v;
                    acc_weight.at(xs[i], ys[i]) += w[i];
                }
            }
        }
    }
    DepthMap out(src.width, src.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = acc_weight.data[i] > 0.0f ? acc_value.data[i] / acc_weight.data[i]
                                                : hole_fill.data[i];
    }
    return out;
}

namespace {

// Per-frame means with the carry-forward policy for empty source masks.
// Returns nothing when every mask is empty.
std::optional<std::vector<float>> carried_means(const std::vector<DepthMap>& depths,
                                                const std::vector<BinaryMask>& masks,
                                                std::vector<std::string>& warnings) {
    const std::size_t n = depths.size();
    std::vector<float> means(n, 0.0f);
    std::vector<bool> defined(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        bool has = false;
        means[k] = average_depth(depths[k], masks[k], &has);
        defined[k] = has;
    }
    std::size_t first_defined = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (defined[k]) {
            first_defined = k;
            break;
        }
    }
    if (first_defined == n) {
        return std::nullopt;
    }
    for (std::size_t k = 0; k < first_defined; ++k) {
        means[k] = means[first_defined];
        warnings.push_back("source mask empty at frame " + std::to_string(k + 1) +
                           "; mean depth taken from frame " + std::to_string(first_defined + 1));
    }
    for (std::size_t k = first_defined + 1; k < n; ++k) {
        if (!defined[k]) {
            means[k] = means[k - 1];
            warnings.push_back("source mask empty at frame " + std::to_string(k + 1) +
                               "; mean depth carried forward");
        }
    }
    return means;
}

}  // namespace

DepthSimResult simulate_depth(const std::vector<DepthMap>& depths,
                              const std::vector<BinaryMask>& masks,
                              const std::vector<BinaryMask>& edited_masks,
                              DepthStrategy strategy,
                              const std::vector<FlowField>& flows) {
    const std::size_t n = depths.size();
    if (n == 0) {
        throw Error(ErrorCategory::length_mismatch, "simulate_depth: no depth maps");
    }
    if (masks.size() != n || edited_masks.size() != n) {
        throw Error(ErrorCategory::length_mismatch,
                    "simulate_depth: depths/masks/edited_masks must have equal length");
    }
    if (strategy == DepthStrategy::warp_first_depth && flows.size() + 1 != n) {
        throw Error(ErrorCategory::length_mismatch,
                    "simulate_depth: need one flow per frame step, got " +
                        std::to_string(flows.size()) + " for " + std::to_string(n) + " frames");
    }
    for (std::size_t k = 0; k < n; ++k) {
        require_same_shape(depths[k], masks[k], "simulate_depth");
        require_same_shape(depths[k], edited_masks[k], "simulate_depth");
    }

    DepthSimResult result;
    if (strategy == DepthStrategy::source_depth) {
        result.depths = depths;
        return result;
    }

    const auto means = carried_means(depths, masks, result.warnings);
    if (!means) {
        result.warnings.push_back("every source mask is empty; falling back to source depth");
        result.depths = depths;
        return result;
    }

    switch (strategy) {
        case DepthStrategy::pasted_depth:
        case DepthStrategy::refined_depth:
            result.depths.reserve(n);
            for (std::size_t k = 0; k < n; ++k) {
                result.depths.push_back(compose_depth(depths[k], (*means)[k], edited_masks[k]));
            }
            break;
        case DepthStrategy::warp_first_depth: {
            result.depths.reserve(n);
            result.depths.push_back(compose_depth(depths[0], (*means)[0], edited_masks[0]));
            for (std::size_t k = 1; k < n; ++k) {
                result.depths.push_back(
                    forward_warp_depth(result.depths[k - 1], flows[k - 1], depths[k]));
            }
            break;
        }
        case DepthStrategy::source_depth:
            break;  // handled above
    }
    return result;
}

}  // namespace shapesim
