#ifndef SHAPESIM_DEPTH_HPP
#define SHAPESIM_DEPTH_HPP

#include <string>
#include <vector>

#include "shapesim/grid.hpp"
#include "shapesim/mask_ops.hpp"

namespace shapesim {

enum class DepthStrategy {
    source_depth,      // pass the source depth maps through unchanged
    pasted_depth,      // per-frame average-depth paste composed over the edited mask
    warp_first_depth,  // compose frame 1 only, then forward-warp it along the source flows
    refined_depth,     // pasted_depth, refined afterwards by the refine module
};

const char* to_string(DepthStrategy s);

// Mean depth over the mask region. Empty-mask handling is the caller's
// policy; this returns the fallback 0 with *has_value = false.
float average_depth(const DepthMap& depth, const BinaryMask& mask, bool* has_value = nullptr);

// mean_depth on the edited mask, 0 elsewhere. No dilation here: the depth
// composite uses the edited mask itself, not its dilation.
DepthMap depth_paste(float mean_depth, const BinaryMask& edited_mask);

// source depth outside the edited mask, mean_depth inside. Every output pixel
// equals one of the two bitwise.
DepthMap compose_depth(const DepthMap& source_depth, float mean_depth,
                       const BinaryMask& edited_mask);

// Forward-splat warp of a depth map. Each pixel deposits value*weight at
// p + flow(p); outputs are weight-normalized, and pixels receiving no splat
// take the hole_fill value.
DepthMap forward_warp_depth(const DepthMap& src, const FlowField& flow,
                            const DepthMap& hole_fill);

struct DepthSimResult {
    std::vector<DepthMap> depths;
    std::vector<std::string> warnings;
};

// Per-frame simulated depth maps for the chosen strategy. refined_depth
// produces the pasted_depth composites; refining them is a separate pass.
// When a source mask is empty the frame mean carries forward from the
// previous frame (leading empties take the first non-empty frame's mean); if
// every source mask is empty the strategy degrades to source_depth.
DepthSimResult simulate_depth(const std::vector<DepthMap>& depths,
                              const std::vector<BinaryMask>& masks,
                              const std::vector<BinaryMask>& edited_masks,
                              DepthStrategy strategy,
                              const std::vector<FlowField>& flows);

}  // namespace shapesim

#endif
