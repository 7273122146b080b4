#ifndef SHAPESIM_MOTION_HPP
#define SHAPESIM_MOTION_HPP

#include <string>
#include <vector>

#include "shapesim/grid.hpp"
#include "shapesim/mask_ops.hpp"

namespace shapesim {

// Mean flow over a mask region. source_area == 0 marks the zero-motion
// fallback used when the source mask is empty.
struct AverageFlow {
    float u = 0.0f;
    float v = 0.0f;
    std::int64_t source_area = 0;
};

AverageFlow average_flow(const FlowField& flow, const BinaryMask& mask);

// Constant flow written onto the dilated edited region, zero elsewhere.
FlowField motion_paste(const AverageFlow& avg, const BinaryMask& edited_mask,
                       const StructuringElement& se);

// source flow outside the dilated edited region, pasted constant inside it.
// Pixels outside the dilated region keep the source values bitwise.
FlowField compose_flow(const FlowField& source_flow, const FlowField& pasted,
                       const BinaryMask& edited_mask, const StructuringElement& se);

// Forward-splat warp: every 1-pixel deposits bilinear weights at p + flow(p)
// on the integer lattice, out-of-grid taps are dropped, the accumulated
// weights are clamped to [0,1] and binarized at >= 0.5, and a radius-1 square
// closing removes splat pinholes. Integer flows therefore translate a mask
// exactly (intersected with the grid).
BinaryMask warp_mask(const BinaryMask& mask, const FlowField& flow);

struct MotionResult {
    std::vector<FlowField> flows;   // N-1 simulated step flows
    std::vector<BinaryMask> masks;  // N edited masks, first entry is the input shape
    std::vector<std::string> warnings;
};

// Propagates the edited first-frame shape through the sequence, step k taking
// the source flow's mean over the source mask, pasting it onto the dilated
// edited region, composing, then warping the edited mask forward. Once the
// edited mask is empty the pasting steps are skipped: the mask stays empty
// and the source flows pass through bitwise.
MotionResult simulate_motion(const std::vector<FlowField>& flows,
                             const std::vector<BinaryMask>& masks,
                             const BinaryMask& edited_mask_first,
                             const StructuringElement& se);

}  // namespace shapesim

#endif
