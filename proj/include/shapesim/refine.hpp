#ifndef SHAPESIM_REFINE_HPP
#define SHAPESIM_REFINE_HPP

#include <string>
#include <vector>

#include "shapesim/grid.hpp"
#include "shapesim/mask_ops.hpp"

namespace shapesim {

// Which side of the repair region keeps its depth values in the masked map.
// zero_inside_repair zeroes the repair region and keeps the surroundings,
// which is what a fill solver needs for context; zero_outside_repair keeps
// values only on the repair region.
enum class MaskConvention { zero_inside_repair, zero_outside_repair };

const char* to_string(MaskConvention c);

struct SolverConfig {
    double tolerance = 1e-4;   // stop when the max-abs update of a sweep drops below this
    int max_iterations = 10000;
    MaskConvention convention = MaskConvention::zero_inside_repair;
};

struct RefinementInputs {
    DepthMap masked_depth;
    BinaryMask repair_mask;   // dilated residue of the source mask not claimed by the edit
    BinaryMask protect_mask;  // current edited region: never filled, excluded from the stencil
    BinaryMask shape_guide;   // first-frame edited shape, used for drift warnings only
};

// repair_mask = dilate((1 - edited_mask) * source_mask); masked_depth zeroes
// the repair region (default convention) or everything else (literal one).
RefinementInputs prepare_refinement_inputs(const BinaryMask& source_mask,
                                           const BinaryMask& edited_mask,
                                           const DepthMap& simulated_depth,
                                           const BinaryMask& shape_guide,
                                           const StructuringElement& se,
                                           MaskConvention convention = MaskConvention::zero_inside_repair);

struct RefineResult {
    DepthMap depth;
    bool converged = true;
    int iterations = 0;
    double final_update = 0.0;
    // max-abs update per Gauss-Seidel sweep, non-increasing on these problems
    std::vector<double> sweep_updates;
    std::vector<std::string> warnings;
};

// Fills the region repair_mask \ protect_mask by solving the discrete Laplace
// equation (each pixel the mean of its participating 4-neighbours) with
// Dirichlet data taken from the pixels outside the repair mask. Protected
// pixels are excluded from the stencil entirely, so their values neither
// change nor influence the fill. Unknowns start at the mean of their
// component's boundary values, which keeps every iterate inside the boundary
// value range (discrete maximum principle) at any iteration count.
//
// Throws no_boundary when the fill region is non-empty but touches no known
// pixel anywhere. A non-converged solve is returned with converged = false
// and the final residual; it is not an error.
RefineResult refine_depth(const RefinementInputs& inputs, const SolverConfig& cfg);

struct RefineSequenceResult {
    std::vector<DepthMap> depths;
    std::vector<std::string> warnings;
    bool all_converged = true;
};

// prepare + refine per frame. The current edited region is protected: those
// pixels are copied from the simulated depth bit-exactly. Frames whose edited
// mask drifts far from the (centroid-aligned) first-frame shape produce a
// warning.
RefineSequenceResult refine_sequence(const std::vector<DepthMap>& simulated_depths,
                                     const std::vector<BinaryMask>& source_masks,
                                     const std::vector<BinaryMask>& edited_masks,
                                     const BinaryMask& shape_guide,
                                     const SolverConfig& cfg,
                                     const StructuringElement& se);

}  // namespace shapesim

#endif
