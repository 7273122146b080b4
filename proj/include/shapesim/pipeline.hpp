#ifndef SHAPESIM_PIPELINE_HPP
#define SHAPESIM_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "shapesim/manifest.hpp"
#include "shapesim/motion.hpp"

namespace shapesim {

// Per-frame view of the simulation outputs: edited mask, the flow leading to
// the next frame (absent at the last one), and the simulated depth.
struct SimulationState {
    int frame_index = 0;  // 1-based
    BinaryMask edited_mask;
    std::optional<FlowField> simulated_flow;
    DepthMap simulated_depth;
};

// Zips motion and depth outputs into per-frame states. Requires one depth
// per mask and one flow per step.
std::vector<SimulationState> collect_states(const MotionResult& motion,
                                            const std::vector<DepthMap>& simulated_depths);

struct RunOptions {
    std::filesystem::path out_dir;
    bool write_intermediates = true;  // when off, only masks and final depths are kept
    std::optional<DepthStrategy> strategy;     // flag overrides manifest
    std::optional<int> dilation_radius;        // flag overrides manifest
    std::optional<MaskConvention> convention;  // flag overrides manifest
};

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

struct RunResult {
    DepthStrategy strategy = DepthStrategy::refined_depth;
    std::vector<std::filesystem::path> mask_paths;           // n_frames
    std::vector<std::filesystem::path> flow_paths;           // n_frames - 1
    std::vector<std::filesystem::path> depth_sim_paths;      // n_frames
    std::vector<std::filesystem::path> depth_refined_paths;  // n_frames, final depths
    std::optional<std::filesystem::path> edited_first_frame;
    std::vector<StageTiming> timings;  // reported to the caller, never written to disk
    std::vector<std::string> warnings;
    bool refine_converged = true;
};

// Runs motion simulation, depth simulation for the selected strategy, and the
// refinement pass when the strategy asks for it, then writes the outputs.
// Results are staged and swapped into out_dir only after every file is
// written, so a failed run leaves no partial output; identical inputs and
// options produce byte-identical trees.
RunResult run_pipeline(const SceneManifest& manifest, const RunOptions& opts);

}  // namespace shapesim

#endif
