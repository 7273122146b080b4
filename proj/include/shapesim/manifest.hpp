#ifndef SHAPESIM_MANIFEST_HPP
#define SHAPESIM_MANIFEST_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shapesim/depth.hpp"
#include "shapesim/grid.hpp"
#include "shapesim/mask_ops.hpp"
#include "shapesim/refine.hpp"

namespace shapesim {

// Declarative description of one run: per-frame asset paths plus the
// simulation parameters. Relative paths resolve against the manifest's
// directory. Unknown JSON fields are rejected so config typos fail loudly.
struct SceneManifest {
    int version = 1;
    int width = 0;
    int height = 0;
    int n_frames = 0;
    std::vector<std::filesystem::path> frame_paths;  // optional, metrics only
    std::vector<std::filesystem::path> mask_paths;   // n_frames
    std::vector<std::filesystem::path> depth_paths;  // n_frames
    std::vector<std::filesystem::path> flow_paths;   // n_frames - 1
    std::filesystem::path edited_first_mask;
    std::optional<std::filesystem::path> edited_first_frame;  // pass-through for downstream
    std::string prompt_text;        // opaque metadata
    std::string depth_orientation;  // informational tag; no operation reads it
    DepthStrategy strategy = DepthStrategy::refined_depth;
    StructuringElement morphology{StructuringElement::Shape::disk, 11};
    SolverConfig refine;
    std::filesystem::path base_dir;
};

// Decoded assets, dimension-checked against the manifest.
struct SceneAssets {
    std::vector<RgbImage> frames;  // empty when the manifest lists none
    std::vector<BinaryMask> masks;
    std::vector<DepthMap> depths;
    std::vector<FlowField> flows;
    BinaryMask edited_first_mask;
};

// Parses and fully validates a manifest: schema, asset existence, and the
// dimension check across every referenced grid.
SceneManifest load_manifest(const std::filesystem::path& path);

// Decodes every asset. Errors carry the offending file's path.
SceneAssets load_assets(const SceneManifest& manifest);

std::optional<DepthStrategy> parse_strategy(const std::string& s);
std::optional<MaskConvention> parse_convention(const std::string& s);

}  // namespace shapesim

#endif
