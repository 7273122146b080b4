#ifndef SHAPESIM_SYNTH_HPP
#define SHAPESIM_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shapesim/grid.hpp"

namespace shapesim {

// Analytic test scenes: one rigid shape translating at constant velocity over
// a static textured background with a planar depth field. Flows, masks,
// depths and the edited-sequence ground truths all come from the same
// closed-form motion, so integer velocities yield exact propagation targets.

struct ShapeSpec {
    enum class Kind { disk, rect, none };  // none = empty mask (object removed)
    Kind kind = Kind::disk;
    double radius = 0.0;              // disk
    double width = 0.0, height = 0.0;  // rect extents
};

struct TextureSpec {
    enum class Kind { checkerboard, flat };
    Kind kind = Kind::checkerboard;
    int cell = 8;    // checkerboard cell size in pixels
    int gray = 128;  // flat background level
};

struct SceneSpec {
    int width = 64;
    int height = 64;
    int n_frames = 8;
    ShapeSpec object_shape;
    ShapeSpec edited_shape;
    double start_cx = 0.0, start_cy = 0.0;  // shared by object and edit
    double velocity_x = 0.0, velocity_y = 0.0;  // pixels per frame step
    float object_depth = 0.2f;
    // background depth a + b*x/W + c*y/H
    double plane_a = 0.6, plane_b = 0.0, plane_c = 0.0;
    TextureSpec texture;
    std::uint64_t seed = 0;  // reserved; current textures are noise-free
    bool allow_exit = false;
};

struct SceneBundle {
    SceneSpec spec;
    std::vector<RgbImage> frames;        // N
    std::vector<FlowField> flows;        // N-1, velocity inside the object mask
    std::vector<BinaryMask> masks;       // N
    std::vector<DepthMap> depths;        // N
    std::vector<BinaryMask> gt_edited_masks;   // N
    std::vector<DepthMap> gt_edited_depths;    // N
    std::vector<RgbImage> gt_edited_frames;    // N
};

// Background plane depth at a pixel.
float background_depth(const SceneSpec& spec, int x, int y);

// Pixel-center rasterization of a shape at the given centre; pixel (x, y)
// belongs iff (x+0.5, y+0.5) lies inside the continuous shape.
BinaryMask rasterize_shape(const ShapeSpec& shape, double cx, double cy, int width, int height);

// Deterministic for a fixed spec. Throws spec_invalid when a shape leaves the
// one-pixel interior margin and exit was not requested.
SceneBundle generate_scene(const SceneSpec& spec);

// Writes every asset plus ground truths under dir and a pipeline manifest at
// dir/manifest.json. Returns the manifest path.
std::filesystem::path export_scene(const SceneBundle& bundle, const std::filesystem::path& dir);

// Built-in scenes used by the test suites: "standard", "shrunken",
// "inpainting", "checkerboard".
SceneSpec preset_scene(const std::string& name);
std::vector<std::string> preset_names();

// Scene description as JSON (same fields as SceneSpec); unknown keys are
// rejected.
SceneSpec load_scene_spec(const std::filesystem::path& path);

}  // namespace shapesim

#endif
