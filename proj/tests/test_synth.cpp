#include <doctest.h>

#include <fstream>
#include <map>

#include "shapesim/io.hpp"
#include "shapesim/manifest.hpp"
#include "shapesim/mask_ops.hpp"
#include "shapesim/motion.hpp"
#include "shapesim/synth.hpp"

#include "test_util.hpp"

using namespace shapesim;
using testutil::TempDir;

namespace {

BinaryMask translated(const BinaryMask& mask, int dx, int dy) {
    BinaryMask out(mask.width, mask.height, 0);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y) && out.in_bounds(x + dx, y + dy)) out.at(x + dx, y + dy) = 1;
        }
    }
    return out;
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        out[std::filesystem::relative(entry.path(), root).string()] =
            std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    return out;
}

}  // namespace

TEST_CASE("a zero-velocity scene is static") {
    SceneSpec spec = preset_scene("standard");
    spec.velocity_x = 0.0;
    spec.velocity_y = 0.0;
    spec.n_frames = 4;
    const SceneBundle bundle = generate_scene(spec);
    for (int k = 1; k < 4; ++k) {
        CHECK(bundle.masks[k] == bundle.masks[0]);
    }
    for (const auto& flow : bundle.flows) {
        for (float v : flow.data) CHECK(v == 0.0f);
    }
}

TEST_CASE("mask centroids follow the analytic trajectory") {
    SceneSpec spec;
    spec.width = 64;
    spec.height = 64;
    spec.n_frames = 4;
    spec.object_shape = {ShapeSpec::Kind::disk, 5.0, 0.0, 0.0};
    spec.edited_shape = {ShapeSpec::Kind::disk, 5.0, 0.0, 0.0};
    spec.start_cx = 32.0;
    spec.start_cy = 32.0;
    spec.velocity_x = 2.0;
    spec.velocity_y = 1.0;
    const SceneBundle bundle = generate_scene(spec);
    for (int k = 0; k < 4; ++k) {
        double sx = 0.0, sy = 0.0;
        std::int64_t n = 0;
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                if (bundle.masks[k].at(x, y)) {
                    sx += x + 0.5;
                    sy += y + 0.5;
                    ++n;
                }
            }
        }
        REQUIRE(n > 0);
        CHECK(std::abs(sx / n - (32.0 + 2.0 * k)) <= 0.5);
        CHECK(std::abs(sy / n - (32.0 + 1.0 * k)) <= 0.5);
    }
}

TEST_CASE("depth maps take the object value on the mask and the plane corner elsewhere") {
    const SceneSpec spec = preset_scene("standard");
    const SceneBundle bundle = generate_scene(spec);
    REQUIRE(!bundle.masks[0].at(0, 0));
    CHECK(bundle.depths[0].at(0, 0) == static_cast<float>(spec.plane_a));
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            if (bundle.masks[0].at(x, y)) {
                CHECK(bundle.depths[0].at(x, y) == spec.object_depth);
            }
        }
    }
}

TEST_CASE("integer-velocity flows are the exact displacement of the rasterized motion") {
    const SceneBundle bundle = generate_scene(preset_scene("standard"));
    const int vx = static_cast<int>(bundle.spec.velocity_x);
    const int vy = static_cast<int>(bundle.spec.velocity_y);
    for (std::size_t k = 0; k + 1 < bundle.masks.size(); ++k) {
        CHECK(translated(bundle.masks[k], vx, vy) == bundle.masks[k + 1]);
        CHECK(translated(bundle.gt_edited_masks[k], vx, vy) == bundle.gt_edited_masks[k + 1]);
        // and the warp operator agrees: the flows really are that displacement
        CHECK(warp_mask(bundle.masks[k], bundle.flows[k]) == bundle.masks[k + 1]);
    }
}

TEST_CASE("ground-truth edited depths split exactly along the edited mask") {
    const SceneBundle bundle = generate_scene(preset_scene("shrunken"));
    for (std::size_t k = 0; k < bundle.gt_edited_depths.size(); ++k) {
        for (int y = 0; y < bundle.spec.height; ++y) {
            for (int x = 0; x < bundle.spec.width; ++x) {
                const float expected = bundle.gt_edited_masks[k].at(x, y)
                                           ? bundle.spec.object_depth
                                           : background_depth(bundle.spec, x, y);
                CHECK(bundle.gt_edited_depths[k].at(x, y) == expected);
            }
        }
    }
}

TEST_CASE("a shape leaving the frame is rejected unless exit is requested") {
    SceneSpec spec = preset_scene("standard");
    spec.velocity_x = 10.0;  // exits within 16 frames
    try {
        generate_scene(spec);
        FAIL("expected spec_invalid");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::spec_invalid);
    }
    spec.allow_exit = true;
    CHECK_NOTHROW(generate_scene(spec));
}

TEST_CASE("export round-trips every asset and the manifest counts match") {
    TempDir dir("synth_export");
    SceneSpec spec = preset_scene("standard");
    spec.n_frames = 5;
    const SceneBundle bundle = generate_scene(spec);
    const auto manifest_path = export_scene(bundle, dir.path());

    const SceneManifest manifest = load_manifest(manifest_path);
    CHECK(manifest.n_frames == 5);
    CHECK(manifest.mask_paths.size() == 5);
    CHECK(manifest.depth_paths.size() == 5);
    CHECK(manifest.flow_paths.size() == 4);

    const SceneAssets assets = load_assets(manifest);
    CHECK(assets.masks == bundle.masks);
    CHECK(assets.depths == bundle.depths);
    CHECK(assets.flows == bundle.flows);
    CHECK(assets.frames == bundle.frames);
    CHECK(assets.edited_first_mask == bundle.gt_edited_masks[0]);
}

TEST_CASE("re-exporting the same scene writes byte-identical files") {
    TempDir a("synth_det_a");
    TempDir b("synth_det_b");
    const SceneSpec spec = preset_scene("checkerboard");
    export_scene(generate_scene(spec), a.path());
    export_scene(generate_scene(spec), b.path());
    CHECK(read_tree(a.path()) == read_tree(b.path()));
}

TEST_CASE("scene specs load from JSON and reject unknown fields") {
    TempDir dir("scene_spec");
    {
        std::ofstream out(dir / "scene.json");
        out << R"({
            "width": 48, "height": 40, "n_frames": 3,
            "object_shape": {"type": "disk", "radius": 6},
            "edited_shape": {"type": "rect", "width": 10, "height": 8},
            "start_center": [20, 20], "velocity": [1, 0],
            "object_depth": 0.25, "background_plane": [0.5, 0.1, 0.0],
            "texture": {"type": "flat", "gray": 90}, "seed": 3
        })";
    }
    const SceneSpec spec = load_scene_spec(dir / "scene.json");
    CHECK(spec.width == 48);
    CHECK(spec.height == 40);
    CHECK(spec.object_shape.kind == ShapeSpec::Kind::disk);
    CHECK(spec.edited_shape.kind == ShapeSpec::Kind::rect);
    CHECK(spec.texture.kind == TextureSpec::Kind::flat);
    CHECK_NOTHROW(generate_scene(spec));

    {
        std::ofstream out(dir / "bad.json");
        out << R"({"width": 8, "height": 8, "n_frames": 2, "typo_field": 1,
                   "object_shape": {"type": "disk", "radius": 2},
                   "edited_shape": {"type": "none"},
                   "start_center": [4, 4], "velocity": [0, 0],
                   "object_depth": 0.2, "background_plane": [0.5, 0, 0]})";
    }
    try {
        load_scene_spec(dir / "bad.json");
        FAIL("expected schema_error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::schema_error);
    }
}
