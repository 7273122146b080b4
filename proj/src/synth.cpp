#include "shapesim/synth.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "shapesim/io.hpp"

namespace shapesim {

namespace {

constexpr std::uint8_t kObjectColor[3] = {200, 80, 60};
constexpr std::uint8_t kCheckerLo = 70;
constexpr std::uint8_t kCheckerHi = 180;

bool inside_shape(const ShapeSpec& shape, double cx, double cy, double px, double py) {
    switch (shape.kind) {
        case ShapeSpec::Kind::disk: {
            const double dx = px - cx;
            const double dy = py - cy;
            return dx * dx + dy * dy <= shape.radius * shape.radius;
        }
        case ShapeSpec::Kind::rect:
            return std::abs(px - cx) <= shape.width / 2.0 &&
                   std::abs(py - cy) <= shape.height / 2.0;
        case ShapeSpec::Kind::none:
            return false;
    }
    return false;
}

void check_stays_inside(const SceneSpec& spec, const ShapeSpec& shape, const char* name) {
    if (shape.kind == ShapeSpec::Kind::none || spec.allow_exit) return;
    double half_w = 0.0, half_h = 0.0;
    if (shape.kind == ShapeSpec::Kind::disk) {
        half_w = half_h = shape.radius;
    } else {
        half_w = shape.width / 2.0;
        half_h = shape.height / 2.0;
    }
    for (int k = 0; k < spec.n_frames; ++k) {
        const double cx = spec.start_cx + k * spec.velocity_x;
        const double cy = spec.start_cy + k * spec.velocity_y;
        if (cx - half_w < 1.0 || cx + half_w > spec.width - 1.0 || cy - half_h < 1.0 ||
            cy + half_h > spec.height - 1.0) {
            throw Error(ErrorCategory::spec_invalid,
                        std::string(name) + " leaves the frame at step " + std::to_string(k + 1) +
                            " and exit was not requested");
        }
    }
}

RgbImage render_frame(const SceneSpec& spec, const BinaryMask& mask) {
    RgbImage frame(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            std::uint8_t g;
            if (spec.texture.kind == TextureSpec::Kind::checkerboard) {
                const int cell = std::max(1, spec.texture.cell);
                g = ((x / cell) + (y / cell)) % 2 == 0 ? kCheckerLo : kCheckerHi;
            } else {
                g = static_cast<std::uint8_t>(spec.texture.gray);
            }
            if (mask.at(x, y)) {
                frame.at(x, y, 0) = kObjectColor[0];
                frame.at(x, y, 1) = kObjectColor[1];
                frame.at(x, y, 2) = kObjectColor[2];
            } else {
                frame.at(x, y, 0) = g;
                frame.at(x, y, 1) = g;
                frame.at(x, y, 2) = g;
            }
        }
    }
    return frame;
}

DepthMap render_depth(const SceneSpec& spec, const BinaryMask& mask) {
    DepthMap depth(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            depth.at(x, y) = mask.at(x, y) ? spec.object_depth : background_depth(spec, x, y);
        }
    }
    return depth;
}

}  // namespace

float background_depth(const SceneSpec& spec, int x, int y) {
    return static_cast<float>(spec.plane_a + spec.plane_b * x / spec.width +
                              spec.plane_c * y / spec.height);
}

BinaryMask rasterize_shape(const ShapeSpec& shape, double cx, double cy, int width, int height) {
    BinaryMask mask(width, height, 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (inside_shape(shape, cx, cy, x + 0.5, y + 0.5)) {
                mask.at(x, y) = 1;
            }
        }
    }
    return mask;
}

SceneBundle generate_scene(const SceneSpec& spec) {
    if (spec.width < 1 || spec.height < 1) {
        throw Error(ErrorCategory::spec_invalid, "scene dimensions must be positive");
    }
    if (spec.n_frames < 2) {
        throw Error(ErrorCategory::spec_invalid, "scene needs at least 2 frames");
    }
    if (spec.object_shape.kind == ShapeSpec::Kind::none) {
        throw Error(ErrorCategory::spec_invalid, "object shape cannot be empty");
    }
    check_stays_inside(spec, spec.object_shape, "object shape");
    check_stays_inside(spec, spec.edited_shape, "edited shape");

    SceneBundle bundle;
    bundle.spec = spec;
    for (int k = 0; k < spec.n_frames; ++k) {
        const double cx = spec.start_cx + k * spec.velocity_x;
        const double cy = spec.start_cy + k * spec.velocity_y;
        BinaryMask mask = rasterize_shape(spec.object_shape, cx, cy, spec.width, spec.height);
        BinaryMask edited = rasterize_shape(spec.edited_shape, cx, cy, spec.width, spec.height);

        bundle.frames.push_back(render_frame(spec, mask));
        bundle.depths.push_back(render_depth(spec, mask));
        bundle.gt_edited_frames.push_back(render_frame(spec, edited));
        bundle.gt_edited_depths.push_back(render_depth(spec, edited));

        if (k + 1 < spec.n_frames) {
            FlowField flow(spec.width, spec.height, 0.0f);
            for (int y = 0; y < spec.height; ++y) {
                for (int x = 0; x < spec.width; ++x) {
                    if (mask.at(x, y)) {
                        flow.at(x, y, 0) = static_cast<float>(spec.velocity_x);
                        flow.at(x, y, 1) = static_cast<float>(spec.velocity_y);
                    }
                }
            }
            bundle.flows.push_back(std::move(flow));
        }
        bundle.masks.push_back(std::move(mask));
        bundle.gt_edited_masks.push_back(std::move(edited));
    }
    return bundle;
}

namespace {

std::string frame_name(int index, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d.%s", index, ext);
    return buf;
}

}  // namespace

std::filesystem::path export_scene(const SceneBundle& bundle, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const SceneSpec& spec = bundle.spec;
    for (const char* sub :
         {"frames", "masks", "depths", "flows", "gt/edited_masks", "gt/edited_depths",
          "gt/edited_frames"}) {
        fs::create_directories(dir / sub);
    }

    nlohmann::json manifest;
    manifest["version"] = 1;
    manifest["width"] = spec.width;
    manifest["height"] = spec.height;
    manifest["n_frames"] = spec.n_frames;
    manifest["strategy"] = "refined-depth";
    manifest["morphology"] = {{"shape", "disk"}, {"radius", 3}};
    manifest["depth_orientation"] = "unspecified";

    std::vector<std::string> frame_paths, mask_paths, depth_paths, flow_paths;
    for (int k = 0; k < spec.n_frames; ++k) {
        const std::string frame_rel = "frames/" + frame_name(k + 1, "ppm");
        const std::string mask_rel = "masks/" + frame_name(k + 1, "pgm");
        const std::string depth_rel = "depths/" + frame_name(k + 1, "pfm");
        write_frame(bundle.frames[k], dir / frame_rel);
        write_mask(bundle.masks[k], dir / mask_rel);
        write_depth(bundle.depths[k], dir / depth_rel);
        frame_paths.push_back(frame_rel);
        mask_paths.push_back(mask_rel);
        depth_paths.push_back(depth_rel);

        write_mask(bundle.gt_edited_masks[k], dir / "gt/edited_masks" / frame_name(k + 1, "pgm"));
        write_depth(bundle.gt_edited_depths[k], dir / "gt/edited_depths" / frame_name(k + 1, "pfm"));
        write_frame(bundle.gt_edited_frames[k], dir / "gt/edited_frames" / frame_name(k + 1, "ppm"));

        if (k + 1 < spec.n_frames) {
            const std::string flow_rel = "flows/" + frame_name(k + 1, "flo");
            write_flow(bundle.flows[k], dir / flow_rel);
            flow_paths.push_back(flow_rel);
        }
    }
    write_mask(bundle.gt_edited_masks[0], dir / "edited_first_mask.pgm");
    write_frame(bundle.gt_edited_frames[0], dir / "edited_first_frame.ppm");

    manifest["frames"] = frame_paths;
    manifest["masks"] = mask_paths;
    manifest["depths"] = depth_paths;
    manifest["flows"] = flow_paths;
    manifest["edited_first_mask"] = "edited_first_mask.pgm";
    manifest["edited_first_frame"] = "edited_first_frame.ppm";

    fs::path manifest_path = dir / "manifest.json";
    std::ofstream out(manifest_path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCategory::io_error, "cannot write " + manifest_path.string());
    }
    out << manifest.dump(2) << "\n";
    out.flush();
    if (!out) {
        throw Error(ErrorCategory::io_error, "write failed: " + manifest_path.string());
    }
    return manifest_path;
}

SceneSpec preset_scene(const std::string& name) {
    SceneSpec spec;
    if (name == "standard") {
        // disk -> square edit moving diagonally; integer velocity, so the
        // propagated masks are exact translations
        spec.width = 64;
        spec.height = 64;
        spec.n_frames = 16;
        spec.object_shape = {ShapeSpec::Kind::disk, 10.0, 0.0, 0.0};
        spec.edited_shape = {ShapeSpec::Kind::rect, 0.0, 16.0, 16.0};
        spec.start_cx = 14.0;
        spec.start_cy = 20.0;
        spec.velocity_x = 2.0;
        spec.velocity_y = 1.0;
        spec.object_depth = 0.2f;
        spec.plane_a = 0.6;
        spec.plane_b = 0.2;
        spec.plane_c = 0.15;
        spec.texture = {TextureSpec::Kind::checkerboard, 8, 128};
        spec.seed = 7;
    } else if (name == "shrunken") {
        // edit smaller than the original object: leaves residual object depth
        // outside the edited shape for the refinement stage to remove
        spec.width = 64;
        spec.height = 64;
        spec.n_frames = 8;
        spec.object_shape = {ShapeSpec::Kind::disk, 10.0, 0.0, 0.0};
        spec.edited_shape = {ShapeSpec::Kind::disk, 5.0, 0.0, 0.0};
        spec.start_cx = 20.0;
        spec.start_cy = 24.0;
        spec.velocity_x = 1.0;
        spec.velocity_y = 0.0;
        spec.object_depth = 0.2f;
        spec.plane_a = 0.55;
        spec.plane_b = 0.12;
        spec.plane_c = 0.08;
        spec.texture = {TextureSpec::Kind::checkerboard, 8, 128};
        spec.seed = 11;
    } else if (name == "inpainting") {
        // object removed entirely: empty edited shape
        spec.width = 64;
        spec.height = 64;
        spec.n_frames = 8;
        spec.object_shape = {ShapeSpec::Kind::disk, 10.0, 0.0, 0.0};
        spec.edited_shape = {ShapeSpec::Kind::none, 0.0, 0.0, 0.0};
        spec.start_cx = 14.0;
        spec.start_cy = 20.0;
        spec.velocity_x = 2.0;
        spec.velocity_y = 1.0;
        spec.object_depth = 0.2f;
        spec.plane_a = 0.6;
        spec.plane_b = 0.2;
        spec.plane_c = 0.15;
        spec.texture = {TextureSpec::Kind::checkerboard, 8, 128};
        spec.seed = 13;
    } else if (name == "checkerboard") {
        // fractional velocity over a strong texture; exercises bilinear
        // sampling in the warping-error metric
        spec.width = 64;
        spec.height = 64;
        spec.n_frames = 8;
        spec.object_shape = {ShapeSpec::Kind::disk, 9.0, 0.0, 0.0};
        spec.edited_shape = {ShapeSpec::Kind::rect, 0.0, 12.0, 12.0};
        spec.start_cx = 20.0;
        spec.start_cy = 24.0;
        spec.velocity_x = 1.5;
        spec.velocity_y = 0.5;
        spec.object_depth = 0.3f;
        spec.plane_a = 0.6;
        spec.plane_b = 0.2;
        spec.plane_c = 0.15;
        spec.texture = {TextureSpec::Kind::checkerboard, 8, 128};
        spec.seed = 17;
    } else {
        throw Error(ErrorCategory::spec_invalid, "unknown scene preset: " + name);
    }
    return spec;
}

std::vector<std::string> preset_names() {
    return {"standard", "shrunken", "inpainting", "checkerboard"};
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw Error(ErrorCategory::schema_error,
                        "unknown field \"" + it.key() + "\" in " + context);
        }
    }
}

ShapeSpec parse_shape(const json& obj, const std::string& context) {
    if (!obj.is_object() || !obj.contains("type")) {
        throw Error(ErrorCategory::schema_error, context + " must be an object with a type");
    }
    reject_unknown_keys(obj, {"type", "radius", "width", "height"}, context);
    ShapeSpec shape;
    const std::string type = obj["type"].get<std::string>();
    if (type == "disk") {
        shape.kind = ShapeSpec::Kind::disk;
        shape.radius = obj.at("radius").get<double>();
        if (shape.radius <= 0.0) {
            throw Error(ErrorCategory::schema_error, context + ": disk radius must be positive");
        }
    } else if (type == "rect") {
        shape.kind = ShapeSpec::Kind::rect;
        shape.width = obj.at("width").get<double>();
        shape.height = obj.at("height").get<double>();
        if (shape.width <= 0.0 || shape.height <= 0.0) {
            throw Error(ErrorCategory::schema_error, context + ": rect extents must be positive");
        }
    } else if (type == "none") {
        shape.kind = ShapeSpec::Kind::none;
    } else {
        throw Error(ErrorCategory::schema_error, context + ": unknown shape type \"" + type + "\"");
    }
    return shape;
}

}  // namespace

SceneSpec load_scene_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCategory::missing_asset, "cannot open scene spec " + path.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::schema_error,
                    "bad scene spec " + path.string() + ": " + e.what());
    }

    try {
        reject_unknown_keys(doc,
                            {"width", "height", "n_frames", "object_shape", "edited_shape",
                             "start_center", "velocity", "object_depth", "background_plane",
                             "texture", "seed", "allow_exit"},
                            "scene spec");
        SceneSpec spec;
        spec.width = doc.at("width").get<int>();
        spec.height = doc.at("height").get<int>();
        spec.n_frames = doc.at("n_frames").get<int>();
        spec.object_shape = parse_shape(doc.at("object_shape"), "object_shape");
        spec.edited_shape = parse_shape(doc.at("edited_shape"), "edited_shape");
        const auto center = doc.at("start_center");
        const auto velocity = doc.at("velocity");
        const auto plane = doc.at("background_plane");
        if (!center.is_array() || center.size() != 2 || !velocity.is_array() ||
            velocity.size() != 2 || !plane.is_array() || plane.size() != 3) {
            throw Error(ErrorCategory::schema_error,
                        "start_center/velocity need 2 entries, background_plane needs 3");
        }
        spec.start_cx = center[0].get<double>();
        spec.start_cy = center[1].get<double>();
        spec.velocity_x = velocity[0].get<double>();
        spec.velocity_y = velocity[1].get<double>();
        spec.object_depth = doc.at("object_depth").get<float>();
        spec.plane_a = plane[0].get<double>();
        spec.plane_b = plane[1].get<double>();
        spec.plane_c = plane[2].get<double>();
        if (doc.contains("texture")) {
            const auto& tex = doc["texture"];
            reject_unknown_keys(tex, {"type", "cell", "gray"}, "texture");
            const std::string type = tex.at("type").get<std::string>();
            if (type == "checkerboard") {
                spec.texture.kind = TextureSpec::Kind::checkerboard;
                spec.texture.cell = tex.value("cell", 8);
            } else if (type == "flat") {
                spec.texture.kind = TextureSpec::Kind::flat;
                spec.texture.gray = tex.value("gray", 128);
            } else {
                throw Error(ErrorCategory::schema_error, "unknown texture type \"" + type + "\"");
            }
        }
        spec.seed = doc.value("seed", 0);
        spec.allow_exit = doc.value("allow_exit", false);
        return spec;
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::schema_error,
                    "bad scene spec " + path.string() + ": " + e.what());
    }
}

}  // namespace shapesim
