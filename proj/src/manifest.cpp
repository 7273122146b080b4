#include "shapesim/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "shapesim/io.hpp"

namespace shapesim {

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

std::vector<std::filesystem::path> parse_path_list(const json& arr, const std::string& field) {
    if (!arr.is_array()) {
        throw Error(ErrorCategory::schema_error, "\"" + field + "\" must be an array of paths");
    }
    std::vector<std::filesystem::path> out;
    for (const auto& entry : arr) {
        if (!entry.is_string()) {
            throw Error(ErrorCategory::schema_error, "\"" + field + "\" entries must be strings");
        }
        out.emplace_back(entry.get<std::string>());
    }
    return out;
}

void require_exists(const std::filesystem::path& p, const std::string& field) {
    if (!std::filesystem::exists(p)) {
        throw Error(ErrorCategory::missing_asset, field + " asset missing: " + p.string());
    }
}

template <typename GridT>
void check_grid_dims(const GridT& g, const SceneManifest& m, const std::filesystem::path& p) {
    if (g.width != m.width || g.height != m.height) {
        throw Error(ErrorCategory::dimension_mismatch,
                    p.string() + " is " + std::to_string(g.width) + "x" +
                        std::to_string(g.height) + ", manifest says " + std::to_string(m.width) +
                        "x" + std::to_string(m.height));
    }
}

}  // namespace

std::optional<DepthStrategy> parse_strategy(const std::string& s) {
    if (s == "source-depth") return DepthStrategy::source_depth;
    if (s == "pasted-depth") return DepthStrategy::pasted_depth;
    if (s == "warp-first-depth") return DepthStrategy::warp_first_depth;
    if (s == "refined-depth") return DepthStrategy::refined_depth;
    return std::nullopt;
}

std::optional<MaskConvention> parse_convention(const std::string& s) {
    if (s == "zero-inside-repair") return MaskConvention::zero_inside_repair;
    if (s == "zero-outside-repair") return MaskConvention::zero_outside_repair;
    return std::nullopt;
}

SceneManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCategory::missing_asset, "cannot open manifest " + path.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::schema_error,
                    "manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCategory::schema_error, "manifest root must be an object");
    }

    SceneManifest m;
    m.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    try {
        reject_unknown_keys(doc,
                            {"version", "width", "height", "n_frames", "frames", "masks",
                             "depths", "flows", "edited_first_mask", "edited_first_frame",
                             "prompt_text", "depth_orientation", "strategy", "morphology",
                             "refine"},
                            "manifest");
        m.version = doc.at("version").get<int>();
        if (m.version != 1) {
            throw Error(ErrorCategory::schema_error,
                        "unsupported manifest version " + std::to_string(m.version));
        }
        m.width = doc.at("width").get<int>();
        m.height = doc.at("height").get<int>();
        m.n_frames = doc.at("n_frames").get<int>();
        if (m.width < 1 || m.height < 1) {
            throw Error(ErrorCategory::schema_error, "width/height must be positive");
        }
        if (m.n_frames < 2) {
            throw Error(ErrorCategory::schema_error, "n_frames must be at least 2");
        }

        m.mask_paths = parse_path_list(doc.at("masks"), "masks");
        m.depth_paths = parse_path_list(doc.at("depths"), "depths");
        m.flow_paths = parse_path_list(doc.at("flows"), "flows");
        if (doc.contains("frames")) {
            m.frame_paths = parse_path_list(doc["frames"], "frames");
        }
        if (!doc.contains("edited_first_mask") || !doc["edited_first_mask"].is_string()) {
            throw Error(ErrorCategory::schema_error, "\"edited_first_mask\" path is required");
        }
        m.edited_first_mask = doc["edited_first_mask"].get<std::string>();
        if (doc.contains("edited_first_frame")) {
            m.edited_first_frame = std::filesystem::path(doc["edited_first_frame"].get<std::string>());
        }
        m.prompt_text = doc.value("prompt_text", "");
        m.depth_orientation = doc.value("depth_orientation", "");

        if (doc.contains("strategy")) {
            const std::string s = doc["strategy"].get<std::string>();
            const auto strategy = parse_strategy(s);
            if (!strategy) {
                throw Error(ErrorCategory::schema_error,
                            "\"strategy\": unknown value \"" + s + "\"");
            }
            m.strategy = *strategy;
        }
        if (doc.contains("morphology")) {
            const auto& morph = doc["morphology"];
            reject_unknown_keys(morph, {"shape", "radius"}, "morphology");
            const std::string shape = morph.value("shape", "disk");
            if (shape == "disk") {
                m.morphology.shape = StructuringElement::Shape::disk;
            } else if (shape == "square") {
                m.morphology.shape = StructuringElement::Shape::square;
            } else {
                throw Error(ErrorCategory::schema_error,
                            "\"morphology.shape\": unknown value \"" + shape + "\"");
            }
            m.morphology.radius = morph.value("radius", 11);
            if (m.morphology.radius < 0) {
                throw Error(ErrorCategory::schema_error, "\"morphology.radius\" must be >= 0");
            }
        }
        if (doc.contains("refine")) {
            const auto& refine = doc["refine"];
            reject_unknown_keys(refine, {"tolerance", "max_iterations", "convention"}, "refine");
            m.refine.tolerance = refine.value("tolerance", m.refine.tolerance);
            m.refine.max_iterations = refine.value("max_iterations", m.refine.max_iterations);
            if (m.refine.tolerance <= 0.0) {
                throw Error(ErrorCategory::schema_error, "\"refine.tolerance\" must be positive");
            }
            if (m.refine.max_iterations < 1) {
                throw Error(ErrorCategory::schema_error, "\"refine.max_iterations\" must be >= 1");
            }
            if (refine.contains("convention")) {
                const std::string c = refine["convention"].get<std::string>();
                const auto convention = parse_convention(c);
                if (!convention) {
                    throw Error(ErrorCategory::schema_error,
                                "\"refine.convention\": unknown value \"" + c + "\"");
                }
                m.refine.convention = *convention;
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::schema_error, "manifest " + path.string() + ": " + e.what());
    }

    if (static_cast<int>(m.mask_paths.size()) != m.n_frames) {
        throw Error(ErrorCategory::length_mismatch,
                    "expected " + std::to_string(m.n_frames) + " masks, got " +
                        std::to_string(m.mask_paths.size()));
    }
    if (static_cast<int>(m.depth_paths.size()) != m.n_frames) {
        throw Error(ErrorCategory::length_mismatch,
                    "expected " + std::to_string(m.n_frames) + " depths, got " +
                        std::to_string(m.depth_paths.size()));
    }
    if (static_cast<int>(m.flow_paths.size()) != m.n_frames - 1) {
        throw Error(ErrorCategory::length_mismatch,
                    "expected " + std::to_string(m.n_frames - 1) + " flows, got " +
                        std::to_string(m.flow_paths.size()));
    }
    if (!m.frame_paths.empty() && static_cast<int>(m.frame_paths.size()) != m.n_frames) {
        throw Error(ErrorCategory::length_mismatch,
                    "expected " + std::to_string(m.n_frames) + " frames, got " +
                        std::to_string(m.frame_paths.size()));
    }

    // resolve relative paths and make sure everything exists before decoding
    auto resolve = [&](const std::filesystem::path& p) {
        return p.is_absolute() ? p : m.base_dir / p;
    };
    for (auto& p : m.mask_paths) p = resolve(p);
    for (auto& p : m.depth_paths) p = resolve(p);
    for (auto& p : m.flow_paths) p = resolve(p);
    for (auto& p : m.frame_paths) p = resolve(p);
    m.edited_first_mask = resolve(m.edited_first_mask);
    if (m.edited_first_frame) m.edited_first_frame = resolve(*m.edited_first_frame);

    for (const auto& p : m.mask_paths) require_exists(p, "mask");
    for (const auto& p : m.depth_paths) require_exists(p, "depth");
    for (const auto& p : m.flow_paths) require_exists(p, "flow");
    for (const auto& p : m.frame_paths) require_exists(p, "frame");
    require_exists(m.edited_first_mask, "edited_first_mask");
    if (m.edited_first_frame) require_exists(*m.edited_first_frame, "edited_first_frame");

    load_assets(m);  // decodes everything: dimension and payload validation
    return m;
}

SceneAssets load_assets(const SceneManifest& m) {
    SceneAssets assets;
    assets.masks.reserve(m.mask_paths.size());
    for (const auto& p : m.mask_paths) {
        assets.masks.push_back(read_mask(p));
        check_grid_dims(assets.masks.back(), m, p);
    }
    assets.depths.reserve(m.depth_paths.size());
    for (const auto& p : m.depth_paths) {
        assets.depths.push_back(read_depth(p));
        check_grid_dims(assets.depths.back(), m, p);
    }
    assets.flows.reserve(m.flow_paths.size());
    for (const auto& p : m.flow_paths) {
        assets.flows.push_back(read_flow(p));
        check_grid_dims(assets.flows.back(), m, p);
    }
    for (const auto& p : m.frame_paths) {
        assets.frames.push_back(read_frame(p));
        check_grid_dims(assets.frames.back(), m, p);
    }
    assets.edited_first_mask = read_mask(m.edited_first_mask);
    check_grid_dims(assets.edited_first_mask, m, m.edited_first_mask);
    if (m.edited_first_frame) {
        const RgbImage first = read_frame(*m.edited_first_frame);
        check_grid_dims(first, m, *m.edited_first_frame);
    }
    return assets;
}

}  // namespace shapesim
