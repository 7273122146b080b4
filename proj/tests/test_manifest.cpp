#include <doctest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "shapesim/manifest.hpp"
#include "shapesim/synth.hpp"

#include "test_util.hpp"

using namespace shapesim;
using testutil::TempDir;

namespace {

// exported scene manifest as a mutable JSON document for corruption tests
nlohmann::json exported_manifest(const std::filesystem::path& dir, int n_frames = 4) {
    SceneSpec spec = preset_scene("standard");
    spec.n_frames = n_frames;
    const auto manifest_path = export_scene(generate_scene(spec), dir);
    std::ifstream in(manifest_path);
    nlohmann::json doc;
    in >> doc;
    return doc;
}

std::filesystem::path write_manifest(const std::filesystem::path& dir,
                                     const nlohmann::json& doc,
                                     const std::string& name = "edited.json") {
    const auto path = dir / name;
    std::ofstream out(path);
    out << doc.dump(2);
    return path;
}

}  // namespace

TEST_CASE("an exported scene manifest loads and validates") {
    TempDir dir("manifest_ok");
    exported_manifest(dir.path());
    const SceneManifest m = load_manifest(dir.path() / "manifest.json");
    CHECK(m.n_frames == 4);
    CHECK(m.width == 64);
    CHECK(m.strategy == DepthStrategy::refined_depth);
    CHECK(m.morphology.radius == 3);
    CHECK(m.refine.convention == MaskConvention::zero_inside_repair);
    CHECK(m.edited_first_frame.has_value());
}

TEST_CASE("flow count must match the frame count at load time") {
    TempDir dir("manifest_flows");
    nlohmann::json doc = exported_manifest(dir.path());
    doc["flows"].erase(1);  // 4 frames now paired with 2 flows
    try {
        load_manifest(write_manifest(dir.path(), doc));
        FAIL("expected length_mismatch");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::length_mismatch);
    }
}

TEST_CASE("unknown strategy names are schema errors naming the field") {
    TempDir dir("manifest_strategy");
    nlohmann::json doc = exported_manifest(dir.path());
    doc["strategy"] = "telepathy";
    try {
        load_manifest(write_manifest(dir.path(), doc));
        FAIL("expected schema_error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::schema_error);
        CHECK(std::string(e.what()).find("strategy") != std::string::npos);
    }
}

TEST_CASE("unknown manifest fields are rejected") {
    TempDir dir("manifest_unknown");
    nlohmann::json doc = exported_manifest(dir.path());
    doc["strateyg"] = "refined-depth";
    try {
        load_manifest(write_manifest(dir.path(), doc));
        FAIL("expected schema_error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::schema_error);
        CHECK(std::string(e.what()).find("strateyg") != std::string::npos);
    }
}

TEST_CASE("missing assets are reported before any work") {
    TempDir dir("manifest_missing");
    nlohmann::json doc = exported_manifest(dir.path());
    doc["masks"][2] = "masks/nope.pgm";
    try {
        load_manifest(write_manifest(dir.path(), doc));
        FAIL("expected missing_asset");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::missing_asset);
    }
}

TEST_CASE("asset dimensions must match the manifest header") {
    TempDir dir("manifest_dims");
    nlohmann::json doc = exported_manifest(dir.path());
    doc["width"] = 32;  // files are 64 wide
    try {
        load_manifest(write_manifest(dir.path(), doc));
        FAIL("expected dimension_mismatch");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::dimension_mismatch);
    }
}

TEST_CASE("malformed JSON and bad versions are schema errors") {
    TempDir dir("manifest_json");
    {
        std::ofstream out(dir / "broken.json");
        out << "{ not json";
    }
    try {
        load_manifest(dir / "broken.json");
        FAIL("expected schema_error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::schema_error);
    }

    nlohmann::json doc = exported_manifest(dir.path());
    doc["version"] = 99;
    try {
        load_manifest(write_manifest(dir.path(), doc));
        FAIL("expected schema_error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::schema_error);
    }
}

TEST_CASE("refine block is validated") {
    TempDir dir("manifest_refine");
    nlohmann::json doc = exported_manifest(dir.path());
    doc["refine"] = {{"tolerance", -1.0}};
    try {
        load_manifest(write_manifest(dir.path(), doc));
        FAIL("expected schema_error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::schema_error);
    }
    doc["refine"] = {{"convention", "zero-outside-repair"}, {"max_iterations", 500}};
    const SceneManifest m = load_manifest(write_manifest(dir.path(), doc, "ok.json"));
    CHECK(m.refine.convention == MaskConvention::zero_outside_repair);
    CHECK(m.refine.max_iterations == 500);
}
