// Command-line front end: manifest-driven simulation runs, synthetic scene
// generation, and the sequence metrics.
//
// Exit codes: 0 success, 2 validation error, 3 runtime error, 4 fill solver
// did not converge and --strict was given. Failures print one JSON line on
// stderr: {"error": "<category>", "message": "..."}.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "shapesim/io.hpp"
#include "shapesim/manifest.hpp"
#include "shapesim/metrics.hpp"
#include "shapesim/pipeline.hpp"
#include "shapesim/synth.hpp"

namespace fs = std::filesystem;
using namespace shapesim;

namespace {

void print_error(const std::string& category, const std::string& message) {
    nlohmann::json line;
    line["error"] = category;
    line["message"] = message;
    std::cerr << line.dump() << "\n";
}

int exit_code_for(ErrorCategory c) { return is_validation_error(c) ? 2 : 3; }

std::vector<fs::path> list_files(const fs::path& dir, const std::string& ext) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCategory::missing_asset, dir.string() + " is not a directory");
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) {
        throw Error(ErrorCategory::missing_asset,
                    "no " + ext + " files in " + dir.string());
    }
    return out;
}

DepthStrategy strategy_from_flag(const std::string& s) {
    const auto strategy = parse_strategy(s);
    if (!strategy) {
        throw Error(ErrorCategory::schema_error, "unknown strategy \"" + s + "\"");
    }
    return *strategy;
}

MaskConvention convention_from_flag(const std::string& s) {
    const auto convention = parse_convention(s);
    if (!convention) {
        throw Error(ErrorCategory::schema_error, "unknown mask convention \"" + s + "\"");
    }
    return *convention;
}

int cmd_simulate(const std::string& manifest_path, const std::string& out_dir,
                 const std::string& strategy_flag, int dilation_radius_flag,
                 const std::string& convention_flag, bool no_intermediates, bool strict) {
    const SceneManifest manifest = load_manifest(manifest_path);
    RunOptions opts;
    opts.out_dir = out_dir;
    opts.write_intermediates = !no_intermediates;
    if (!strategy_flag.empty()) opts.strategy = strategy_from_flag(strategy_flag);
    if (dilation_radius_flag >= 0) opts.dilation_radius = dilation_radius_flag;
    if (!convention_flag.empty()) opts.convention = convention_from_flag(convention_flag);

    const RunResult result = run_pipeline(manifest, opts);
    for (const auto& warning : result.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    std::printf("strategy: %s\n", to_string(result.strategy));
    std::printf("outputs:  %s (%zu masks, %zu flows, %zu depth maps)\n", out_dir.c_str(),
                result.mask_paths.size(), result.flow_paths.size(),
                result.depth_refined_paths.size());
    for (const auto& t : result.timings) {
        std::printf("  %-8s %8.2f ms\n", t.stage.c_str(), t.ms);
    }
    if (strict && !result.refine_converged) {
        print_error("non_convergence", "fill solver hit the iteration cap");
        return 4;
    }
    return 0;
}

int cmd_synth(const std::string& spec_arg, const std::string& out_dir) {
    SceneSpec spec;
    const auto presets = preset_names();
    if (std::find(presets.begin(), presets.end(), spec_arg) != presets.end()) {
        spec = preset_scene(spec_arg);
    } else {
        spec = load_scene_spec(spec_arg);
    }
    const SceneBundle bundle = generate_scene(spec);
    const fs::path manifest_path = export_scene(bundle, out_dir);
    std::printf("wrote %d frames to %s\n", spec.n_frames, out_dir.c_str());
    std::printf("manifest: %s\n", manifest_path.string().c_str());
    return 0;
}

int cmd_metrics_we(const std::string& frames_dir, const std::string& flows_dir,
                   const std::string& report_path) {
    std::vector<RgbImage> frames;
    for (const auto& p : list_files(frames_dir, ".ppm")) {
        frames.push_back(read_frame(p));
    }
    std::vector<FlowField> flows;
    for (const auto& p : list_files(flows_dir, ".flo")) {
        flows.push_back(read_flow(p));
    }
    const MetricReport report = warping_error(frames, flows);
    write_report(report, report_path);
    std::printf("warping error: mean %.6f over %zu steps (valid fraction %.4f)\n", report.mean,
                report.per_frame.size(), report.valid_fraction);
    return 0;
}

int cmd_metrics_iou(const std::string& pred_dir, const std::string& truth_dir,
                    const std::string& report_path) {
    std::vector<BinaryMask> pred, truth;
    for (const auto& p : list_files(pred_dir, ".pgm")) {
        pred.push_back(read_mask(p));
    }
    for (const auto& p : list_files(truth_dir, ".pgm")) {
        truth.push_back(read_mask(p));
    }
    const MetricReport report = mask_sequence_iou(pred, truth);
    write_report(report, report_path);
    std::printf("mask IoU: mean %.6f over %zu frames\n", report.mean, report.per_frame.size());
    return 0;
}

int cmd_inspect(const std::string& manifest_path) {
    const SceneManifest manifest = load_manifest(manifest_path);
    std::printf("ok: %d frames, %dx%d, strategy %s, dilation %s/%d\n", manifest.n_frames,
                manifest.width, manifest.height, to_string(manifest.strategy),
                manifest.morphology.shape == StructuringElement::Shape::disk ? "disk" : "square",
                manifest.morphology.radius);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shape-consistent motion and depth simulation for edited videos"};
    app.require_subcommand(1);

    std::string manifest_path, out_dir, strategy_flag, convention_flag;
    int dilation_radius = -1;
    bool no_intermediates = false;
    bool strict = false;

    auto* simulate = app.add_subcommand(
        "simulate", "Run the simulation pipeline described by a manifest");
    simulate->add_option("--manifest", manifest_path, "Manifest JSON path")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--strategy", strategy_flag,
                         "Override depth strategy: source-depth | pasted-depth | "
                         "warp-first-depth | refined-depth");
    simulate->add_option("--dilation-radius", dilation_radius,
                         "Override the structuring element radius");
    simulate->add_option("--mask-convention", convention_flag,
                         "Override refine convention: zero-inside-repair | zero-outside-repair");
    simulate->add_flag("--no-intermediates", no_intermediates,
                       "Keep only the edited masks and final depth maps");
    simulate->add_flag("--strict", strict, "Exit with code 4 if the fill solver did not converge");

    std::string spec_arg, synth_out;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic scene with ground truth");
    synth->add_option("--spec", spec_arg, "Scene spec JSON path or preset name")->required();
    synth->add_option("--out", synth_out, "Output directory")->required();

    auto* metrics = app.add_subcommand("metrics", "Sequence metrics");
    metrics->require_subcommand(1);
    std::string frames_dir, flows_dir, report_path, pred_dir, truth_dir;
    auto* we = metrics->add_subcommand("we", "Warping error of adjacent frames");
    we->add_option("--frames", frames_dir, "Directory of .ppm frames")->required();
    we->add_option("--flows", flows_dir, "Directory of .flo flows")->required();
    we->add_option("--report", report_path, "Report JSON output path")->required();
    auto* iou_cmd = metrics->add_subcommand("iou", "Mask sequence IoU");
    iou_cmd->add_option("--pred", pred_dir, "Directory of predicted .pgm masks")->required();
    iou_cmd->add_option("--truth", truth_dir, "Directory of ground-truth .pgm masks")->required();
    iou_cmd->add_option("--report", report_path, "Report JSON output path")->required();

    std::string inspect_manifest;
    auto* inspect = app.add_subcommand("inspect", "Validate a manifest without writing anything");
    inspect->add_option("--manifest", inspect_manifest, "Manifest JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help and friends
        }
        print_error("schema_error", e.what());
        return 2;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(manifest_path, out_dir, strategy_flag, dilation_radius,
                                convention_flag, no_intermediates, strict);
        }
        if (synth->parsed()) {
            return cmd_synth(spec_arg, synth_out);
        }
        if (metrics->parsed()) {
            if (we->parsed()) return cmd_metrics_we(frames_dir, flows_dir, report_path);
            if (iou_cmd->parsed()) return cmd_metrics_iou(pred_dir, truth_dir, report_path);
        }
        if (inspect->parsed()) {
            return cmd_inspect(inspect_manifest);
        }
    } catch (const Error& e) {
        print_error(to_string(e.category()), e.what());
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 3;
    }
    return 0;
}
