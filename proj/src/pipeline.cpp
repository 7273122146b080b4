#include "shapesim/pipeline.hpp"

#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "shapesim/depth.hpp"
#include "shapesim/io.hpp"
#include "shapesim/refine.hpp"

namespace shapesim {

namespace {

namespace fs = std::filesystem;

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto time(const std::string& stage, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            record(stage, start);
        } else {
            auto result = f();
            record(stage, start);
            return result;
        }
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        sink_.push_back({stage, std::chrono::duration<double, std::milli>(elapsed).count()});
    }

    std::vector<StageTiming>& sink_;
};

std::string numbered(int index, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d.%s", index, ext);
    return buf;
}

void copy_file_bytes(const fs::path& from, const fs::path& to) {
    std::error_code ec;
    fs::copy_file(from, to, fs::copy_options::overwrite_existing, ec);
    if (ec) {
        throw Error(ErrorCategory::io_error,
                    "cannot copy " + from.string() + " to " + to.string() + ": " + ec.message());
    }
}

}  // namespace

std::vector<SimulationState> collect_states(const MotionResult& motion,
                                            const std::vector<DepthMap>& simulated_depths) {
    if (motion.masks.size() != simulated_depths.size() ||
        motion.flows.size() + 1 != motion.masks.size()) {
        throw Error(ErrorCategory::length_mismatch,
                    "collect_states: inconsistent simulation output lengths");
    }
    std::vector<SimulationState> states;
    states.reserve(motion.masks.size());
    for (std::size_t k = 0; k < motion.masks.size(); ++k) {
        SimulationState state;
        state.frame_index = static_cast<int>(k) + 1;
        state.edited_mask = motion.masks[k];
        if (k < motion.flows.size()) state.simulated_flow = motion.flows[k];
        state.simulated_depth = simulated_depths[k];
        states.push_back(std::move(state));
    }
    return states;
}

RunResult run_pipeline(const SceneManifest& manifest, const RunOptions& opts) {
    SceneManifest effective = manifest;
    if (opts.strategy) effective.strategy = *opts.strategy;
    if (opts.dilation_radius) {
        if (*opts.dilation_radius < 0) {
            throw Error(ErrorCategory::schema_error, "dilation radius must be >= 0");
        }
        effective.morphology.radius = *opts.dilation_radius;
    }
    if (opts.convention) effective.refine.convention = *opts.convention;

    RunResult result;
    result.strategy = effective.strategy;
    StageClock clock(result.timings);

    const SceneAssets assets = clock.time("load", [&] { return load_assets(effective); });

    const MotionResult motion = clock.time("motion", [&] {
        return simulate_motion(assets.flows, assets.masks, assets.edited_first_mask,
                               effective.morphology);
    });
    result.warnings.insert(result.warnings.end(), motion.warnings.begin(),
                           motion.warnings.end());

    const DepthSimResult depth_sim = clock.time("depth", [&] {
        return simulate_depth(assets.depths, assets.masks, motion.masks, effective.strategy,
                              assets.flows);
    });
    result.warnings.insert(result.warnings.end(), depth_sim.warnings.begin(),
                           depth_sim.warnings.end());

    std::vector<DepthMap> final_depths;
    if (effective.strategy == DepthStrategy::refined_depth) {
        RefineSequenceResult refined = clock.time("refine", [&] {
            return refine_sequence(depth_sim.depths, assets.masks, motion.masks,
                                   assets.edited_first_mask, effective.refine,
                                   effective.morphology);
        });
        result.warnings.insert(result.warnings.end(), refined.warnings.begin(),
                               refined.warnings.end());
        result.refine_converged = refined.all_converged;
        final_depths = std::move(refined.depths);
    } else {
        final_depths = depth_sim.depths;
    }

    const std::vector<SimulationState> states = collect_states(motion, depth_sim.depths);

    // Stage everything next to the destination, then swap it into place so
    // failures never leave a partial output directory behind.
    fs::path out_dir = opts.out_dir;
    if (out_dir.filename().empty()) {
        out_dir = out_dir.parent_path();  // drop a trailing separator
    }
    if (out_dir.empty()) {
        throw Error(ErrorCategory::schema_error, "output directory must not be empty");
    }
    fs::path staging = out_dir;
    staging += ".partial";
    clock.time("write", [&] {
        fs::remove_all(staging);
        try {
            fs::create_directories(staging / "masks");
            fs::create_directories(staging / "depth_refined");
            if (opts.write_intermediates) {
                fs::create_directories(staging / "flows");
                fs::create_directories(staging / "depth_sim");
            }

            nlohmann::json run_doc;
            run_doc["version"] = 1;
            run_doc["strategy"] = to_string(effective.strategy);
            run_doc["n_frames"] = effective.n_frames;
            run_doc["width"] = effective.width;
            run_doc["height"] = effective.height;
            run_doc["warnings"] = result.warnings;

            std::vector<std::string> mask_rel, flow_rel, sim_rel, refined_rel;
            for (const SimulationState& state : states) {
                const int k = state.frame_index;
                const std::string mask_name = "masks/" + numbered(k, "pgm");
                write_mask(state.edited_mask, staging / mask_name);
                mask_rel.push_back(mask_name);
                result.mask_paths.push_back(out_dir / mask_name);

                const std::string refined_name = "depth_refined/" + numbered(k, "pfm");
                write_depth(final_depths[k - 1], staging / refined_name);
                refined_rel.push_back(refined_name);
                result.depth_refined_paths.push_back(out_dir / refined_name);

                if (opts.write_intermediates) {
                    const std::string sim_name = "depth_sim/" + numbered(k, "pfm");
                    write_depth(state.simulated_depth, staging / sim_name);
                    sim_rel.push_back(sim_name);
                    result.depth_sim_paths.push_back(out_dir / sim_name);
                    if (state.simulated_flow) {
                        const std::string flow_name = "flows/" + numbered(k, "flo");
                        write_flow(*state.simulated_flow, staging / flow_name);
                        flow_rel.push_back(flow_name);
                        result.flow_paths.push_back(out_dir / flow_name);
                    }
                }
            }
            run_doc["masks"] = mask_rel;
            run_doc["flows"] = flow_rel;
            run_doc["depth_sim"] = sim_rel;
            run_doc["depth_refined"] = refined_rel;

            if (effective.edited_first_frame) {
                const std::string name = "edited_first_frame" +
                                         effective.edited_first_frame->extension().string();
                copy_file_bytes(*effective.edited_first_frame, staging / name);
                run_doc["edited_first_frame"] = name;
                result.edited_first_frame = out_dir / name;
            } else {
                run_doc["edited_first_frame"] = nullptr;
            }

            std::ofstream run_out(staging / "run.json", std::ios::trunc);
            if (!run_out) {
                throw Error(ErrorCategory::io_error, "cannot write run.json");
            }
            run_out << run_doc.dump(2) << "\n";
            run_out.flush();
            if (!run_out) {
                throw Error(ErrorCategory::io_error, "write failed: run.json");
            }

            fs::remove_all(out_dir);
            fs::rename(staging, out_dir);
        } catch (...) {
            std::error_code ec;
            fs::remove_all(staging, ec);
            throw;
        }
    });

    return result;
}

}  // namespace shapesim
