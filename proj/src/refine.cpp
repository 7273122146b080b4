#include "shapesim/refine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

namespace shapesim {

const char* to_string(MaskConvention c) {
    return c == MaskConvention::zero_inside_repair ? "zero-inside-repair" : "zero-outside-repair";
}

RefinementInputs prepare_refinement_inputs(const BinaryMask& source_mask,
                                           const BinaryMask& edited_mask,
                                           const DepthMap& simulated_depth,
                                           const BinaryMask& shape_guide,
                                           const StructuringElement& se,
                                           MaskConvention convention) {
    require_same_shape(source_mask, edited_mask, "prepare_refinement_inputs");
    require_same_shape(source_mask, simulated_depth, "prepare_refinement_inputs");
    require_same_shape(source_mask, shape_guide, "prepare_refinement_inputs");

    const BinaryMask residue = intersect(complement(edited_mask), source_mask);
    BinaryMask repair = dilate(residue, se);

    DepthMap masked = convention == MaskConvention::zero_inside_repair
                          ? hadamard(simulated_depth, complement(repair))
                          : hadamard(simulated_depth, repair);

    return RefinementInputs{std::move(masked), std::move(repair), edited_mask, shape_guide};
}

namespace {

constexpr std::array<int, 4> kDx{1, -1, 0, 0};
constexpr std::array<int, 4> kDy{0, 0, 1, -1};

struct Stencil {
    std::vector<int> fill_indices;               // row-major order, solve order
    std::vector<int> component_of;               // per fill pixel
    std::vector<double> known_sum;               // sum of adjacent Dirichlet values
    std::vector<int> participating;              // known + unknown neighbour count
    std::vector<std::vector<int>> unknown_nbrs;  // indices into fill_indices
};

}  // namespace

RefineResult refine_depth(const RefinementInputs& inputs, const SolverConfig& cfg) {
    const DepthMap& masked = inputs.masked_depth;
    require_same_shape(masked, inputs.repair_mask, "refine_depth");
    require_same_shape(masked, inputs.protect_mask, "refine_depth");

    const int w = masked.width;
    const int h = masked.height;

    // pixel roles: 2 = unknown (to fill), 1 = known Dirichlet, 0 = excluded
    std::vector<std::uint8_t> role(static_cast<std::size_t>(w) * h, 0);
    std::vector<int> fill_slot(static_cast<std::size_t>(w) * h, -1);
    Stencil st;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (inputs.protect_mask.at(x, y)) {
                role[i] = 0;
            } else if (inputs.repair_mask.at(x, y)) {
                role[i] = 2;
                fill_slot[i] = static_cast<int>(st.fill_indices.size());
                st.fill_indices.push_back(static_cast<int>(i));
            } else {
                role[i] = 1;
            }
        }
    }

    RefineResult result;
    result.depth = masked;
    if (st.fill_indices.empty()) {
        return result;
    }

    const int n = static_cast<int>(st.fill_indices.size());
    st.component_of.assign(n, -1);
    st.known_sum.assign(n, 0.0);
    st.participating.assign(n, 0);
    st.unknown_nbrs.assign(n, {});

    for (int s = 0; s < n; ++s) {
        const int idx = st.fill_indices[s];
        const int x = idx % w;
        const int y = idx / w;
        for (int d = 0; d < 4; ++d) {
            const int nx = x + kDx[d];
            const int ny = y + kDy[d];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
            if (role[ni] == 1) {
                st.known_sum[s] += masked.data[ni];
                ++st.participating[s];
            } else if (role[ni] == 2) {
                st.unknown_nbrs[s].push_back(fill_slot[ni]);
                ++st.participating[s];
            }
        }
    }

    // connected components of the fill region (4-connectivity)
    int n_components = 0;
    for (int s = 0; s < n; ++s) {
        if (st.component_of[s] >= 0) continue;
        std::deque<int> queue{s};
        st.component_of[s] = n_components;
        while (!queue.empty()) {
            const int cur = queue.front();
            queue.pop_front();
            for (int nb : st.unknown_nbrs[cur]) {
                if (st.component_of[nb] < 0) {
                    st.component_of[nb] = n_components;
                    queue.push_back(nb);
                }
            }
        }
        ++n_components;
    }

    // Mean boundary value per component (over boundary edges).
    std::vector<double> boundary_sum(n_components, 0.0);
    std::vector<std::int64_t> boundary_edges(n_components, 0);
    for (int s = 0; s < n; ++s) {
        const int c = st.component_of[s];
        boundary_sum[c] += st.known_sum[s];
        boundary_edges[c] += st.participating[s] - static_cast<int>(st.unknown_nbrs[s].size());
    }
    bool any_boundary = false;
    for (int c = 0; c < n_components; ++c) {
        if (boundary_edges[c] > 0) any_boundary = true;
    }
    if (!any_boundary) {
        throw Error(ErrorCategory::no_boundary,
                    "fill region touches no known pixel; nothing to fill from");
    }

    // Solve only components that have Dirichlet data; the rest keep their
    // masked values.
    std::vector<bool> solvable(n_components, false);
    std::vector<double> init(n_components, 0.0);
    for (int c = 0; c < n_components; ++c) {
        if (boundary_edges[c] > 0) {
            solvable[c] = true;
            init[c] = boundary_sum[c] / static_cast<double>(boundary_edges[c]);
        } else {
            result.warnings.push_back("fill component without known boundary left untouched");
        }
    }

    std::vector<double> value(n, 0.0);
    for (int s = 0; s < n; ++s) {
        value[s] = solvable[st.component_of[s]] ? init[st.component_of[s]]
                                                : masked.data[st.fill_indices[s]];
    }

    // Gauss-Seidel, row-major sweep order. Every update is a mean of
    // participating neighbours, so iterates stay inside the boundary value
    // range and the max-abs update per sweep is non-increasing.
    double max_update = std::numeric_limits<double>::infinity();
    int sweeps = 0;
    while (sweeps < cfg.max_iterations) {
        max_update = 0.0;
        for (int s = 0; s < n; ++s) {
            if (!solvable[st.component_of[s]] || st.participating[s] == 0) continue;
            double sum = st.known_sum[s];
            for (int nb : st.unknown_nbrs[s]) {
                sum += value[nb];
            }
            const double next = sum / static_cast<double>(st.participating[s]);
            max_update = std::max(max_update, std::abs(next - value[s]));
            value[s] = next;
        }
        ++sweeps;
        result.sweep_updates.push_back(max_update);
        if (max_update <= cfg.tolerance) break;
    }

    result.iterations = sweeps;
    result.final_update = max_update;
    result.converged = max_update <= cfg.tolerance;
    if (!result.converged) {
        result.warnings.push_back("fill solver hit the iteration cap; final update " +
                                  std::to_string(max_update));
    }

    for (int s = 0; s < n; ++s) {
        if (solvable[st.component_of[s]]) {
            result.depth.data[st.fill_indices[s]] = static_cast<float>(value[s]);
        }
    }
    return result;
}

namespace {

bool centroid(const BinaryMask& mask, double* cx, double* cy) {
    double sx = 0.0, sy = 0.0;
    std::int64_t count = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y)) {
                sx += x;
                sy += y;
                ++count;
            }
        }
    }
    if (count == 0) return false;
    *cx = sx / static_cast<double>(count);
    *cy = sy / static_cast<double>(count);
    return true;
}

BinaryMask translate(const BinaryMask& mask, int dx, int dy) {
    BinaryMask out(mask.width, mask.height, 0);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y) && out.in_bounds(x + dx, y + dy)) {
                out.at(x + dx, y + dy) = 1;
            }
        }
    }
    return out;
}

// Shape-consistency check against the first-frame edit: align centroids,
// then compare overlap.
bool guide_drifted(const BinaryMask& edited, const BinaryMask& guide) {
    double gx, gy, ex, ey;
    if (!centroid(guide, &gx, &gy) || !centroid(edited, &ex, &ey)) return false;
    const int dx = static_cast<int>(std::lround(ex - gx));
    const int dy = static_cast<int>(std::lround(ey - gy));
    return iou(edited, translate(guide, dx, dy)) < 0.2;
}

}  // namespace

RefineSequenceResult refine_sequence(const std::vector<DepthMap>& simulated_depths,
                                     const std::vector<BinaryMask>& source_masks,
                                     const std::vector<BinaryMask>& edited_masks,
                                     const BinaryMask& shape_guide,
                                     const SolverConfig& cfg,
                                     const StructuringElement& se) {
    const std::size_t n = simulated_depths.size();
    if (source_masks.size() != n || edited_masks.size() != n) {
        throw Error(ErrorCategory::length_mismatch,
                    "refine_sequence: depth/mask list lengths differ");
    }

    RefineSequenceResult result;
    result.depths.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        RefinementInputs inputs =
            prepare_refinement_inputs(source_masks[k], edited_masks[k], simulated_depths[k],
                                      shape_guide, se, cfg.convention);
        RefineResult r = refine_depth(inputs, cfg);
        for (auto& warning : r.warnings) {
            result.warnings.push_back("frame " + std::to_string(k + 1) + ": " + warning);
        }
        if (!r.converged) result.all_converged = false;

        // The edited region keeps its simulated (pasted) values bit-exactly.
        DepthMap final_depth = std::move(r.depth);
        for (int y = 0; y < final_depth.height; ++y) {
            for (int x = 0; x < final_depth.width; ++x) {
                if (edited_masks[k].at(x, y)) {
                    final_depth.at(x, y) = simulated_depths[k].at(x, y);
                }
            }
        }
        result.depths.push_back(std::move(final_depth));

        if (guide_drifted(edited_masks[k], shape_guide)) {
            result.warnings.push_back("frame " + std::to_string(k + 1) +
                                      ": edited mask drifted far from the first-frame shape");
        }
    }
    return result;
}

}  // namespace shapesim
