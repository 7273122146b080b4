#ifndef SHAPESIM_GRID_HPP
#define SHAPESIM_GRID_HPP

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "shapesim/error.hpp"

namespace shapesim {

// Dense row-major raster with C interleaved channels. All per-frame fields
// (flows, masks, depths, frames) are carried by instantiations of this type,
// which keeps them distinct C++ types while sharing one implementation.
template <typename T, int C>
struct Grid2 {
    static_assert(C >= 1);
    static constexpr int channels = C;

    int width = 0;
    int height = 0;
    std::vector<T> data;

    Grid2() = default;
    Grid2(int w, int h, T fill = T{})
        : width(w), height(h),
          data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * C, fill) {
        assert(w >= 1 && h >= 1);
    }

    T& at(int x, int y, int c = 0) {
        assert(x >= 0 && x < width && y >= 0 && y < height && c >= 0 && c < C);
        return data[(static_cast<std::size_t>(y) * width + x) * C + c];
    }
    const T& at(int x, int y, int c = 0) const {
        assert(x >= 0 && x < width && y >= 0 && y < height && c >= 0 && c < C);
        return data[(static_cast<std::size_t>(y) * width + x) * C + c];
    }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    bool operator==(const Grid2&) const = default;
};

// (u, v) per pixel in pixels per frame step; +u right, +v down.
using FlowField = Grid2<float, 2>;
// Relative depth, unitless.
using DepthMap = Grid2<float, 1>;
// Values strictly in {0, 1}.
using BinaryMask = Grid2<std::uint8_t, 1>;
// 8-bit RGB, used only by the metrics module.
using RgbImage = Grid2<std::uint8_t, 3>;

template <typename A, typename B>
bool same_shape(const A& a, const B& b) {
    return a.width == b.width && a.height == b.height;
}

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const std::string& context) {
    if (!same_shape(a, b)) {
        throw Error(ErrorCategory::dimension_mismatch,
                    context + ": " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                        " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
    }
}

}  // namespace shapesim

#endif
