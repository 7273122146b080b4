#ifndef SHAPESIM_MASK_OPS_HPP
#define SHAPESIM_MASK_OPS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "shapesim/grid.hpp"

namespace shapesim {

// Footprint for binary dilation. Radius 0 is the identity element regardless
// of shape. Disk membership is dx*dx + dy*dy <= radius*radius.
struct StructuringElement {
    enum class Shape { disk, square };

    Shape shape = Shape::disk;
    int radius = 0;

    std::vector<std::pair<int, int>> offsets() const;
};

// Exact set-definition dilation: output pixel is 1 iff any input 1-pixel lies
// within the footprint, with the footprint clipped at the grid border.
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

BinaryMask complement(const BinaryMask& mask);
BinaryMask intersect(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);
std::int64_t area(const BinaryMask& mask);

// |a n b| / |a u b|; 1.0 when both masks are empty.
double iou(const BinaryMask& a, const BinaryMask& b);

// Elementwise product with a {0,1} weight grid; multi-channel fields multiply
// every channel by the scalar weight.
template <typename T, int C>
Grid2<T, C> hadamard(const Grid2<T, C>& field, const BinaryMask& weights) {
    require_same_shape(field, weights, "hadamard");
    Grid2<T, C> out = field;
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            if (!weights.at(x, y)) {
                for (int c = 0; c < C; ++c) out.at(x, y, c) = T{};
            }
        }
    }
    return out;
}

}  // namespace shapesim

#endif
