#include "shapesim/mask_ops.hpp"

namespace shapesim {

std::vector<std::pair<int, int>> StructuringElement::offsets() const {
    std::vector<std::pair<int, int>> out;
    const int r = radius;
    const int r2 = r * r;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            if (shape == Shape::square || dx * dx + dy * dy <= r2) {
                out.emplace_back(dx, dy);
            }
        }
    }
    return out;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
    if (se.radius == 0) {
        return mask;
    }
    const auto offsets = se.offsets();
    BinaryMask out(mask.width, mask.height, 0);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (const auto& [dx, dy] : offsets) {
                const int tx = x + dx;
                const int ty = y + dy;
                if (out.in_bounds(tx, ty)) {
                    out.at(tx, ty) = 1;
                }
            }
        }
    }
    return out;
}

BinaryMask complement(const BinaryMask& mask) {
    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        out.data[i] = mask.data[i] ? 0 : 1;
    }
    return out;
}

BinaryMask intersect(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b, "intersect");
    BinaryMask out(a.width, a.height);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        out.data[i] = a.data[i] & b.data[i];
    }
    return out;
}

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b, "mask_union");
    BinaryMask out(a.width, a.height);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        out.data[i] = a.data[i] | b.data[i];
    }
    return out;
}

std::int64_t area(const BinaryMask& mask) {
    std::int64_t n = 0;
    for (std::uint8_t v : mask.data) n += v;
    return n;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b, "iou");
    std::int64_t inter = 0;
    std::int64_t uni = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        inter += a.data[i] & b.data[i];
        uni += a.data[i] | b.data[i];
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace shapesim
