#include <doctest.h>

#include <random>

#include "shapesim/mask_ops.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

using namespace shapesim;

namespace {

StructuringElement disk(int r) { return {StructuringElement::Shape::disk, r}; }
StructuringElement square(int r) { return {StructuringElement::Shape::square, r}; }

bool subset(const BinaryMask& a, const BinaryMask& b) {
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        if (a.data[i] && !b.data[i]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("dilate with radius 0 is the identity") {
    std::mt19937 rng(1);
    const BinaryMask mask = testutil::random_mask(rng, 11, 7, 0.3);
    CHECK(dilate(mask, disk(0)) == mask);
    CHECK(dilate(mask, square(0)) == mask);
}

TEST_CASE("dilating a single pixel yields the discrete disk") {
    BinaryMask mask(16, 16, 0);
    mask.at(5, 5) = 1;
    const BinaryMask out = dilate(mask, disk(2));
    CHECK(area(out) == 13);  // offsets with dx^2 + dy^2 <= 4
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            const int dx = x - 5;
            const int dy = y - 5;
            CHECK(out.at(x, y) == (dx * dx + dy * dy <= 4 ? 1 : 0));
        }
    }
}

TEST_CASE("dilate matches the naive footprint oracle") {
    std::mt19937 rng(2);
    for (int it = 0; it < 40; ++it) {
        const BinaryMask mask = testutil::random_mask(rng, 32, 32, 0.15);
        const bool sq = it % 2 == 0;
        const int r = 1 + it % 4;
        const BinaryMask ours = dilate(mask, sq ? square(r) : disk(r));
        const BinaryMask ref = oracle::dilate_naive(mask, sq, r);
        CHECK(ours == ref);
    }
}

TEST_CASE("dilation is extensive, monotone, and commutes with union") {
    std::mt19937 rng(3);
    for (int it = 0; it < 20; ++it) {
        const BinaryMask a = testutil::random_blob_mask(rng, 24, 24);
        const BinaryMask b = mask_union(a, testutil::random_blob_mask(rng, 24, 24));
        const auto se = it % 2 == 0 ? disk(2) : square(3);
        CHECK(subset(a, dilate(a, se)));
        CHECK(subset(dilate(a, se), dilate(b, se)));  // a is a subset of b
        CHECK(dilate(mask_union(a, b), se) == mask_union(dilate(a, se), dilate(b, se)));
    }
}

TEST_CASE("composed square dilations add radii exactly; disks stay inside the larger radius") {
    std::mt19937 rng(4);
    for (int it = 0; it < 10; ++it) {
        const BinaryMask m = testutil::random_blob_mask(rng, 24, 24);
        CHECK(dilate(dilate(m, square(1)), square(2)) == dilate(m, square(3)));
        CHECK(dilate(dilate(m, square(2)), square(2)) == dilate(m, square(4)));
        // discrete disks only nest one way: two hops of r1 then r2 cannot
        // leave the radius r1+r2 disk, but need not cover it
        CHECK(subset(dilate(dilate(m, disk(1)), disk(2)), dilate(m, disk(3))));
    }
}

TEST_CASE("hadamard keeps the field under all-ones and zeroes it under all-zeros") {
    std::mt19937 rng(5);
    const FlowField field = testutil::random_flow(rng, 6, 4, 5.0f);
    CHECK(hadamard(field, BinaryMask(6, 4, 1)) == field);
    const FlowField zeroed = hadamard(field, BinaryMask(6, 4, 0));
    for (float v : zeroed.data) CHECK(v == 0.0f);
}

TEST_CASE("hadamard matches the scalar loop on random inputs") {
    std::mt19937 rng(6);
    const DepthMap field = testutil::random_depth(rng, 4, 4);
    const BinaryMask mask = testutil::random_mask(rng, 4, 4, 0.5);
    const DepthMap out = hadamard(field, mask);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            CHECK(out.at(x, y) == field.at(x, y) * static_cast<float>(mask.at(x, y)));
        }
    }
}

TEST_CASE("hadamard splits a field exactly across a mask and its complement") {
    std::mt19937 rng(7);
    const FlowField field = testutil::random_flow(rng, 9, 9, 12.0f);
    const BinaryMask mask = testutil::random_mask(rng, 9, 9, 0.4);
    const FlowField kept = hadamard(field, mask);
    const FlowField rest = hadamard(field, complement(mask));
    for (std::size_t i = 0; i < field.data.size(); ++i) {
        CHECK(kept.data[i] + rest.data[i] == field.data[i]);
    }
}

TEST_CASE("hadamard requires matching dimensions") {
    const DepthMap field(4, 4, 1.0f);
    CHECK_THROWS_AS(hadamard(field, BinaryMask(4, 5, 1)), Error);
}

TEST_CASE("complement and intersect behave like set operations") {
    std::mt19937 rng(8);
    const BinaryMask m = testutil::random_mask(rng, 10, 10, 0.5);
    CHECK(complement(complement(m)) == m);
    const BinaryMask empty = intersect(m, complement(m));
    CHECK(area(empty) == 0);
    CHECK(area(BinaryMask(10, 10, 1)) == 100);
}

TEST_CASE("iou handles identity, disjoint, and partial overlap") {
    const BinaryMask ones(5, 5, 1);
    CHECK(iou(ones, ones) == 1.0);

    BinaryMask left(8, 8, 0), right(8, 8, 0);
    for (int y = 0; y < 8; ++y) {
        left.at(0, y) = 1;
        right.at(7, y) = 1;
    }
    CHECK(iou(left, right) == 0.0);

    // two 4x4 squares offset by 2 in x: overlap 8, union 24
    BinaryMask a(8, 8, 0), b(8, 8, 0);
    for (int y = 2; y < 6; ++y) {
        for (int x = 0; x < 4; ++x) a.at(x, y) = 1;
        for (int x = 2; x < 6; ++x) b.at(x, y) = 1;
    }
    CHECK(iou(a, b) == doctest::Approx(8.0 / 24.0));

    CHECK(iou(BinaryMask(3, 3, 0), BinaryMask(3, 3, 0)) == 1.0);
}
