#ifndef SHAPESIM_IO_HPP
#define SHAPESIM_IO_HPP

#include <filesystem>

#include "shapesim/grid.hpp"

namespace shapesim {

// Bit-exact codecs for the on-disk asset formats.
//
//   flow   .flo  little-endian: float32 magic 202021.25, int32 width, int32
//                height, interleaved (u, v) float32 rows top-to-bottom
//   depth  .pfm  "Pf" grayscale, float32, scale sign encodes endianness,
//                rows stored bottom-to-top
//   mask   .pgm  binary P5, 8-bit; load thresholds at >= 128, save emits 0/255
//   frame  .ppm  binary P6, 8-bit RGB
//
// Readers reject NaN/Inf payloads (nonfinite_value) and writers refuse to
// emit them; loaded grids are always finite.

FlowField read_flow(const std::filesystem::path& path);
void write_flow(const FlowField& flow, const std::filesystem::path& path);

DepthMap read_depth(const std::filesystem::path& path);
void write_depth(const DepthMap& depth, const std::filesystem::path& path);

BinaryMask read_mask(const std::filesystem::path& path);
void write_mask(const BinaryMask& mask, const std::filesystem::path& path);

RgbImage read_frame(const std::filesystem::path& path);
void write_frame(const RgbImage& frame, const std::filesystem::path& path);

// Lossy 16-bit grayscale depth export (PGM, maxval 65535, big-endian samples)
// with the linear min/max mapping recorded in a JSON sidecar next to it so the
// quantized image stays invertible up to 1/65535 of the range.
void write_depth_gray16(const DepthMap& depth, const std::filesystem::path& image_path,
                        const std::filesystem::path& sidecar_path);
DepthMap read_depth_gray16(const std::filesystem::path& image_path,
                           const std::filesystem::path& sidecar_path);

}  // namespace shapesim

#endif
