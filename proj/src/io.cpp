#include "shapesim/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace shapesim {

namespace {

constexpr float kFlowMagic = 202021.25f;  // spells "PIEH" in little-endian bytes
constexpr int kMaxDim = 100000;

std::vector<std::uint8_t> read_all_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCategory::io_error, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorCategory::io_error, "read failed: " + path.string());
    }
    return bytes;
}

void write_all_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCategory::io_error, "cannot open for write: " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorCategory::io_error, "write failed: " + path.string());
    }
}

std::uint32_t le_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float le_f32(const std::uint8_t* p) { return std::bit_cast<float>(le_u32(p)); }

float be_f32(const std::uint8_t* p) {
    std::uint32_t u = static_cast<std::uint32_t>(p[3]) | (static_cast<std::uint32_t>(p[2]) << 8) |
                      (static_cast<std::uint32_t>(p[1]) << 16) |
                      (static_cast<std::uint32_t>(p[0]) << 24);
    return std::bit_cast<float>(u);
}

void append_le_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void append_le_f32(std::string& out, float v) { append_le_u32(out, std::bit_cast<std::uint32_t>(v)); }

void check_dims(std::int32_t w, std::int32_t h, const std::filesystem::path& path) {
    if (w < 1 || h < 1 || w > kMaxDim || h > kMaxDim) {
        throw Error(ErrorCategory::bad_header,
                    "implausible dimensions " + std::to_string(w) + "x" + std::to_string(h) +
                        " in " + path.string());
    }
}

template <typename GridT>
void require_finite_payload(const GridT& g, const std::filesystem::path& path) {
    for (float v : g.data) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCategory::nonfinite_value,
                        "non-finite value in " + path.string());
        }
    }
}

template <typename GridT>
void require_finite_for_write(const GridT& g, const std::filesystem::path& path) {
    for (float v : g.data) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCategory::nonfinite_value,
                        "refusing to write non-finite value to " + path.string());
        }
    }
}

// Netpbm header scanner: "P5"/"P6", then width, height, maxval as ASCII
// decimal tokens, '#' comments allowed, one whitespace byte after maxval.
struct PnmHeader {
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t data_offset = 0;
};

PnmHeader parse_pnm_header(const std::vector<std::uint8_t>& bytes, const char* magic,
                           const std::filesystem::path& path) {
    if (bytes.size() < 2 || bytes[0] != static_cast<std::uint8_t>(magic[0]) ||
        bytes[1] != static_cast<std::uint8_t>(magic[1])) {
        throw Error(ErrorCategory::io_error,
                    std::string("not a ") + magic + " file: " + path.string());
    }
    std::size_t pos = 2;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> long {
        skip_space();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
            throw Error(ErrorCategory::io_error, "malformed header in " + path.string());
        }
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1000000000L) {
                throw Error(ErrorCategory::io_error, "malformed header in " + path.string());
            }
            ++pos;
        }
        return v;
    };
    PnmHeader h;
    h.width = static_cast<int>(read_int());
    h.height = static_cast<int>(read_int());
    h.maxval = static_cast<int>(read_int());
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw Error(ErrorCategory::io_error, "malformed header in " + path.string());
    }
    ++pos;
    check_dims(h.width, h.height, path);
    h.data_offset = pos;
    return h;
}

}  // namespace

FlowField read_flow(const std::filesystem::path& path) {
    const auto bytes = read_all_bytes(path);
    if (bytes.size() < 12) {
        throw Error(ErrorCategory::truncated_file, "flow file too short: " + path.string());
    }
    const float magic = le_f32(bytes.data());
    if (magic != kFlowMagic) {
        throw Error(ErrorCategory::bad_magic, "bad flow magic in " + path.string());
    }
    const auto w = static_cast<std::int32_t>(le_u32(bytes.data() + 4));
    const auto h = static_cast<std::int32_t>(le_u32(bytes.data() + 8));
    check_dims(w, h, path);

    const std::size_t expected = 12 + static_cast<std::size_t>(w) * h * 2 * 4;
    if (bytes.size() < expected) {
        throw Error(ErrorCategory::truncated_file, "flow payload truncated: " + path.string());
    }
    if (bytes.size() > expected) {
        throw Error(ErrorCategory::bad_header, "trailing bytes in " + path.string());
    }

    FlowField flow(w, h);
    for (std::size_t i = 0; i < flow.data.size(); ++i) {
        flow.data[i] = le_f32(bytes.data() + 12 + i * 4);
    }
    require_finite_payload(flow, path);
    return flow;
}

void write_flow(const FlowField& flow, const std::filesystem::path& path) {
    require_finite_for_write(flow, path);
    std::string out;
    out.reserve(12 + flow.data.size() * 4);
    append_le_f32(out, kFlowMagic);
    append_le_u32(out, static_cast<std::uint32_t>(flow.width));
    append_le_u32(out, static_cast<std::uint32_t>(flow.height));
    for (float v : flow.data) {
        append_le_f32(out, v);
    }
    write_all_bytes(path, out);
}

DepthMap read_depth(const std::filesystem::path& path) {
    const auto bytes = read_all_bytes(path);
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != 'f') {
        if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == 'F') {
            throw Error(ErrorCategory::bad_header,
                        "color PFM not supported: " + path.string());
        }
        throw Error(ErrorCategory::bad_header, "not a grayscale PFM: " + path.string());
    }
    std::size_t pos = 2;
    auto read_token = [&]() -> std::string {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        std::string tok;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
        if (tok.empty()) {
            throw Error(ErrorCategory::bad_header, "malformed PFM header: " + path.string());
        }
        return tok;
    };
    std::int32_t w = 0, h = 0;
    double scale = 0.0;
    try {
        w = std::stoi(read_token());
        h = std::stoi(read_token());
        scale = std::stod(read_token());
    } catch (const std::logic_error&) {
        throw Error(ErrorCategory::bad_header, "malformed PFM header: " + path.string());
    }
    check_dims(w, h, path);
    if (scale == 0.0 || !std::isfinite(scale)) {
        throw Error(ErrorCategory::bad_header, "bad PFM scale: " + path.string());
    }
    // exactly one whitespace byte separates the header from the payload
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw Error(ErrorCategory::bad_header, "malformed PFM header: " + path.string());
    }
    ++pos;

    const bool little_endian = scale < 0.0;
    const std::size_t expected = pos + static_cast<std::size_t>(w) * h * 4;
    if (bytes.size() < expected) {
        throw Error(ErrorCategory::truncated_file, "PFM payload truncated: " + path.string());
    }
    if (bytes.size() > expected) {
        throw Error(ErrorCategory::bad_header, "trailing bytes in " + path.string());
    }

    // PFM stores rows bottom-to-top
    DepthMap depth(w, h);
    for (int row = 0; row < h; ++row) {
        const int y = h - 1 - row;
        const std::uint8_t* src = bytes.data() + pos + static_cast<std::size_t>(row) * w * 4;
        for (int x = 0; x < w; ++x) {
            const std::uint8_t* sample = src + static_cast<std::size_t>(x) * 4;
            depth.at(x, y) = little_endian ? le_f32(sample) : be_f32(sample);
        }
    }
    require_finite_payload(depth, path);
    return depth;
}

void write_depth(const DepthMap& depth, const std::filesystem::path& path) {
    require_finite_for_write(depth, path);
    std::string out;
    out.reserve(32 + depth.data.size() * 4);
    char header[64];
    std::snprintf(header, sizeof(header), "Pf\n%d %d\n-1.0\n", depth.width, depth.height);
    out += header;
    for (int row = 0; row < depth.height; ++row) {
        const int y = depth.height - 1 - row;
        for (int x = 0; x < depth.width; ++x) {
            append_le_f32(out, depth.at(x, y));
        }
    }
    write_all_bytes(path, out);
}

BinaryMask read_mask(const std::filesystem::path& path) {
    const auto bytes = read_all_bytes(path);
    const PnmHeader h = parse_pnm_header(bytes, "P5", path);
    if (h.maxval > 255) {
        throw Error(ErrorCategory::unsupported_bit_depth,
                    "mask must be 8-bit, maxval=" + std::to_string(h.maxval) + " in " + path.string());
    }
    if (h.maxval < 1) {
        throw Error(ErrorCategory::io_error, "bad maxval in " + path.string());
    }
    const std::size_t expected = h.data_offset + static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() < expected) {
        throw Error(ErrorCategory::truncated_file, "mask payload truncated: " + path.string());
    }
    BinaryMask mask(h.width, h.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        mask.data[i] = bytes[h.data_offset + i] >= 128 ? 1 : 0;
    }
    return mask;
}

void write_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    std::string out;
    char header[64];
    std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", mask.width, mask.height);
    out += header;
    out.reserve(out.size() + mask.data.size());
    for (std::uint8_t v : mask.data) {
        out.push_back(v ? static_cast<char>(255) : static_cast<char>(0));
    }
    write_all_bytes(path, out);
}

RgbImage read_frame(const std::filesystem::path& path) {
    const auto bytes = read_all_bytes(path);
    const PnmHeader h = parse_pnm_header(bytes, "P6", path);
    if (h.maxval > 255) {
        throw Error(ErrorCategory::unsupported_bit_depth,
                    "frame must be 8-bit, maxval=" + std::to_string(h.maxval) + " in " + path.string());
    }
    const std::size_t expected = h.data_offset + static_cast<std::size_t>(h.width) * h.height * 3;
    if (bytes.size() < expected) {
        throw Error(ErrorCategory::truncated_file, "frame payload truncated: " + path.string());
    }
    RgbImage frame(h.width, h.height);
    std::memcpy(frame.data.data(), bytes.data() + h.data_offset, frame.data.size());
    return frame;
}

void write_frame(const RgbImage& frame, const std::filesystem::path& path) {
    std::string out;
    char header[64];
    std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", frame.width, frame.height);
    out += header;
    out.append(reinterpret_cast<const char*>(frame.data.data()), frame.data.size());
    write_all_bytes(path, out);
}

void write_depth_gray16(const DepthMap& depth, const std::filesystem::path& image_path,
                        const std::filesystem::path& sidecar_path) {
    require_finite_for_write(depth, image_path);
    float lo = std::numeric_limits<float>::max();
    float hi = std::numeric_limits<float>::lowest();
    for (float v : depth.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = static_cast<double>(hi) - static_cast<double>(lo);

    std::string out;
    char header[64];
    std::snprintf(header, sizeof(header), "P5\n%d %d\n65535\n", depth.width, depth.height);
    out += header;
    for (float v : depth.data) {
        const double t = range > 0.0 ? (static_cast<double>(v) - lo) / range : 0.0;
        const auto q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
        out.push_back(static_cast<char>(q >> 8));  // PGM 16-bit samples are big-endian
        out.push_back(static_cast<char>(q & 0xff));
    }
    write_all_bytes(image_path, out);

    nlohmann::json sidecar;
    sidecar["min"] = lo;
    sidecar["max"] = hi;
    write_all_bytes(sidecar_path, sidecar.dump(2) + "\n");
}

DepthMap read_depth_gray16(const std::filesystem::path& image_path,
                           const std::filesystem::path& sidecar_path) {
    const auto bytes = read_all_bytes(image_path);
    const PnmHeader h = parse_pnm_header(bytes, "P5", image_path);
    if (h.maxval != 65535) {
        throw Error(ErrorCategory::unsupported_bit_depth,
                    "expected 16-bit grayscale in " + image_path.string());
    }
    const std::size_t expected = h.data_offset + static_cast<std::size_t>(h.width) * h.height * 2;
    if (bytes.size() < expected) {
        throw Error(ErrorCategory::truncated_file, "payload truncated: " + image_path.string());
    }

    nlohmann::json sidecar;
    try {
        std::ifstream in(sidecar_path);
        if (!in) {
            throw Error(ErrorCategory::io_error, "cannot open " + sidecar_path.string());
        }
        in >> sidecar;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCategory::bad_header,
                    "bad sidecar " + sidecar_path.string() + ": " + e.what());
    }
    if (!sidecar.contains("min") || !sidecar.contains("max")) {
        throw Error(ErrorCategory::bad_header, "sidecar missing min/max: " + sidecar_path.string());
    }
    const double lo = sidecar["min"].get<double>();
    const double hi = sidecar["max"].get<double>();

    DepthMap depth(h.width, h.height);
    for (std::size_t i = 0; i < depth.data.size(); ++i) {
        const std::uint8_t* p = bytes.data() + h.data_offset + i * 2;
        const std::uint16_t q = static_cast<std::uint16_t>((p[0] << 8) | p[1]);
        depth.data[i] = static_cast<float>(lo + (hi - lo) * (q / 65535.0));
    }
    return depth;
}

}  // namespace shapesim
