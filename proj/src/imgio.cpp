#include "padland/imgio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace padland {

const char* to_string(PixelKind kind) {
    switch (kind) {
        case PixelKind::RGB: return "RGB";
        case PixelKind::Grey: return "Grey";
        case PixelKind::Binary: return "Binary";
    }
    return "?";
}

Frame::Frame(int width, int height, PixelKind kind, std::int64_t frame_index)
    : width_(width), height_(height), kind_(kind), frame_index_(frame_index) {
    if (width <= 0 || height <= 0) {
        throw ContractError("Frame: dimensions must be positive");
    }
    if (frame_index < 0) throw ContractError("Frame: negative frame index");
    data_.assign(pixel_count() * channels(), 0);
}

Frame::Frame(int width, int height, PixelKind kind, std::vector<std::uint8_t> data,
             std::int64_t frame_index)
    : width_(width), height_(height), kind_(kind), frame_index_(frame_index),
      data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
        throw ContractError("Frame: dimensions must be positive");
    }
    if (frame_index < 0) throw ContractError("Frame: negative frame index");
    if (data_.size() != pixel_count() * channels()) {
        throw ContractError("Frame: buffer length does not match width*height*channels");
    }
    if (kind == PixelKind::Binary &&
        std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v != 0 && v != 255; })) {
        throw ContractError("Frame: Binary samples must be 0 or 255");
    }
}

void require_kind(const Frame& frame, PixelKind expected, const char* op) {
    if (frame.kind() != expected) {
        throw ContractError(std::string(op) + ": expected " + to_string(expected) + " frame, got " +
                            to_string(frame.kind()));
    }
}

DecodeError::DecodeError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_separators() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint(const char* field) {
        skip_separators();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000) throw DecodeError(std::string("PNM ") + field + " too large", start);
            ++pos_;
        }
        if (pos_ == start) throw DecodeError(std::string("PNM: expected ") + field, start);
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw DecodeError("PNM: expected whitespace after maxval", pos_);
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

Frame read_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw DecodeError("PNM: missing magic", 0);
    PixelKind kind;
    if (bytes[1] == '5') {
        kind = PixelKind::Grey;
    } else if (bytes[1] == '6') {
        kind = PixelKind::RGB;
    } else {
        throw DecodeError("PNM: unsupported magic P" + std::string(1, static_cast<char>(bytes[1])), 1);
    }
    HeaderReader reader(bytes);
    reader.advance(2);
    const long width = reader.read_uint("width");
    const long height = reader.read_uint("height");
    const std::size_t maxval_pos = reader.pos();
    const long maxval = reader.read_uint("maxval");
    if (width <= 0 || height <= 0) throw DecodeError("PNM: zero dimension", maxval_pos);
    if (maxval != 255) throw DecodeError("PNM: maxval must be 255", maxval_pos);
    reader.single_whitespace();

    const std::size_t channels = kind == PixelKind::RGB ? 3 : 1;
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
    const std::size_t start = reader.pos();
    if (bytes.size() - start < need) {
        throw DecodeError("PNM: truncated raster (" + std::to_string(bytes.size() - start) + " of " +
                              std::to_string(need) + " bytes)",
                          bytes.size());
    }
    std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(start + need));
    return Frame(static_cast<int>(width), static_cast<int>(height), kind, std::move(data));
}

std::vector<std::uint8_t> write_pnm(const Frame& frame) {
    const char magic = frame.kind() == PixelKind::RGB ? '6' : '5';
    const std::string header = std::string("P") + magic + "\n" + std::to_string(frame.width()) + " " +
                               std::to_string(frame.height()) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + frame.data().size());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), frame.data().begin(), frame.data().end());
    return out;
}

Frame load_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_pnm(bytes);
}

void save_pnm(const Frame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const auto bytes = write_pnm(frame);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

// --- overlays ---------------------------------------------------------------

namespace {

void put(Frame& rgb, int x, int y, const Rgb& color) {
    if (!rgb.contains(x, y)) return;
    for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = color[c];
}

void draw(Frame& rgb, const BoxOverlay& box, const Rgb& color) {
    for (int x = box.min_x; x <= box.max_x; ++x) {
        put(rgb, x, box.min_y, color);
        put(rgb, x, box.max_y, color);
    }
    for (int y = box.min_y; y <= box.max_y; ++y) {
        put(rgb, box.min_x, y, color);
        put(rgb, box.max_x, y, color);
    }
}

void draw(Frame& rgb, const PointOverlay& point, const Rgb& color) {
    const int cx = static_cast<int>(std::lround(point.x));
    const int cy = static_cast<int>(std::lround(point.y));
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) put(rgb, cx + dx, cy + dy, color);
}

// Bresenham between rounded endpoints.
void draw(Frame& rgb, const LineOverlay& line, const Rgb& color) {
    long x0 = std::lround(line.x0), y0 = std::lround(line.y0);
    const long x1 = std::lround(line.x1), y1 = std::lround(line.y1);
    const long dx = std::labs(x1 - x0), dy = -std::labs(y1 - y0);
    const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    // Guard against absurd coordinates turning this into a very long loop.
    if (dx > 1'000'000 || -dy > 1'000'000) return;
    while (true) {
        put(rgb, static_cast<int>(x0), static_cast<int>(y0), color);
        if (x0 == x1 && y0 == y1) break;
        const long e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

Frame annotate(const Frame& frame, std::span<const Overlay> overlays) {
    Frame rgb(frame.width(), frame.height(), PixelKind::RGB, frame.frame_index());
    if (frame.kind() == PixelKind::RGB) {
        std::copy(frame.data().begin(), frame.data().end(), rgb.data().begin());
    } else {
        const auto src = frame.data();
        auto dst = rgb.data();
        for (std::size_t i = 0; i < src.size(); ++i) dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
    }
    for (const auto& overlay : overlays) {
        std::visit([&](const auto& shape) { draw(rgb, shape, overlay.color); }, overlay.shape);
    }
    return rgb;
}

// --- sequence directories ----------------------------------------------------

std::string sequence_frame_name(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06lld.ppm", static_cast<long long>(index));
    return buf;
}

std::vector<std::int64_t> list_sequence_frames(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<std::int64_t> indices;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        const auto ext = entry.path().extension().string();
        if (name.rfind("frame_", 0) != 0 || (ext != ".ppm" && ext != ".pgm")) continue;
        const auto digits = name.substr(6, name.size() - 6 - ext.size());
        std::int64_t index = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) continue;
        indices.push_back(index);
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return indices;
}

std::filesystem::path sequence_frame_path(const std::filesystem::path& dir, std::int64_t index) {
    auto path = dir / sequence_frame_name(index);
    if (std::filesystem::exists(path)) return path;
    path.replace_extension(".pgm");
    return path;
}

std::map<std::int64_t, double> read_altitude_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open altitude log " + path.string());
    std::map<std::int64_t, double> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        std::int64_t index;
        char comma;
        double altitude;
        if (!(fields >> index >> comma >> altitude) || comma != ',') {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected frame_index,altitude_m");
        }
        out[index] = altitude;
    }
    return out;
}

void write_altitude_log(const std::filesystem::path& path, const std::map<std::int64_t, double>& altitudes) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    char buf[64];
    for (const auto& [index, altitude] : altitudes) {
        std::snprintf(buf, sizeof buf, "%lld,%.6f\n", static_cast<long long>(index), altitude);
        out << buf;
    }
}

}  // namespace padland
