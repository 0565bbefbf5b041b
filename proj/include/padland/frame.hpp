// Image buffer shared by every stage of the detection pipeline.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace padland {

/// Raised when a caller violates an operation's precondition (wrong frame kind,
/// size mismatch, non-positive altitude, ...).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class PixelKind : std::uint8_t { RGB, Grey, Binary };

const char* to_string(PixelKind kind);

/**
 * Row-major 8-bit image. RGB frames store 3 interleaved channels, Grey and
 * Binary store one. Binary samples are 0 (background) or 255 (foreground).
 */
class Frame {
public:
    static constexpr std::uint8_t kForeground = 255;
    static constexpr std::uint8_t kBackground = 0;

    Frame() = default;

    /// Zero-filled frame. Throws ContractError on non-positive dimensions.
    Frame(int width, int height, PixelKind kind, std::int64_t frame_index = 0);

    /// Takes ownership of @p data; checks the length and Binary sample invariants.
    Frame(int width, int height, PixelKind kind, std::vector<std::uint8_t> data,
          std::int64_t frame_index = 0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return kind_ == PixelKind::RGB ? 3 : 1; }
    PixelKind kind() const noexcept { return kind_; }
    std::int64_t frame_index() const noexcept { return frame_index_; }
    void set_frame_index(std::int64_t index) noexcept { frame_index_ = index; }

    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    std::span<const std::uint8_t> row(int y) const noexcept {
        const auto stride = static_cast<std::size_t>(width_) * channels();
        return {data_.data() + static_cast<std::size_t>(y) * stride, stride};
    }
    std::span<std::uint8_t> row(int y) noexcept {
        const auto stride = static_cast<std::size_t>(width_) * channels();
        return {data_.data() + static_cast<std::size_t>(y) * stride, stride};
    }

    std::uint8_t at(int x, int y, int c = 0) const noexcept {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels() + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) noexcept {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels() + c];
    }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    /// Pixel data and geometry are equal; the frame index is ignored.
    bool same_pixels(const Frame& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && kind_ == other.kind_ &&
               data_ == other.data_;
    }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    PixelKind kind_ = PixelKind::Grey;
    std::int64_t frame_index_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Throws ContractError naming @p op unless @p frame has the expected kind.
void require_kind(const Frame& frame, PixelKind expected, const char* op);

}  // namespace padland
