#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "irav/error.hpp"

namespace irav {

/// Non-owning strided 2D view. Row-major, `stride` in elements.
template <typename T>
struct View2D {
    T* data = nullptr;
    int width = 0;
    int height = 0;
    std::ptrdiff_t stride = 0;

    T& operator()(int x, int y) const { return data[y * stride + x]; }
    T* row(int y) const { return data + y * stride; }

    View2D sub(int x, int y, int w, int h) const { return {data + y * stride + x, w, h, stride}; }

    operator View2D<const T>() const { return {data, width, height, stride}; }
};

using PixelView = View2D<const std::uint8_t>;
using MutPixelView = View2D<std::uint8_t>;
/// Mask samples are 1 for active, 0 for inactive.
using MaskView = View2D<const std::uint8_t>;

/// One 8-bit sample plane.
class FramePlane {
public:
    FramePlane() = default;
    FramePlane(int width, int height, std::uint8_t fill = 0);
    FramePlane(int width, int height, std::vector<std::uint8_t> samples);

    int width() const { return width_; }
    int height() const { return height_; }
    static constexpr int bitdepth() { return 8; }

    std::uint8_t at(int x, int y) const { return samples_[static_cast<std::size_t>(y) * width_ + x]; }
    std::uint8_t& at(int x, int y) { return samples_[static_cast<std::size_t>(y) * width_ + x]; }

    const std::vector<std::uint8_t>& samples() const { return samples_; }
    std::vector<std::uint8_t>& samples() { return samples_; }

    PixelView view() const { return {samples_.data(), width_, height_, width_}; }
    MutPixelView mut_view() { return {samples_.data(), width_, height_, width_}; }

    bool operator==(const FramePlane&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> samples_;
};

/// 4:2:0 frame: chroma planes are half size in both directions.
struct Frame420 {
    FramePlane luma;
    FramePlane cb;
    FramePlane cr;

    Frame420() = default;
    Frame420(int width, int height, std::uint8_t fill = 128);
    Frame420(FramePlane y, FramePlane u, FramePlane v);

    int width() const { return luma.width(); }
    int height() const { return luma.height(); }

    const FramePlane& plane(int c) const { return c == 0 ? luma : (c == 1 ? cb : cr); }
    FramePlane& plane(int c) { return c == 0 ? luma : (c == 1 ? cb : cr); }

    bool operator==(const Frame420&) const = default;
};

/// Per-pixel active/inactive map. Immutable once built.
class ActivityMask {
public:
    ActivityMask() = default;
    /// All-active mask.
    ActivityMask(int width, int height);
    /// `bits[i] != 0` means active.
    ActivityMask(int width, int height, std::vector<std::uint8_t> bits);

    int width() const { return width_; }
    int height() const { return height_; }

    bool active(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }
    MaskView view() const { return {bits_.data(), width_, height_, width_}; }

    std::size_t inactive_count() const;
    double inactive_fraction() const;
    bool all_active() const { return inactive_count() == 0; }

    bool operator==(const ActivityMask&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

}  // namespace irav
