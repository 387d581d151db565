#pragma once

#include <functional>

#include "irav/block.hpp"

namespace irav {

/// Motion vector in half-sample luma units. Prediction reads ref(x + mv/2, y + mv/2).
struct MotionVector {
    int x = 0;
    int y = 0;
    bool operator==(const MotionVector&) const = default;
};

/// Reference plane surrounded by `margin` samples of edge replication, so any
/// block displaced by at most `margin` is addressable directly.
class RefPlane {
public:
    RefPlane(const FramePlane& plane, int margin);

    int width() const { return width_; }
    int height() const { return height_; }
    int margin() const { return margin_; }

    /// Sample with edge clamping, any coordinates.
    std::uint8_t at(int x, int y) const;
    /// Integer-position block view; must lie within the margin.
    PixelView block(int x, int y, int w, int h) const;

private:
    int width_, height_, margin_;
    int stride_;
    std::vector<std::uint8_t> data_;
};

/// Bilinear prediction at fractional position (x + fx/den, y + fy/den)
/// offsets given by `mv` in 1/`den` sample units (den = 2 for luma, 4 for chroma).
void predict_inter(const RefPlane& ref, int x, int y, MotionVector mv, int den, MutPixelView out);

using BlockMetric = std::function<double(PixelView cur, PixelView candidate)>;

struct MotionResult {
    MotionVector mv;   // half-sample units
    double cost = 0.0;
};

/// Exhaustive integer search over [-range, range]^2 in raster order; a
/// candidate replaces the best only when strictly cheaper. Cost is the metric
/// plus lambda times the motion vector's signed Exp-Golomb bits.
MotionResult motion_search(PixelView cur, int x, int y, const RefPlane& ref, int range, const BlockMetric& metric,
                           double lambda = 0.0);

/// Tests the 8 half-sample neighbours of `start` (centre first).
MotionResult refine_half_pel(PixelView cur, int x, int y, const RefPlane& ref, MotionVector start,
                             const BlockMetric& metric, double lambda = 0.0);

int mv_bits(MotionVector mv);

}  // namespace irav
