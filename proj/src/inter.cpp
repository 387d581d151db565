#include "irav/inter.hpp"

#include <algorithm>
#include <string>

#include "irav/bitio.hpp"
#include "irav/error.hpp"

namespace irav {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

RefPlane::RefPlane(const FramePlane& plane, int margin)
    : width_(plane.width()), height_(plane.height()), margin_(margin), stride_(plane.width() + 2 * margin) {
    if (margin < 0)
        throw UsageError("reference margin must be non-negative");
    data_.resize(static_cast<std::size_t>(stride_) * (height_ + 2 * margin));
    for (int y = -margin; y < height_ + margin; ++y) {
        const int sy = std::clamp(y, 0, height_ - 1);
        std::uint8_t* dst = data_.data() + static_cast<std::size_t>(y + margin) * stride_;
        for (int x = -margin; x < width_ + margin; ++x)
            dst[x + margin] = plane.at(std::clamp(x, 0, width_ - 1), sy);
    }
}

std::uint8_t RefPlane::at(int x, int y) const {
    x = std::clamp(x, -margin_, width_ + margin_ - 1);
    y = std::clamp(y, -margin_, height_ + margin_ - 1);
    return data_[static_cast<std::size_t>(y + margin_) * stride_ + x + margin_];
}

PixelView RefPlane::block(int x, int y, int w, int h) const {
    if (x < -margin_ || y < -margin_ || x + w > width_ + margin_ || y + h > height_ + margin_)
        throw UsageError("reference block outside padded area");
    return {data_.data() + static_cast<std::size_t>(y + margin_) * stride_ + x + margin_, w, h, stride_};
}

void predict_inter(const RefPlane& ref, int x, int y, MotionVector mv, int den, MutPixelView out) {
    const int ix = floor_div(mv.x, den), iy = floor_div(mv.y, den);
    const int fx = mv.x - ix * den, fy = mv.y - iy * den;
    const int d2 = den * den;
    for (int j = 0; j < out.height; ++j)
        for (int i = 0; i < out.width; ++i) {
            const int sx = x + i + ix, sy = y + j + iy;
            if (fx == 0 && fy == 0) {
                out(i, j) = ref.at(sx, sy);
                continue;
            }
            const int a = ref.at(sx, sy), b = ref.at(sx + 1, sy);
            const int c = ref.at(sx, sy + 1), d = ref.at(sx + 1, sy + 1);
            const int v = (den - fx) * (den - fy) * a + fx * (den - fy) * b + (den - fx) * fy * c + fx * fy * d;
            out(i, j) = static_cast<std::uint8_t>((v + d2 / 2) / d2);
        }
}

int mv_bits(MotionVector mv) { return se_bits(mv.x) + se_bits(mv.y); }

MotionResult motion_search(PixelView cur, int x, int y, const RefPlane& ref, int range, const BlockMetric& metric,
                           double lambda) {
    if (range < 0)
        throw UsageError("search range must be non-negative");
    MotionResult best{{0, 0}, 0.0};
    bool have = false;
    for (int dy = -range; dy <= range; ++dy)
        for (int dx = -range; dx <= range; ++dx) {
            const MotionVector mv{2 * dx, 2 * dy};
            const double cost = metric(cur, ref.block(x + dx, y + dy, cur.width, cur.height)) + lambda * mv_bits(mv);
            if (!have || cost < best.cost) {
                best = {mv, cost};
                have = true;
            }
        }
    return best;
}

MotionResult refine_half_pel(PixelView cur, int x, int y, const RefPlane& ref, MotionVector start,
                             const BlockMetric& metric, double lambda) {
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(cur.width) * cur.height);
    MutPixelView view{buf.data(), cur.width, cur.height, cur.width};
    auto eval = [&](MotionVector mv) {
        predict_inter(ref, x, y, mv, 2, view);
        return metric(cur, view) + lambda * mv_bits(mv);
    };
    MotionResult best{start, eval(start)};
    static constexpr int kOffsets[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};
    for (const auto& o : kOffsets) {
        const MotionVector mv{start.x + o[0], start.y + o[1]};
        const double cost = eval(mv);
        if (cost < best.cost)
            best = {mv, cost};
    }
    return best;
}

}  // namespace irav
