#include "irav/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "irav/error.hpp"
#include "irav/geometry.hpp"

namespace irav {

namespace {

void check_same(const FramePlane& a, const FramePlane& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DataError("plane size mismatch: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                        std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

double to_db(double mse, double peak) {
    if (mse <= 0.0)
        return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

// Coefficients p[0..3] of the least-squares cubic through (x, y).
std::array<double, 4> polyfit3(const std::vector<double>& x, const std::vector<double>& y) {
    std::array<std::array<double, 5>, 4> m{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::array<double, 7> pw{};
        pw[0] = 1.0;
        for (int k = 1; k < 7; ++k)
            pw[static_cast<std::size_t>(k)] = pw[static_cast<std::size_t>(k - 1)] * x[i];
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c)
                m[r][c] += pw[r + c];
            m[r][4] += pw[r] * y[i];
        }
    }
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 4; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col]))
                piv = r;
        if (std::fabs(m[piv][col]) < 1e-300)
            throw DataError("degenerate RD curve: cubic fit is singular");
        std::swap(m[col], m[piv]);
        for (std::size_t r = 0; r < 4; ++r) {
            if (r == col)
                continue;
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < 5; ++c)
                m[r][c] -= f * m[col][c];
        }
    }
    std::array<double, 4> p{};
    for (std::size_t r = 0; r < 4; ++r)
        p[r] = m[r][4] / m[r][r];
    return p;
}

double poly_integral(const std::array<double, 4>& p, double lo, double hi) {
    auto prim = [&](double x) {
        return p[0] * x + p[1] * x * x / 2.0 + p[2] * x * x * x / 3.0 + p[3] * x * x * x * x / 4.0;
    };
    return prim(hi) - prim(lo);
}

struct Curve {
    std::vector<double> q, lr;
    double lo = 0.0, hi = 0.0;
};

Curve prepare(std::span<const RdPoint> pts, const char* name) {
    if (pts.size() < 4)
        throw DataError(std::string(name) + " curve needs at least 4 points");
    Curve c;
    for (const auto& p : pts) {
        if (!(p.bitrate > 0.0) || !std::isfinite(p.quality))
            throw DataError(std::string(name) + " curve has a non-positive rate or non-finite quality");
        c.q.push_back(p.quality);
        c.lr.push_back(std::log10(p.bitrate));
    }
    std::vector<double> sorted = c.q;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DataError(std::string(name) + " curve has duplicate quality values");
    c.lo = sorted.front();
    c.hi = sorted.back();
    return c;
}

}  // namespace

double psnr(const FramePlane& a, const FramePlane& b, double peak) {
    check_same(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.samples().size(); ++i) {
        const double d = double(a.samples()[i]) - double(b.samples()[i]);
        sum += d * d;
    }
    return to_db(sum / static_cast<double>(a.samples().size()), peak);
}

double masked_psnr(const FramePlane& a, const FramePlane& b, const ActivityMask& mask, double peak) {
    check_same(a, b);
    if (mask.width() != a.width() || mask.height() != a.height())
        throw DataError("mask size does not match plane");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.samples().size(); ++i) {
        if (!mask.bits()[i])
            continue;
        const double d = double(a.samples()[i]) - double(b.samples()[i]);
        sum += d * d;
        ++n;
    }
    if (n == 0)
        throw DataError("masked PSNR with no active pixels");
    return to_db(sum / static_cast<double>(n), peak);
}

double ws_psnr_erp(const FramePlane& a, const FramePlane& b, double peak) {
    check_same(a, b);
    if (a.width() != 2 * a.height())
        throw DataError("WS-PSNR needs an ERP frame with width == 2 * height");
    const WeightMap w = ws_weights_erp(a.width(), a.height());
    double num = 0.0, den = 0.0;
    for (int y = 0; y < a.height(); ++y) {
        const double wy = w.at(0, y);
        double row = 0.0;
        for (int x = 0; x < a.width(); ++x) {
            const double d = double(a.at(x, y)) - double(b.at(x, y));
            row += d * d;
        }
        num += wy * row;
        den += wy * a.width();
    }
    return to_db(num / den, peak);
}

BdRateResult bd_rate(std::span<const RdPoint> anchor, std::span<const RdPoint> test) {
    const Curve a = prepare(anchor, "anchor");
    const Curve t = prepare(test, "test");
    const double lo = std::max(a.lo, t.lo), hi = std::min(a.hi, t.hi);
    if (!(hi > lo))
        throw DataError("RD curves have no overlapping quality interval");
    // Centre and scale quality so the normal equations stay well conditioned.
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto norm = [&](std::vector<double> q) {
        for (auto& v : q)
            v = (v - mid) / half;
        return q;
    };
    const auto pa = polyfit3(norm(a.q), a.lr);
    const auto pt = polyfit3(norm(t.q), t.lr);
    const double ia = poly_integral(pa, -1.0, 1.0), it = poly_integral(pt, -1.0, 1.0);
    BdRateResult r;
    r.percent = (std::pow(10.0, (it - ia) / 2.0) - 1.0) * 100.0;
    r.overlap_low = lo;
    r.overlap_high = hi;
    return r;
}

double bitrate_kbps(std::uint64_t total_bits, double fps, std::size_t frames) {
    if (frames == 0 || !(fps > 0.0))
        throw UsageError("bitrate needs a positive frame count and frame rate");
    return static_cast<double>(total_bits) * fps / static_cast<double>(frames) / 1000.0;
}

}  // namespace irav
