#pragma once

#include <span>
#include <string_view>

#include "irav/frame.hpp"

namespace irav {

inline constexpr double kPsnrCap = 99.99;

/// Identical planes give kPsnrCap.
double psnr(const FramePlane& a, const FramePlane& b, double peak = 255.0);
/// MSE over active pixels only; throws DataError when none are active.
double masked_psnr(const FramePlane& a, const FramePlane& b, const ActivityMask& mask, double peak = 255.0);
/// Sphere-weighted PSNR for ERP frames (width == 2 * height).
double ws_psnr_erp(const FramePlane& a, const FramePlane& b, double peak = 255.0);

struct RdPoint {
    double bitrate = 0.0;  // kbps
    double quality = 0.0;  // dB
};

struct BdRateResult {
    double percent = 0.0;
    double overlap_low = 0.0;
    double overlap_high = 0.0;
    std::string_view variant = "cubic-polyfit";
};

/// Bjontegaard delta rate of `test` against `anchor`: cubic fit of log10(rate)
/// over quality, integrated over the shared quality interval.
BdRateResult bd_rate(std::span<const RdPoint> anchor, std::span<const RdPoint> test);

/// kbps = bits * fps / frames / 1000.
double bitrate_kbps(std::uint64_t total_bits, double fps, std::size_t frames);

}  // namespace irav
