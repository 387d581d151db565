#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>
#include <algorithm>

#include "irav/block.hpp"
#include "irav/frame.hpp"
#include "irav/geometry.hpp"

namespace irav::test {

inline FramePlane random_plane(int w, int h, std::mt19937& rng) {
    FramePlane p(w, h);
    for (auto& s : p.samples())
        s = static_cast<std::uint8_t>(rng() & 0xFF);
    return p;
}

inline Frame420 random_frame(int w, int h, std::mt19937& rng) {
    return {random_plane(w, h, rng), random_plane(w / 2, h / 2, rng), random_plane(w / 2, h / 2, rng)};
}

inline ActivityMask random_mask(int w, int h, std::mt19937& rng) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
    const unsigned density = rng() % 5U;  // 0: all active ... 4: mostly inactive
    for (auto& b : bits)
        b = (rng() % 4U) >= density ? 1 : 0;
    return ActivityMask(w, h, std::move(bits));
}

inline PixelBlock random_block(int n, std::mt19937& rng) {
    PixelBlock b(n);
    for (auto& s : b.samples)
        s = static_cast<std::uint8_t>(rng() & 0xFF);
    return b;
}

/// Block shaped like `a` plus small noise, so differences are realistic.
inline PixelBlock noisy_copy(const PixelBlock& a, int amp, std::mt19937& rng) {
    PixelBlock b = a;
    for (auto& s : b.samples) {
        const int d = static_cast<int>(rng() % static_cast<unsigned>(2 * amp + 1)) - amp;
        s = static_cast<std::uint8_t>(std::clamp(int(s) + d, 0, 255));
    }
    return b;
}

inline std::vector<std::uint8_t> random_block_mask(int n, std::mt19937& rng) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n);
    for (auto& v : m)
        v = static_cast<std::uint8_t>(rng() & 1U);
    return m;
}

/// Smooth function of the viewing direction, sampled on an ERP grid.
inline Frame420 smooth_erp(int w, int h) {
    Frame420 f(w, h);
    auto value = [](const SphereDirection& d, double scale) {
        const double x = std::cos(d.latitude) * std::sin(d.longitude);
        const double y = std::sin(d.latitude);
        const double z = std::cos(d.latitude) * std::cos(d.longitude);
        return 128.0 + scale * (0.45 * x + 0.35 * y + 0.2 * z * x + 0.25 * y * z);
    };
    for (int c = 0; c < 3; ++c) {
        FramePlane& p = f.plane(c);
        const double scale = c == 0 ? 150.0 : 60.0;
        for (int y = 0; y < p.height(); ++y)
            for (int x = 0; x < p.width(); ++x) {
                // Chroma sample centres in luma coordinates.
                const double lx = c == 0 ? x : 2.0 * x + 0.5, ly = c == 0 ? y : 2.0 * y + 0.5;
                const double v = value(erp_to_dir(lx, ly, w, h), scale);
                p.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
    }
    return f;
}

/// Vertical inactive strip of `strip` columns starting at x0.
inline ActivityMask strip_mask(int w, int h, int x0, int strip) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = x0; x < x0 + strip; ++x)
            bits[static_cast<std::size_t>(y) * w + x] = 0;
    return ActivityMask(w, h, std::move(bits));
}

inline std::filesystem::path temp_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("irav_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace irav::test
