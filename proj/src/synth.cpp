#include "irav/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "irav/error.hpp"

namespace irav {

namespace {

constexpr int kOrbitAmp = 6;  // even, so chroma offsets stay integral

// Smoothed noise canvas; only raw mt19937 output is used so content is
// identical across standard libraries.
FramePlane texture(int w, int h, std::mt19937& rng, int radius) {
    std::vector<int> noise(static_cast<std::size_t>(w) * h);
    for (auto& v : noise)
        v = static_cast<int>(rng() % 256U);
    FramePlane out(w, h);
    const double fx = 2.0 * std::numbers::pi / std::max(w, 1) * 3.0;
    const double fy = 2.0 * std::numbers::pi / std::max(h, 1) * 2.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int sum = 0, n = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int sx = std::clamp(x + dx, 0, w - 1), sy = std::clamp(y + dy, 0, h - 1);
                    sum += noise[static_cast<std::size_t>(sy) * w + sx];
                    ++n;
                }
            const double base = 128.0 + 50.0 * std::sin(fx * x) * std::cos(fy * y);
            const double v = base + 1.5 * (sum / double(n) - 128.0);
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    return out;
}

FramePlane crop(const FramePlane& canvas, int x0, int y0, int w, int h) {
    FramePlane out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = canvas.at(x0 + x, y0 + y);
    return out;
}

}  // namespace

SynthKind parse_synth_kind(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "gradient")
        return SynthKind::Gradient;
    if (s == "checker")
        return SynthKind::Checker;
    if (s == "orbit")
        return SynthKind::Orbit;
    throw UsageError("unknown synth kind '" + std::string(name) + "' (expected gradient, checker or orbit)");
}

std::string_view to_string(SynthKind k) {
    switch (k) {
    case SynthKind::Gradient: return "gradient";
    case SynthKind::Checker: return "checker";
    case SynthKind::Orbit: return "orbit";
    }
    return "?";
}

Offset orbit_offset(int t) {
    const double a = 2.0 * std::numbers::pi * t / 16.0;
    // Rounded to even values so the chroma crop moves by whole samples.
    const auto even = [](double v) { return 2 * static_cast<int>(std::lround(v / 2.0)); };
    return {kOrbitAmp + even(kOrbitAmp * std::sin(a)), kOrbitAmp + even(kOrbitAmp * std::cos(a))};
}

std::vector<Frame420> synthesize(SynthKind kind, int width, int height, int frames, std::uint32_t seed) {
    if (width <= 0 || height <= 0 || width % 2 || height % 2)
        throw UsageError("synth dimensions must be positive and even");
    if (frames < 0)
        throw UsageError("frame count must be non-negative");
    std::mt19937 rng(seed);
    std::vector<Frame420> out;
    out.reserve(static_cast<std::size_t>(frames));

    switch (kind) {
    case SynthKind::Gradient: {
        const int phase = static_cast<int>(rng() % 64U);
        for (int t = 0; t < frames; ++t) {
            Frame420 f(width, height);
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x)
                    f.luma.at(x, y) = static_cast<std::uint8_t>(
                        (x + t + phase) * 160 / (width + 64) + y * 80 / height + 8);
            for (int y = 0; y < height / 2; ++y)
                for (int x = 0; x < width / 2; ++x) {
                    f.cb.at(x, y) = static_cast<std::uint8_t>(96 + (2 * x + t) * 64 / (width + frames));
                    f.cr.at(x, y) = static_cast<std::uint8_t>(160 - y * 64 / height);
                }
            out.push_back(std::move(f));
        }
        break;
    }
    case SynthKind::Checker: {
        const int cell = 8;
        std::vector<std::uint8_t> levels(64);
        for (auto& l : levels)
            l = static_cast<std::uint8_t>(40 + rng() % 176U);
        for (int t = 0; t < frames; ++t) {
            Frame420 f(width, height);
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x) {
                    const int cx = ((x + t) / cell) & 7, cy = ((y + t / 2) / cell) & 7;
                    f.luma.at(x, y) = levels[static_cast<std::size_t>(cy * 8 + cx)];
                }
            for (int y = 0; y < height / 2; ++y)
                for (int x = 0; x < width / 2; ++x) {
                    const bool odd = ((((2 * x + t) / cell) + ((2 * y + t / 2) / cell)) & 1) != 0;
                    f.cb.at(x, y) = odd ? 100 : 150;
                    f.cr.at(x, y) = odd ? 140 : 110;
                }
            out.push_back(std::move(f));
        }
        break;
    }
    case SynthKind::Orbit: {
        const int cw = width + 2 * kOrbitAmp * 2, ch = height + 2 * kOrbitAmp * 2;
        const FramePlane y = texture(cw, ch, rng, 2);
        const FramePlane u = texture(cw / 2, ch / 2, rng, 1);
        const FramePlane v = texture(cw / 2, ch / 2, rng, 1);
        for (int t = 0; t < frames; ++t) {
            const Offset o = orbit_offset(t);
            out.emplace_back(crop(y, o.x, o.y, width, height), crop(u, o.x / 2, o.y / 2, width / 2, height / 2),
                             crop(v, o.x / 2, o.y / 2, width / 2, height / 2));
        }
        break;
    }
    }
    return out;
}

}  // namespace irav
