#pragma once

#include <cstdint>
#include <vector>

#include "irav/frame.hpp"

namespace irav {

/// Square N x N block of 8-bit samples (original, predicted or reconstructed).
struct PixelBlock {
    int size = 0;
    std::vector<std::uint8_t> samples;

    PixelBlock() = default;
    explicit PixelBlock(int n, std::uint8_t fill = 0) : size(n), samples(static_cast<std::size_t>(n) * n, fill) {}

    std::uint8_t& at(int x, int y) { return samples[static_cast<std::size_t>(y) * size + x]; }
    std::uint8_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * size + x]; }
    PixelView view() const { return {samples.data(), size, size, size}; }
    MutPixelView mut_view() { return {samples.data(), size, size, size}; }

    bool operator==(const PixelBlock&) const = default;
};

/// Signed spatial residual, values in [-255, 255].
struct ResidualBlock {
    int size = 0;
    std::vector<int> values;

    ResidualBlock() = default;
    explicit ResidualBlock(int n) : size(n), values(static_cast<std::size_t>(n) * n, 0) {}

    int& at(int x, int y) { return values[static_cast<std::size_t>(y) * size + x]; }
    int at(int x, int y) const { return values[static_cast<std::size_t>(y) * size + x]; }

    bool operator==(const ResidualBlock&) const = default;
};

/// Real-valued block: transform coefficients, or an inverse-transformed residual.
struct RealBlock {
    int size = 0;
    std::vector<double> values;

    RealBlock() = default;
    explicit RealBlock(int n) : size(n), values(static_cast<std::size_t>(n) * n, 0.0) {}

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * size + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * size + x]; }
};

using CoeffBlock = RealBlock;

/// Quantized transform levels; each fits a signed 16-bit integer.
struct LevelBlock {
    int size = 0;
    std::vector<std::int32_t> levels;

    LevelBlock() = default;
    explicit LevelBlock(int n) : size(n), levels(static_cast<std::size_t>(n) * n, 0) {}

    std::int32_t& at(int x, int y) { return levels[static_cast<std::size_t>(y) * size + x]; }
    std::int32_t at(int x, int y) const { return levels[static_cast<std::size_t>(y) * size + x]; }
    bool all_zero() const {
        for (auto v : levels)
            if (v != 0)
                return false;
        return true;
    }

    bool operator==(const LevelBlock&) const = default;
};

}  // namespace irav
