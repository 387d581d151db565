#include "irav/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace irav {

namespace {

struct DctBasis {
    int n;
    std::vector<double> c;  // c[k * n + i]

    explicit DctBasis(int size) : n(size), c(static_cast<std::size_t>(size) * size) {
        for (int k = 0; k < n; ++k) {
            const double alpha = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
            for (int i = 0; i < n; ++i)
                c[static_cast<std::size_t>(k) * n + i] = alpha * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
        }
    }
};

const DctBasis& basis(int n) {
    static const std::array<DctBasis, 4> tables{DctBasis(4), DctBasis(8), DctBasis(16), DctBasis(32)};
    switch (n) {
    case 4: return tables[0];
    case 8: return tables[1];
    case 16: return tables[2];
    case 32: return tables[3];
    default: throw UsageError("unsupported transform size " + std::to_string(n));
    }
}

// out = C * in * C^T (forward) or C^T * in * C (inverse).
RealBlock separable(const std::vector<double>& in, int n, bool inverse) {
    const auto& c = basis(n).c;
    std::vector<double> tmp(static_cast<std::size_t>(n) * n, 0.0);
    RealBlock out(n);
    auto coef = [&](int a, int b) { return inverse ? c[static_cast<std::size_t>(b) * n + a] : c[static_cast<std::size_t>(a) * n + b]; };
    // Columns first: tmp[k][x] = sum_y coef(k, y) * in[y][x]
    for (int k = 0; k < n; ++k)
        for (int x = 0; x < n; ++x) {
            double s = 0.0;
            for (int y = 0; y < n; ++y)
                s += coef(k, y) * in[static_cast<std::size_t>(y) * n + x];
            tmp[static_cast<std::size_t>(k) * n + x] = s;
        }
    // Rows: out[k][l] = sum_x tmp[k][x] * coef(l, x)
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int x = 0; x < n; ++x)
                s += tmp[static_cast<std::size_t>(k) * n + x] * coef(l, x);
            out.values[static_cast<std::size_t>(k) * n + l] = s;
        }
    return out;
}

}  // namespace

bool valid_transform_size(int n) { return n == 4 || n == 8 || n == 16 || n == 32; }

CoeffBlock forward_dct(const RealBlock& r) {
    if (!valid_transform_size(r.size))
        throw UsageError("unsupported transform size " + std::to_string(r.size));
    return separable(r.values, r.size, false);
}

CoeffBlock forward_dct(const ResidualBlock& r) {
    if (!valid_transform_size(r.size))
        throw UsageError("unsupported transform size " + std::to_string(r.size));
    std::vector<double> in(r.values.begin(), r.values.end());
    return separable(in, r.size, false);
}

RealBlock inverse_dct(const CoeffBlock& c) {
    if (!valid_transform_size(c.size))
        throw UsageError("unsupported transform size " + std::to_string(c.size));
    return separable(c.values, c.size, true);
}

ResidualBlock round_residual(const RealBlock& r) {
    ResidualBlock out(r.size);
    for (std::size_t i = 0; i < r.values.size(); ++i)
        out.values[i] = static_cast<int>(std::lround(r.values[i]));
    return out;
}

ResidualBlock zero_inactive_residual(const ResidualBlock& r, MaskView m) {
    if (m.width != r.size || m.height != r.size)
        throw UsageError("mask view " + std::to_string(m.width) + "x" + std::to_string(m.height) +
                         " does not match residual block of size " + std::to_string(r.size));
    ResidualBlock out = r;
    for (int y = 0; y < r.size; ++y)
        for (int x = 0; x < r.size; ++x)
            if (!m(x, y))
                out.at(x, y) = 0;
    return out;
}

double quant_step(int qp) {
    if (qp < 0 || qp > 51)
        throw UsageError("qp must be in [0, 51], got " + std::to_string(qp));
    return std::exp2((qp - 4) / 6.0);
}

LevelBlock quantize(const CoeffBlock& c, int qp, bool is_intra) {
    const double step = quant_step(qp);
    const double f = is_intra ? 1.0 / 3.0 : 1.0 / 6.0;
    LevelBlock out(c.size);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        const double v = c.values[i];
        const double mag = std::floor(std::abs(v) / step + f);
        const auto level = static_cast<std::int32_t>(std::min(mag, 32767.0));
        out.levels[i] = v < 0 ? -level : level;
    }
    return out;
}

CoeffBlock dequantize(const LevelBlock& levels, int qp) {
    const double step = quant_step(qp);
    CoeffBlock out(levels.size);
    for (std::size_t i = 0; i < levels.levels.size(); ++i)
        out.values[i] = levels.levels[i] * step;
    return out;
}

double energy(const RealBlock& b) {
    double s = 0.0;
    for (double v : b.values)
        s += v * v;
    return s;
}

double energy(const ResidualBlock& b) {
    double s = 0.0;
    for (int v : b.values)
        s += static_cast<double>(v) * v;
    return s;
}

}  // namespace irav
