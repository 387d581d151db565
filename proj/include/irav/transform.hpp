#pragma once

#include "irav/block.hpp"

namespace irav {

/// True for the supported transform sizes (4, 8, 16, 32).
bool valid_transform_size(int n);

/// Orthonormal separable 2D DCT-II.
CoeffBlock forward_dct(const ResidualBlock& r);
CoeffBlock forward_dct(const RealBlock& r);
/// Exact inverse of forward_dct (real-valued; see round_residual).
RealBlock inverse_dct(const CoeffBlock& c);

ResidualBlock round_residual(const RealBlock& r);

/// Sets residual samples at inactive mask positions to zero.
ResidualBlock zero_inactive_residual(const ResidualBlock& r, MaskView block_mask);

/// Step size 2^((qp-4)/6).
double quant_step(int qp);

/// Dead-zone scalar quantizer: rounding offset 1/3 for intra, 1/6 for inter.
LevelBlock quantize(const CoeffBlock& c, int qp, bool is_intra);
CoeffBlock dequantize(const LevelBlock& levels, int qp);

double energy(const RealBlock& b);
double energy(const ResidualBlock& b);

}  // namespace irav
