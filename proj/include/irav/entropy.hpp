#pragma once

#include <cstdint>
#include <vector>

#include "irav/bitio.hpp"
#include "irav/block.hpp"

namespace irav {

/// Zigzag scan positions (raster indices) for an N x N block.
const std::vector<int>& zigzag_order(int n);

/// coded_block_flag; then last significant zigzag index (EG0); then for each
/// index up to last a significance bit, and for significant ones (|level|-1)
/// as EG1 followed by a sign bit.
void entropy_encode_block(BitWriter& bw, const LevelBlock& levels);
LevelBlock entropy_decode_block(BitReader& br, int n);

/// Exact bit cost of entropy_encode_block.
std::uint64_t block_bits(const LevelBlock& levels);

}  // namespace irav
