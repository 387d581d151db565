#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "irav/frame.hpp"

namespace irav {

/// Reads up to `max_frames` planar 8-bit 4:2:0 frames. Throws DataError when the
/// file does not hold a whole number of frames.
std::vector<Frame420> read_yuv420(const std::filesystem::path& path, int width, int height,
                                  std::size_t max_frames = SIZE_MAX);

/// Writes Y, Cb, Cr planes of each frame back to back. Returns bytes written.
std::uint64_t write_yuv420(const std::vector<Frame420>& frames, const std::filesystem::path& path);

/// Binary PGM (P5, maxval 255). Values >= 128 are active.
ActivityMask read_mask_pgm(const std::filesystem::path& path);
std::uint64_t write_mask_pgm(const ActivityMask& mask, const std::filesystem::path& path);

/// Half-resolution mask for 4:2:0 chroma: a chroma sample is inactive only if
/// all four luma samples it covers are inactive.
ActivityMask subsample_mask_420(const ActivityMask& mask);

}  // namespace irav
