#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "irav/block.hpp"

namespace irav {

enum class IntraMode : std::uint8_t { DC = 0, Planar = 1, Hor = 2, Ver = 3, Diag45 = 4, Diag135 = 5 };

inline constexpr std::array<IntraMode, 6> kIntraModes = {IntraMode::DC,  IntraMode::Planar, IntraMode::Hor,
                                                         IntraMode::Ver, IntraMode::Diag45, IntraMode::Diag135};

std::string_view to_string(IntraMode m);
/// Throws DataError for values outside the mode set.
IntraMode intra_mode_from_index(unsigned v);

/// Neighbouring samples of an N x N block: N above, N to the left, and the
/// above-left corner.
struct IntraRefs {
    int size = 0;
    std::vector<int> top;
    std::vector<int> left;
    int corner = 128;
};

/// Reference samples from already reconstructed parts of `plane`. A missing
/// side is filled from the other side's nearest sample; 128 when neither exists.
IntraRefs gather_refs(PixelView plane, int x, int y, int size);

PixelBlock intra_predict(IntraMode mode, const IntraRefs& refs);

}  // namespace irav
