#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "irav/frame.hpp"

namespace irav {

enum class SynthKind { Gradient, Checker, Orbit };

SynthKind parse_synth_kind(std::string_view name);
std::string_view to_string(SynthKind k);

/// Deterministic test content with global motion. Even dimensions required.
std::vector<Frame420> synthesize(SynthKind kind, int width, int height, int frames, std::uint32_t seed);

/// Integer luma displacement of orbit frame `t` relative to the canvas origin.
struct Offset {
    int x = 0;
    int y = 0;
};
Offset orbit_offset(int t);

}  // namespace irav
