#pragma once

// Distortion kernels with a scalar reference and optional AVX2 variants.
// All variants return identical integer results; the active set is chosen
// once at startup from the CPU features and can be forced for testing.

#include <cstdint>
#include <string_view>

#include "irav/frame.hpp"

namespace irav::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct DistortionKernels {
    std::uint64_t (*sad)(PixelView a, PixelView b);
    std::uint64_t (*ssd)(PixelView a, PixelView b);
    // Inactive positions (mask == 0) contribute nothing.
    std::uint64_t (*masked_sad)(PixelView a, PixelView b, MaskView m);
    std::uint64_t (*masked_ssd)(PixelView a, PixelView b, MaskView m);
    // Sum of |4x4 Hadamard(a - b)| over all 4x4 tiles; width and height must be multiples of 4.
    std::uint64_t (*hadamard_abs)(PixelView a, PixelView b);
    std::uint64_t (*masked_hadamard_abs)(PixelView a, PixelView b, MaskView m);
};

const DistortionKernels& scalar();
/// nullptr when the build or the CPU lacks AVX2.
const DistortionKernels* avx2();

bool avx2_supported();

/// Kernels used by the rdo module. Defaults to the best supported ISA unless
/// IRAV_FORCE_SCALAR is set in the environment.
const DistortionKernels& active();
Isa active_isa();
/// Throws UsageError if `isa` is not supported on this machine.
void select(Isa isa);

}  // namespace irav::kernels
