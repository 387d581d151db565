#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "irav/frame.hpp"

namespace irav {

enum class Metric { SAD, SSD, SATD };

struct DistortionKind {
    Metric metric = Metric::SSD;
    bool masked = false;
};

// Plain distortions sum over every position; masked ones skip inactive
// positions (mask sample 0). Blocks and masks must share geometry.
std::uint64_t sad(PixelView a, PixelView b);
std::uint64_t ssd(PixelView a, PixelView b);
std::uint64_t masked_sad(PixelView a, PixelView b, MaskView m);
std::uint64_t masked_ssd(PixelView a, PixelView b, MaskView m);

// Sum over 4x4 tiles of the absolute +-1 Hadamard coefficients of the
// difference, divided by the tile side. The masked form zeroes the
// difference at inactive positions before the transform.
double satd(PixelView a, PixelView b);
double masked_satd(PixelView a, PixelView b, MaskView m);

/// Dispatches on `kind`; `mask` is ignored unless kind.masked.
double distortion(DistortionKind kind, PixelView a, PixelView b, MaskView mask);

struct Lambdas {
    double ssd;
    double sad;   // also used with SATD
};

/// lambda_ssd = 0.85 * 2^((qp-12)/3), lambda_sad = sqrt(lambda_ssd).
Lambdas lambdas_for_qp(int qp);

/// J = D + lambda * R. Throws UsageError on negative D or R or non-positive lambda.
double rd_cost(double distortion, double rate_bits, double lambda);

struct RdCandidate {
    double distortion = 0.0;
    double rate_bits = 0.0;
};

struct RdDecision {
    std::size_t index = 0;   // position in the candidate list
    double distortion = 0.0;
    double rate_bits = 0.0;
    double cost = 0.0;
};

/// Lowest J wins; on equal J the earliest candidate wins.
RdDecision choose_mode(std::span<const RdCandidate> candidates, double lambda);

}  // namespace irav
