#include "irav/rdo.hpp"

#include <cmath>

#include "irav/error.hpp"
#include "irav/kernels.hpp"

namespace irav {

namespace {

void check_pair(PixelView a, PixelView b) {
    if (a.width != b.width || a.height != b.height)
        throw UsageError("block geometry mismatch: " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                         " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
}

void check_mask(PixelView a, MaskView m) {
    if (a.width != m.width || a.height != m.height)
        throw UsageError("mask view does not match block geometry");
}

void check_tiles(PixelView a) {
    if (a.width % 4 != 0 || a.height % 4 != 0)
        throw UsageError("SATD needs block sides that are multiples of 4");
}

}  // namespace

std::uint64_t sad(PixelView a, PixelView b) {
    check_pair(a, b);
    return kernels::active().sad(a, b);
}

std::uint64_t ssd(PixelView a, PixelView b) {
    check_pair(a, b);
    return kernels::active().ssd(a, b);
}

std::uint64_t masked_sad(PixelView a, PixelView b, MaskView m) {
    check_pair(a, b);
    check_mask(a, m);
    return kernels::active().masked_sad(a, b, m);
}

std::uint64_t masked_ssd(PixelView a, PixelView b, MaskView m) {
    check_pair(a, b);
    check_mask(a, m);
    return kernels::active().masked_ssd(a, b, m);
}

double satd(PixelView a, PixelView b) {
    check_pair(a, b);
    check_tiles(a);
    return static_cast<double>(kernels::active().hadamard_abs(a, b)) / 4.0;
}

double masked_satd(PixelView a, PixelView b, MaskView m) {
    check_pair(a, b);
    check_mask(a, m);
    check_tiles(a);
    return static_cast<double>(kernels::active().masked_hadamard_abs(a, b, m)) / 4.0;
}

double distortion(DistortionKind kind, PixelView a, PixelView b, MaskView mask) {
    switch (kind.metric) {
    case Metric::SAD: return static_cast<double>(kind.masked ? masked_sad(a, b, mask) : sad(a, b));
    case Metric::SSD: return static_cast<double>(kind.masked ? masked_ssd(a, b, mask) : ssd(a, b));
    case Metric::SATD: return kind.masked ? masked_satd(a, b, mask) : satd(a, b);
    }
    return 0.0;
}

Lambdas lambdas_for_qp(int qp) {
    const double l = 0.85 * std::exp2((qp - 12) / 3.0);
    return {l, std::sqrt(l)};
}

double rd_cost(double d, double r, double lambda) {
    if (d < 0 || r < 0)
        throw UsageError("distortion and rate must be non-negative");
    if (!(lambda > 0))
        throw UsageError("lambda must be positive");
    return d + lambda * r;
}

RdDecision choose_mode(std::span<const RdCandidate> candidates, double lambda) {
    if (candidates.empty())
        throw UsageError("choose_mode needs at least one candidate");
    RdDecision best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double j = rd_cost(candidates[i].distortion, candidates[i].rate_bits, lambda);
        if (i == 0 || j < best.cost)
            best = {i, candidates[i].distortion, candidates[i].rate_bits, j};
    }
    return best;
}

}  // namespace irav
