#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "irav/bitio.hpp"
#include "irav/frame.hpp"

namespace irav {

enum class SaoMode : std::uint8_t { Off = 0, Edge = 1, Band = 2 };

/// Edge-offset neighbour directions, in signalling order.
enum class EoDirection : std::uint8_t { Deg0 = 0, Deg90 = 1, Deg135 = 2, Deg45 = 3 };

inline constexpr int kSaoBands = 32;
inline constexpr int kSaoBandShift = 3;      // 8-value bands for 8-bit samples
inline constexpr int kSaoMaxBandStart = 28;  // four consecutive bands, no wrap
inline constexpr int kSaoMaxOffset = 7;

struct SaoParams {
    SaoMode mode = SaoMode::Off;
    EoDirection direction = EoDirection::Deg0;
    int band_start = 0;
    std::array<int, 4> offsets{};  // EO categories 1..4, or bands band_start..band_start+3

    bool operator==(const SaoParams&) const = default;
};

/// Per-category sample count and sum of (original - reconstructed). Edge
/// offset uses categories 0..4, band offset uses the 32 bands.
struct SaoStats {
    std::array<std::int64_t, kSaoBands> count{};
    std::array<std::int64_t, kSaoBands> diff_sum{};

    std::int64_t total_count() const;
    bool operator==(const SaoStats&) const = default;
};

struct Rect {
    int x = 0, y = 0, w = 0, h = 0;
};

/// 1: local minimum, 2: below one neighbour and equal to the other,
/// 3: above one and equal to the other, 4: local maximum, 0: none.
int classify_eo(int center, int n1, int n2);

enum class SaoClass { Band, Eo0, Eo90, Eo135, Eo45 };

/// Statistics over `region` of the planes. Pixels whose edge-offset neighbour
/// falls outside the plane are excluded. With `masked`, inactive pixels are
/// skipped, but inactive neighbours still take part in classification.
SaoStats collect_stats(PixelView orig, PixelView recon, Rect region, MaskView mask, SaoClass cls, bool masked);

/// Statistics for every candidate of one region.
struct SaoCandidateStats {
    std::array<SaoStats, 4> edge;  // indexed by EoDirection
    SaoStats band;
};

SaoCandidateStats collect_all_stats(PixelView orig, PixelView recon, Rect region, MaskView mask, bool masked);

struct SaoChoice {
    SaoParams params;
    double delta_distortion = 0.0;  // estimated SSD change (negative is better)
    int rate_bits = 1;
    double cost = 0.0;
};

/// Per-category offset round(diff_sum / count) clamped to +-7, 0 for empty categories.
int sao_offset(std::int64_t diff_sum, std::int64_t count);
/// Estimated SSD change sum(count*o^2 - 2*o*diff_sum) of applying `offsets`.
double sao_delta_distortion(const SaoStats& stats, std::span<const int> categories, std::span<const int> offsets);

/// Signalled size of a parameter set: 1 bit off, 20 bits edge, 23 bits band.
int sao_param_bits(const SaoParams& p);

/// Picks the cheapest of OFF, EO 0/90/135/45, BO starts 0..28 by est. dD + lambda*R;
/// ties resolve in that order.
SaoChoice choose_params(const SaoCandidateStats& stats, double lambda);

/// Applies `params` to `region`, reading unfiltered samples from `recon` and
/// writing into `out` (same geometry as recon). All pixels are filtered
/// regardless of activity.
void apply_sao(PixelView recon, Rect region, const SaoParams& params, MutPixelView out);

void write_sao_params(BitWriter& bw, const SaoParams& p);
SaoParams read_sao_params(BitReader& br);

}  // namespace irav
