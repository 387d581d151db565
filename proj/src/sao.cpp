#include "irav/sao.hpp"

#include <algorithm>
#include <cstdlib>
#include <span>
#include <string>

#include "irav/error.hpp"

namespace irav {

namespace {

constexpr int kEoOffsets[4][2][2] = {
    {{-1, 0}, {1, 0}},    // 0 deg
    {{0, -1}, {0, 1}},    // 90 deg
    {{-1, -1}, {1, 1}},   // 135 deg
    {{1, -1}, {-1, 1}},   // 45 deg
};

constexpr int kEdgeCategories[4] = {1, 2, 3, 4};

int sign(int v) { return (v > 0) - (v < 0); }

void check_region(PixelView plane, Rect r) {
    if (r.x < 0 || r.y < 0 || r.w <= 0 || r.h <= 0 || r.x + r.w > plane.width || r.y + r.h > plane.height)
        throw UsageError("SAO region outside plane");
}

// Category of (x, y) under `cls`, or -1 when an edge neighbour is missing.
int category(PixelView p, int x, int y, SaoClass cls) {
    const int c = p(x, y);
    if (cls == SaoClass::Band)
        return c >> kSaoBandShift;
    const auto& o = kEoOffsets[static_cast<int>(cls) - 1];
    const int x1 = x + o[0][0], y1 = y + o[0][1], x2 = x + o[1][0], y2 = y + o[1][1];
    if (x1 < 0 || x2 < 0 || y1 < 0 || y2 < 0 || x1 >= p.width || x2 >= p.width || y1 >= p.height || y2 >= p.height)
        return -1;
    return classify_eo(c, p(x1, y1), p(x2, y2));
}

}  // namespace

std::int64_t SaoStats::total_count() const {
    std::int64_t s = 0;
    for (auto c : count)
        s += c;
    return s;
}

int classify_eo(int center, int n1, int n2) {
    switch (sign(center - n1) + sign(center - n2)) {
    case -2: return 1;
    case -1: return 2;
    case 1: return 3;
    case 2: return 4;
    default: return 0;
    }
}

SaoStats collect_stats(PixelView orig, PixelView recon, Rect r, MaskView mask, SaoClass cls, bool masked) {
    if (orig.width != recon.width || orig.height != recon.height)
        throw UsageError("SAO original/reconstruction geometry mismatch");
    if (masked && (mask.width != recon.width || mask.height != recon.height))
        throw UsageError("SAO mask geometry mismatch");
    check_region(recon, r);
    SaoStats s;
    for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x) {
            if (masked && !mask(x, y))
                continue;
            const int cat = category(recon, x, y, cls);
            if (cat < 0)
                continue;
            s.count[static_cast<std::size_t>(cat)] += 1;
            s.diff_sum[static_cast<std::size_t>(cat)] += int(orig(x, y)) - int(recon(x, y));
        }
    return s;
}

SaoCandidateStats collect_all_stats(PixelView orig, PixelView recon, Rect region, MaskView mask, bool masked) {
    SaoCandidateStats out;
    for (int d = 0; d < 4; ++d)
        out.edge[static_cast<std::size_t>(d)] =
            collect_stats(orig, recon, region, mask, static_cast<SaoClass>(d + 1), masked);
    out.band = collect_stats(orig, recon, region, mask, SaoClass::Band, masked);
    return out;
}

int sao_offset(std::int64_t diff_sum, std::int64_t count) {
    if (count == 0)
        return 0;
    // round half away from zero
    const std::int64_t mag = (2 * std::llabs(diff_sum) + count) / (2 * count);
    const std::int64_t v = diff_sum < 0 ? -mag : mag;
    return static_cast<int>(std::clamp<std::int64_t>(v, -kSaoMaxOffset, kSaoMaxOffset));
}

double sao_delta_distortion(const SaoStats& stats, std::span<const int> categories, std::span<const int> offsets) {
    double d = 0.0;
    for (std::size_t i = 0; i < categories.size(); ++i) {
        const auto c = static_cast<std::size_t>(categories[i]);
        const double o = offsets[i];
        d += static_cast<double>(stats.count[c]) * o * o - 2.0 * o * static_cast<double>(stats.diff_sum[c]);
    }
    return d;
}

int sao_param_bits(const SaoParams& p) {
    switch (p.mode) {
    case SaoMode::Off: return 1;
    case SaoMode::Edge: return 1 + 1 + 2 + 4 * 4;
    case SaoMode::Band: return 1 + 1 + 5 + 4 * 4;
    }
    return 1;
}

SaoChoice choose_params(const SaoCandidateStats& stats, double lambda) {
    SaoChoice best;
    best.params = {};
    best.delta_distortion = 0.0;
    best.rate_bits = 1;
    best.cost = lambda * 1;

    auto consider = [&](const SaoParams& p, double dd) {
        const int bits = sao_param_bits(p);
        const double cost = dd + lambda * bits;
        if (cost < best.cost)
            best = {p, dd, bits, cost};
    };

    for (int d = 0; d < 4; ++d) {
        const SaoStats& s = stats.edge[static_cast<std::size_t>(d)];
        SaoParams p;
        p.mode = SaoMode::Edge;
        p.direction = static_cast<EoDirection>(d);
        for (int k = 0; k < 4; ++k)
            p.offsets[static_cast<std::size_t>(k)] =
                sao_offset(s.diff_sum[static_cast<std::size_t>(kEdgeCategories[k])], s.count[static_cast<std::size_t>(kEdgeCategories[k])]);
        consider(p, sao_delta_distortion(s, kEdgeCategories, p.offsets));
    }
    for (int start = 0; start <= kSaoMaxBandStart; ++start) {
        SaoParams p;
        p.mode = SaoMode::Band;
        p.band_start = start;
        const int cats[4] = {start, start + 1, start + 2, start + 3};
        for (int k = 0; k < 4; ++k)
            p.offsets[static_cast<std::size_t>(k)] =
                sao_offset(stats.band.diff_sum[static_cast<std::size_t>(cats[k])], stats.band.count[static_cast<std::size_t>(cats[k])]);
        consider(p, sao_delta_distortion(stats.band, cats, p.offsets));
    }
    return best;
}

void apply_sao(PixelView recon, Rect r, const SaoParams& params, MutPixelView out) {
    if (out.width != recon.width || out.height != recon.height)
        throw UsageError("SAO output geometry mismatch");
    check_region(recon, r);
    for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x) {
            const int v = recon(x, y);
            int offset = 0;
            if (params.mode == SaoMode::Edge) {
                const int cat = category(recon, x, y, static_cast<SaoClass>(static_cast<int>(params.direction) + 1));
                if (cat > 0)
                    offset = params.offsets[static_cast<std::size_t>(cat - 1)];
            } else if (params.mode == SaoMode::Band) {
                const int k = (v >> kSaoBandShift) - params.band_start;
                if (k >= 0 && k < 4)
                    offset = params.offsets[static_cast<std::size_t>(k)];
            }
            out(x, y) = static_cast<std::uint8_t>(std::clamp(v + offset, 0, 255));
        }
}

void write_sao_params(BitWriter& bw, const SaoParams& p) {
    if (p.mode == SaoMode::Off) {
        bw.put_bit(false);
        return;
    }
    bw.put_bit(true);
    bw.put_bit(p.mode == SaoMode::Band);
    if (p.mode == SaoMode::Edge)
        bw.put_bits(static_cast<std::uint64_t>(p.direction), 2);
    else
        bw.put_bits(static_cast<std::uint64_t>(p.band_start), 5);
    for (int o : p.offsets) {
        bw.put_bit(o < 0);
        bw.put_bits(static_cast<std::uint64_t>(std::abs(o)), 3);
    }
}

SaoParams read_sao_params(BitReader& br) {
    SaoParams p;
    if (!br.get_bit())
        return p;
    p.mode = br.get_bit() ? SaoMode::Band : SaoMode::Edge;
    if (p.mode == SaoMode::Edge) {
        p.direction = static_cast<EoDirection>(br.get_bits(2));
    } else {
        const std::uint64_t at = br.position();
        p.band_start = static_cast<int>(br.get_bits(5));
        if (p.band_start > kSaoMaxBandStart)
            throw DataError("SAO band start " + std::to_string(p.band_start) + " out of range at bit offset " +
                            std::to_string(at));
    }
    for (int& o : p.offsets) {
        const bool neg = br.get_bit();
        const int mag = static_cast<int>(br.get_bits(3));
        o = neg ? -mag : mag;
    }
    return p;
}

}  // namespace irav
