#include "irav/codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>

#include "irav/bitio.hpp"
#include "irav/block.hpp"
#include "irav/entropy.hpp"
#include "irav/frame_io.hpp"
#include "irav/inter.hpp"
#include "irav/intra.hpp"
#include "irav/rdo.hpp"
#include "irav/sao.hpp"
#include "irav/transform.hpp"

namespace irav {

namespace {

constexpr int kCtu = 32;
constexpr int kMinCu = 8;
constexpr std::array<std::uint8_t, 4> kMagic = {'I', 'R', 'A', 'V'};

int round_up(int v, int m) { return (v + m - 1) / m * m; }

FramePlane pad_plane(const FramePlane& p, int w, int h) {
    FramePlane out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = p.at(std::min(x, p.width() - 1), std::min(y, p.height() - 1));
    return out;
}

Frame420 pad_frame(const Frame420& f, int w, int h) {
    return {pad_plane(f.luma, w, h), pad_plane(f.cb, w / 2, h / 2), pad_plane(f.cr, w / 2, h / 2)};
}

// Padding outside the picture counts as active for every configuration.
ActivityMask pad_mask(const ActivityMask& m, int w, int h) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h, 1);
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            bits[static_cast<std::size_t>(y) * w + x] = m.active(x, y) ? 1 : 0;
    return ActivityMask(w, h, std::move(bits));
}

FramePlane crop_plane(const FramePlane& p, int w, int h) {
    FramePlane out(w, h);
    for (int y = 0; y < h; ++y)
        std::copy_n(p.samples().begin() + static_cast<std::ptrdiff_t>(y) * p.width(), w,
                    out.samples().begin() + static_cast<std::ptrdiff_t>(y) * w);
    return out;
}

Frame420 crop_frame(const Frame420& f, int w, int h) {
    return {crop_plane(f.luma, w, h), crop_plane(f.cb, w / 2, h / 2), crop_plane(f.cr, w / 2, h / 2)};
}

// ---- syntax ----------------------------------------------------------------

struct CuLeaf {
    bool intra = true;
    IntraMode mode = IntraMode::DC;
    MotionVector mv;
    std::array<LevelBlock, 3> levels;
};

struct CuNode {
    bool split = false;
    CuLeaf leaf;
    std::array<std::unique_ptr<CuNode>, 4> kids;
};

void write_leaf(BitWriter& bw, const CuLeaf& l, bool p_frame) {
    if (p_frame)
        bw.put_bit(l.intra);
    if (l.intra) {
        bw.put_bits(static_cast<std::uint64_t>(l.mode), 3);
    } else {
        bw.put_se(l.mv.x);
        bw.put_se(l.mv.y);
    }
    for (const auto& lv : l.levels)
        entropy_encode_block(bw, lv);
}

void write_node(BitWriter& bw, const CuNode& node, int size, bool p_frame) {
    if (size > kMinCu)
        bw.put_bit(node.split);
    if (node.split) {
        for (const auto& k : node.kids)
            write_node(bw, *k, size / 2, p_frame);
    } else {
        write_leaf(bw, node.leaf, p_frame);
    }
}

// ---- shared reconstruction -----------------------------------------------

using RefSet = std::array<std::unique_ptr<RefPlane>, 3>;

void reconstruct(PixelView pred, const LevelBlock& levels, int qp, MutPixelView out) {
    if (levels.all_zero()) {
        for (int y = 0; y < pred.height; ++y)
            std::copy_n(pred.row(y), pred.width, out.row(y));
        return;
    }
    const RealBlock r = inverse_dct(dequantize(levels, qp));
    for (int y = 0; y < pred.height; ++y)
        for (int x = 0; x < pred.width; ++x)
            out(x, y) = static_cast<std::uint8_t>(
                std::clamp(static_cast<long>(pred(x, y)) + std::lround(r.at(x, y)), 0L, 255L));
}

std::array<PixelBlock, 3> predict_leaf(const CuLeaf& l, const Frame420& recon, const RefSet* refs, int x, int y,
                                       int n) {
    std::array<PixelBlock, 3> pred;
    for (int c = 0; c < 3; ++c) {
        const int bx = c == 0 ? x : x / 2, by = c == 0 ? y : y / 2, bn = c == 0 ? n : n / 2;
        if (l.intra) {
            pred[static_cast<std::size_t>(c)] = intra_predict(l.mode, gather_refs(recon.plane(c).view(), bx, by, bn));
        } else {
            pred[static_cast<std::size_t>(c)] = PixelBlock(bn);
            predict_inter(*(*refs)[static_cast<std::size_t>(c)], bx, by, l.mv, c == 0 ? 2 : 4,
                          pred[static_cast<std::size_t>(c)].mut_view());
        }
    }
    return pred;
}

// ---- encoder ---------------------------------------------------------------

class FrameEncoder {
public:
    FrameEncoder(const EncoderConfig& cfg, const Frame420& orig, const ActivityMask& mask, const ActivityMask& cmask,
                 const RefSet* refs)
        : recon(orig.width(), orig.height(), 128),
          cfg_(cfg),
          lambdas_(lambdas_for_qp(cfg.qp)),
          orig_(orig),
          mask_(mask),
          cmask_(cmask),
          refs_(refs) {}

    double compress(CuNode& node, int x, int y, int n, FrameStats& stats) {
        LeafResult leaf = best_leaf(x, y, n);
        if (n == kMinCu) {
            commit(leaf, x, y, n, stats);
            node.split = false;
            node.leaf = std::move(leaf.leaf);
            return leaf.cost;
        }
        FrameStats kid_stats;
        double split_cost = lambdas_.ssd * 1.0;
        const int h = n / 2;
        for (int k = 0; k < 4; ++k) {
            node.kids[static_cast<std::size_t>(k)] = std::make_unique<CuNode>();
            split_cost += compress(*node.kids[static_cast<std::size_t>(k)], x + (k % 2) * h, y + (k / 2) * h, h, kid_stats);
        }
        if (leaf.cost <= split_cost) {
            commit(leaf, x, y, n, stats);
            node.split = false;
            node.leaf = std::move(leaf.leaf);
            for (auto& k : node.kids)
                k.reset();
            return leaf.cost;
        }
        node.split = true;
        stats.intra_cus += kid_stats.intra_cus;
        stats.inter_cus += kid_stats.inter_cus;
        return split_cost;
    }

    Frame420 recon;

private:
    struct LeafResult {
        CuLeaf leaf;
        std::array<PixelBlock, 3> rec;
        double cost = 0.0;
    };

    bool p_frame() const { return refs_ != nullptr; }

    MaskView mask_view(int c, int x, int y, int n) const {
        return c == 0 ? mask_.view().sub(x, y, n, n) : cmask_.view().sub(x, y, n, n);
    }

    LeafResult code_leaf(CuLeaf leaf, const std::array<PixelBlock, 3>& pred, int x, int y, int n) {
        LeafResult res;
        double dist = 0.0;
        for (int c = 0; c < 3; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            const int bx = c == 0 ? x : x / 2, by = c == 0 ? y : y / 2, bn = c == 0 ? n : n / 2;
            const PixelView org = orig_.plane(c).view().sub(bx, by, bn, bn);
            const MaskView m = mask_view(c, bx, by, bn);
            ResidualBlock r(bn);
            for (int j = 0; j < bn; ++j)
                for (int i = 0; i < bn; ++i)
                    r.at(i, j) = int(org(i, j)) - int(pred[ci].at(i, j));
            if (cfg_.tools.zero_inactive_residual)
                r = zero_inactive_residual(r, m);
            leaf.levels[ci] = quantize(forward_dct(r), cfg_.qp, leaf.intra);
            res.rec[ci] = PixelBlock(bn);
            reconstruct(pred[ci].view(), leaf.levels[ci], cfg_.qp, res.rec[ci].mut_view());
            dist += static_cast<double>(cfg_.tools.masked_rdo ? masked_ssd(org, res.rec[ci].view(), m)
                                                              : ssd(org, res.rec[ci].view()));
        }
        BitWriter bw;
        write_leaf(bw, leaf, p_frame());
        const double bits = static_cast<double>(bw.bit_count() + (n > kMinCu ? 1 : 0));
        res.cost = rd_cost(dist, bits, lambdas_.ssd);
        res.leaf = std::move(leaf);
        return res;
    }

    LeafResult best_leaf(int x, int y, int n) {
        const PixelView org = orig_.luma.view().sub(x, y, n, n);
        const MaskView m = mask_view(0, x, y, n);
        const bool masked = cfg_.tools.masked_rdo;
        const DistortionKind satd_kind{Metric::SATD, masked};

        // Intra pre-selection by SATD plus mode signalling bits.
        const IntraRefs refs = gather_refs(recon.luma.view(), x, y, n);
        const double mode_bits = 3.0 + (p_frame() ? 1.0 : 0.0);
        std::array<std::pair<double, IntraMode>, kIntraModes.size()> ranked{};
        for (std::size_t i = 0; i < kIntraModes.size(); ++i) {
            const PixelBlock p = intra_predict(kIntraModes[i], refs);
            ranked[i] = {distortion(satd_kind, org, p.view(), m) + lambdas_.sad * mode_bits, kIntraModes[i]};
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        std::vector<LeafResult> full;
        for (std::size_t k = 0; k < 2; ++k) {
            CuLeaf leaf;
            leaf.intra = true;
            leaf.mode = ranked[k].second;
            full.push_back(code_leaf(leaf, predict_leaf(leaf, recon, nullptr, x, y, n), x, y, n));
        }

        if (p_frame()) {
            const DistortionKind sad_kind{Metric::SAD, masked};
            const BlockMetric sad_metric = [&](PixelView a, PixelView b) { return distortion(sad_kind, a, b, m); };
            MotionResult mr = motion_search(org, x, y, *(*refs_)[0], cfg_.search_range, sad_metric, lambdas_.sad);
            if (cfg_.half_pel) {
                const BlockMetric satd_metric = [&](PixelView a, PixelView b) {
                    return distortion(satd_kind, a, b, m);
                };
                mr = refine_half_pel(org, x, y, *(*refs_)[0], mr.mv, satd_metric, lambdas_.sad);
            }
            CuLeaf leaf;
            leaf.intra = false;
            leaf.mv = mr.mv;
            full.push_back(code_leaf(leaf, predict_leaf(leaf, recon, refs_, x, y, n), x, y, n));
        }

        std::vector<RdCandidate> cands;
        for (const auto& f : full)
            cands.push_back({f.cost, 0.0});
        // Costs already include lambda * rate; compare them directly.
        const RdDecision d = choose_mode(cands, 1.0);
        return std::move(full[d.index]);
    }

    void commit(const LeafResult& leaf, int x, int y, int n, FrameStats& stats) {
        for (int c = 0; c < 3; ++c) {
            const int bx = c == 0 ? x : x / 2, by = c == 0 ? y : y / 2, bn = c == 0 ? n : n / 2;
            MutPixelView dst = recon.plane(c).mut_view().sub(bx, by, bn, bn);
            const PixelBlock& src = leaf.rec[static_cast<std::size_t>(c)];
            for (int j = 0; j < bn; ++j)
                std::copy_n(src.samples.begin() + static_cast<std::ptrdiff_t>(j) * bn, bn, dst.row(j));
        }
        (leaf.leaf.intra ? stats.intra_cus : stats.inter_cus) += 1;
    }

    const EncoderConfig& cfg_;
    Lambdas lambdas_;
    const Frame420& orig_;
    const ActivityMask& mask_;
    const ActivityMask& cmask_;
    const RefSet* refs_;
};

RefSet make_refs(const Frame420& f, int margin) {
    RefSet r;
    for (int c = 0; c < 3; ++c)
        r[static_cast<std::size_t>(c)] = std::make_unique<RefPlane>(f.plane(c), margin);
    return r;
}

Rect ctu_rect(int c, int cx, int cy) {
    const int s = c == 0 ? kCtu : kCtu / 2;
    return {cx * s, cy * s, s, s};
}

// ---- bitstream serialization ----------------------------------------------

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
    for (int i = bytes - 1; i >= 0; --i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t pos, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i)
        v = (v << 8) | in[pos + static_cast<std::size_t>(i)];
    return v;
}

bool is_p_frame(std::uint32_t index, int intra_period) { return index % static_cast<std::uint32_t>(intra_period) != 0; }

// ---- decoder ---------------------------------------------------------------

class FrameDecoder {
public:
    FrameDecoder(int qp, int w, int h, const RefSet* refs) : qp_(qp), refs_(refs), recon(w, h, 128) {}

    void decode_node(BitReader& br, int x, int y, int n) {
        const bool split = n > kMinCu ? br.get_bit() : false;
        if (split) {
            const int h = n / 2;
            for (int k = 0; k < 4; ++k)
                decode_node(br, x + (k % 2) * h, y + (k / 2) * h, h);
            return;
        }
        CuLeaf leaf;
        leaf.intra = refs_ == nullptr ? true : br.get_bit();
        if (leaf.intra) {
            leaf.mode = intra_mode_from_index(static_cast<unsigned>(br.get_bits(3)));
        } else {
            const std::uint64_t at = br.position();
            const std::int64_t mx = br.get_se(), my = br.get_se();
            if (std::llabs(mx) > 4096 || std::llabs(my) > 4096)
                throw DataError("motion vector out of range at bit offset " + std::to_string(at));
            leaf.mv = {static_cast<int>(mx), static_cast<int>(my)};
        }
        for (int c = 0; c < 3; ++c)
            leaf.levels[static_cast<std::size_t>(c)] = entropy_decode_block(br, c == 0 ? n : n / 2);
        const auto pred = predict_leaf(leaf, recon, refs_, x, y, n);
        for (int c = 0; c < 3; ++c) {
            const int bx = c == 0 ? x : x / 2, by = c == 0 ? y : y / 2, bn = c == 0 ? n : n / 2;
            reconstruct(pred[static_cast<std::size_t>(c)].view(), leaf.levels[static_cast<std::size_t>(c)], qp_,
                        recon.plane(c).mut_view().sub(bx, by, bn, bn));
        }
    }

private:
    int qp_;
    const RefSet* refs_;

public:
    Frame420 recon;
};

}  // namespace

std::uint8_t ToolFlags::to_byte() const {
    return static_cast<std::uint8_t>((masked_rdo ? 1 : 0) | (zero_inactive_residual ? 2 : 0) | (masked_sao ? 4 : 0) |
                                     (sao_enabled ? 8 : 0));
}

ToolFlags ToolFlags::from_byte(std::uint8_t b) {
    return {(b & 1) != 0, (b & 2) != 0, (b & 4) != 0, (b & 8) != 0};
}

void EncoderConfig::validate() const {
    if (qp < 0 || qp > 51)
        throw UsageError("qp must be in [0, 51], got " + std::to_string(qp));
    if (ctu_size != kCtu)
        throw UsageError("ctu_size must be 32");
    if (min_cu != kMinCu)
        throw UsageError("min_cu must be 8");
    if (intra_period < 1 || intra_period > 65535)
        throw UsageError("intra_period must be in [1, 65535]");
    if (search_range < 0 || search_range > 256)
        throw UsageError("search_range must be in [0, 256]");
}

std::vector<std::uint8_t> Bitstream::serialize() const {
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    put_be(out, header.version, 1);
    put_be(out, header.width, 2);
    put_be(out, header.height, 2);
    put_be(out, header.frame_count, 4);
    put_be(out, header.qp, 1);
    put_be(out, header.intra_period, 2);
    put_be(out, header.ctu_size, 1);
    put_be(out, header.tool_flags, 1);
    for (const auto& f : frames) {
        put_be(out, f.bit_length, 4);
        out.insert(out.end(), f.bytes.begin(), f.bytes.end());
    }
    return out;
}

Bitstream Bitstream::parse(std::span<const std::uint8_t> in) {
    using K = BitstreamError::Kind;
    if (in.size() < 4 || !std::equal(kMagic.begin(), kMagic.end(), in.begin()))
        throw BitstreamError(K::BadMagic, "bad bitstream magic (expected \"IRAV\")");
    if (in.size() < kHeaderBytes)
        throw BitstreamError(K::Truncated, "truncated bitstream header (" + std::to_string(in.size()) + " bytes)");
    Bitstream bs;
    auto& h = bs.header;
    h.version = static_cast<std::uint8_t>(get_be(in, 4, 1));
    if (h.version != kBitstreamVersion)
        throw BitstreamError(K::VersionMismatch, "unsupported bitstream version " + std::to_string(h.version));
    h.width = static_cast<std::uint16_t>(get_be(in, 5, 2));
    h.height = static_cast<std::uint16_t>(get_be(in, 7, 2));
    h.frame_count = static_cast<std::uint32_t>(get_be(in, 9, 4));
    h.qp = static_cast<std::uint8_t>(get_be(in, 13, 1));
    h.intra_period = static_cast<std::uint16_t>(get_be(in, 14, 2));
    h.ctu_size = static_cast<std::uint8_t>(get_be(in, 16, 1));
    h.tool_flags = static_cast<std::uint8_t>(get_be(in, 17, 1));
    if (h.ctu_size != kCtu || h.intra_period == 0 || h.qp > 51 || (h.frame_count > 0 && (h.width == 0 || h.height == 0)) ||
        h.width % 2 != 0 || h.height % 2 != 0)
        throw BitstreamError(K::Malformed, "invalid bitstream header fields");
    std::size_t pos = kHeaderBytes;
    for (std::uint32_t f = 0; f < h.frame_count; ++f) {
        if (pos + 4 > in.size())
            throw BitstreamError(K::Truncated, "truncated payload: frame " + std::to_string(f) + " length missing at byte " +
                                                   std::to_string(pos));
        FramePayload p;
        p.bit_length = static_cast<std::uint32_t>(get_be(in, pos, 4));
        pos += 4;
        const std::size_t nbytes = (static_cast<std::size_t>(p.bit_length) + 7) / 8;
        if (pos + nbytes > in.size())
            throw BitstreamError(K::Truncated, "truncated payload: frame " + std::to_string(f) + " needs " +
                                                   std::to_string(nbytes) + " bytes at byte " + std::to_string(pos));
        p.bytes.assign(in.begin() + static_cast<std::ptrdiff_t>(pos), in.begin() + static_cast<std::ptrdiff_t>(pos + nbytes));
        pos += nbytes;
        bs.frames.push_back(std::move(p));
    }
    if (pos != in.size())
        throw BitstreamError(K::Malformed, "trailing data after last frame at byte " + std::to_string(pos));
    return bs;
}

EncodeResult encode_sequence(const std::vector<Frame420>& frames, const ActivityMask& mask, const EncoderConfig& cfg) {
    cfg.validate();
    EncodeResult res;
    const int w = frames.empty() ? mask.width() : frames.front().width();
    const int h = frames.empty() ? mask.height() : frames.front().height();
    for (const auto& f : frames)
        if (f.width() != w || f.height() != h)
            throw DataError("all frames must share dimensions");
    if (mask.width() != w || mask.height() != h)
        throw DataError("mask " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                        " does not match frames " + std::to_string(w) + "x" + std::to_string(h));
    if (w > 65535 || h > 65535)
        throw DataError("frame dimensions exceed 65535");

    const bool has_inactive = !mask.all_active();
    ToolFlags effective = cfg.tools;
    if (!has_inactive)
        effective.masked_rdo = effective.zero_inactive_residual = effective.masked_sao = false;

    auto& hdr = res.bitstream.header;
    hdr.width = static_cast<std::uint16_t>(w);
    hdr.height = static_cast<std::uint16_t>(h);
    hdr.frame_count = static_cast<std::uint32_t>(frames.size());
    hdr.qp = static_cast<std::uint8_t>(cfg.qp);
    hdr.intra_period = static_cast<std::uint16_t>(cfg.intra_period);
    hdr.ctu_size = static_cast<std::uint8_t>(cfg.ctu_size);
    hdr.tool_flags = effective.to_byte();

    const int pw = round_up(w, kCtu), ph = round_up(h, kCtu);
    const ActivityMask pmask = pad_mask(mask, pw, ph);
    const ActivityMask pcmask = subsample_mask_420(pmask);
    const Lambdas lam = lambdas_for_qp(cfg.qp);
    const int ctus_x = pw / kCtu, ctus_y = ph / kCtu;

    RefSet refs;
    for (std::uint32_t fi = 0; fi < frames.size(); ++fi) {
        const bool p_frame = is_p_frame(fi, cfg.intra_period);
        const Frame420 orig = pad_frame(frames[fi], pw, ph);
        FrameEncoder enc(cfg, orig, pmask, pcmask, p_frame ? &refs : nullptr);
        FrameStats stats;
        stats.type = p_frame ? 'P' : 'I';

        std::vector<CuNode> trees(static_cast<std::size_t>(ctus_x * ctus_y));
        for (int cy = 0; cy < ctus_y; ++cy)
            for (int cx = 0; cx < ctus_x; ++cx)
                enc.compress(trees[static_cast<std::size_t>(cy * ctus_x + cx)], cx * kCtu, cy * kCtu, kCtu, stats);

        std::vector<std::array<SaoParams, 3>> sao(trees.size());
        if (cfg.tools.sao_enabled) {
            const Frame420 pre = enc.recon;
            for (int cy = 0; cy < ctus_y; ++cy)
                for (int cx = 0; cx < ctus_x; ++cx)
                    for (int c = 0; c < 3; ++c) {
                        const Rect r = ctu_rect(c, cx, cy);
                        const MaskView mv = c == 0 ? pmask.view() : pcmask.view();
                        const SaoCandidateStats st =
                            collect_all_stats(orig.plane(c).view(), pre.plane(c).view(), r, mv, cfg.tools.masked_sao);
                        const SaoChoice choice = choose_params(st, lam.ssd);
                        sao[static_cast<std::size_t>(cy * ctus_x + cx)][static_cast<std::size_t>(c)] = choice.params;
                        if (choice.params.mode != SaoMode::Off) {
                            apply_sao(pre.plane(c).view(), r, choice.params, enc.recon.plane(c).mut_view());
                            ++stats.sao_on;
                        }
                    }
        }

        BitWriter bw;
        for (std::size_t i = 0; i < trees.size(); ++i) {
            write_node(bw, trees[i], kCtu, p_frame);
            for (const auto& p : sao[i])
                write_sao_params(bw, p);
        }
        if (bw.bit_count() > UINT32_MAX)
            throw DataError("frame payload exceeds 2^32 bits");
        stats.bits = bw.bit_count();
        res.bitstream.frames.push_back({static_cast<std::uint32_t>(bw.bit_count()), bw.bytes()});
        res.frames.push_back(stats);

        refs = make_refs(enc.recon, cfg.search_range + 1);
        res.reconstruction.push_back(crop_frame(enc.recon, w, h));
    }
    res.total_bits = res.bitstream.total_bits();
    return res;
}

std::vector<Frame420> decode_sequence(const Bitstream& bs) {
    const auto& h = bs.header;
    if (h.version != kBitstreamVersion)
        throw BitstreamError(BitstreamError::Kind::VersionMismatch,
                             "unsupported bitstream version " + std::to_string(h.version));
    if (bs.frames.size() != h.frame_count)
        throw BitstreamError(BitstreamError::Kind::Truncated, "frame count does not match header");
    std::vector<Frame420> out;
    if (h.frame_count == 0)
        return out;
    const int w = h.width, ht = h.height;
    const int pw = round_up(w, kCtu), ph = round_up(ht, kCtu);
    const int ctus_x = pw / kCtu, ctus_y = ph / kCtu;
    // Motion vectors are bounded by the decoder's range check, so clamped
    // reads with zero margin reproduce the encoder's padded reference.
    RefSet refs;
    for (std::uint32_t fi = 0; fi < h.frame_count; ++fi) {
        const FramePayload& p = bs.frames[fi];
        const bool p_frame = is_p_frame(fi, h.intra_period);
        FrameDecoder dec(h.qp, pw, ph, p_frame ? &refs : nullptr);
        std::vector<std::array<SaoParams, 3>> sao(static_cast<std::size_t>(ctus_x * ctus_y));
        try {
            BitReader br(p.bytes, p.bit_length);
            for (int cy = 0; cy < ctus_y; ++cy)
                for (int cx = 0; cx < ctus_x; ++cx) {
                    dec.decode_node(br, cx * kCtu, cy * kCtu, kCtu);
                    for (auto& sp : sao[static_cast<std::size_t>(cy * ctus_x + cx)])
                        sp = read_sao_params(br);
                }
            if (br.remaining() != 0)
                throw DataError(std::to_string(br.remaining()) + " unread bits at end of payload");
        } catch (const BitstreamError&) {
            throw;
        } catch (const DataError& e) {
            throw BitstreamError(BitstreamError::Kind::Malformed,
                                 "frame " + std::to_string(fi) + ": " + std::string(e.what()));
        }
        const Frame420 pre = dec.recon;
        for (int cy = 0; cy < ctus_y; ++cy)
            for (int cx = 0; cx < ctus_x; ++cx)
                for (int c = 0; c < 3; ++c) {
                    const SaoParams& sp = sao[static_cast<std::size_t>(cy * ctus_x + cx)][static_cast<std::size_t>(c)];
                    if (sp.mode != SaoMode::Off)
                        apply_sao(pre.plane(c).view(), ctu_rect(c, cx, cy), sp, dec.recon.plane(c).mut_view());
                }
        refs = make_refs(dec.recon, 0);
        out.push_back(crop_frame(dec.recon, w, ht));
    }
    return out;
}

std::vector<Frame420> decode_sequence(std::span<const std::uint8_t> bytes) {
    return decode_sequence(Bitstream::parse(bytes));
}

}  // namespace irav
