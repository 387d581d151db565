// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "irav/codec.hpp"
#include "irav/experiment.hpp"
#include "irav/frame_io.hpp"
#include "irav/geometry.hpp"
#include "irav/metrics.hpp"
#include "irav/rdo.hpp"
#include "irav/sao.hpp"
#include "irav/synth.hpp"
#include "irav/transform.hpp"
#include "support.hpp"

using namespace irav;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<int> kQps{22, 27, 32, 37};

struct Clip {
    std::string name;
    std::vector<Frame420> frames;
};

std::vector<Clip> closure_corpus() {
    std::vector<Clip> out;
    for (auto kind : {SynthKind::Gradient, SynthKind::Checker, SynthKind::Orbit})
        for (auto [w, h] : {std::pair{96, 96}, std::pair{192, 96}})
            out.push_back({std::string(to_string(kind)) + "_" + std::to_string(w) + "x" + std::to_string(h),
                           synthesize(kind, w, h, 5, 11)});
    return out;
}

EncoderConfig small_cfg(int qp, ToolFlags tools) {
    EncoderConfig c;
    c.qp = qp;
    c.intra_period = 3;
    c.search_range = 4;
    c.tools = tools;
    return c;
}

// OHP layout: triangle boxes, about half the frame inactive along diagonals.
ActivityMask diagonal_mask(int w, int h) { return generate_mask({Projection::OHP, 16}, w, h); }

Outcome criterion1() {
    const auto t0 = Clock::now();
    int points = 0;
    for (const auto& clip : closure_corpus()) {
        const int w = clip.frames.front().width(), h = clip.frames.front().height();
        const ActivityMask mask = diagonal_mask(w, h);
        for (int qp : kQps)
            for (const ToolFlags& tools : {ToolFlags::none(), ToolFlags::all()}) {
                const EncodeResult r = encode_sequence(clip.frames, mask, small_cfg(qp, tools));
                const auto decoded = decode_sequence(r.bitstream.serialize());
                ++points;
                if (decoded != r.reconstruction)
                    return {false, clip.name + " qp " + std::to_string(qp) + " decoder mismatch"};
            }
    }
    const double s = seconds_since(t0);
    return {s < 60.0, std::to_string(points) + " points bit-exact in " + std::to_string(s) + " s"};
}

Outcome criterion2() {
    int points = 0;
    for (const auto& clip : closure_corpus()) {
        const int w = clip.frames.front().width(), h = clip.frames.front().height();
        const ActivityMask mask(w, h);
        for (int qp : kQps) {
            const auto a = encode_sequence(clip.frames, mask, small_cfg(qp, ToolFlags::none())).bitstream.serialize();
            const auto b = encode_sequence(clip.frames, mask, small_cfg(qp, ToolFlags::all())).bitstream.serialize();
            ++points;
            if (a != b)
                return {false, clip.name + " qp " + std::to_string(qp) + " bitstreams differ"};
        }
    }
    return {true, std::to_string(points) + " points byte-identical"};
}

Outcome criterion3() {
    const auto t0 = Clock::now();
    struct Row {
        Projection p;
        int w, h;
        double target, tol;  // percent, percentage points
    };
    const std::vector<Row> rows = {
        {Projection::CMP, 3840, 2880, 50.0, 0.0},  {Projection::CMP, 4736, 3552, 50.0, 0.0},
        {Projection::SSP, 1008, 6080, 7.64, 0.05}, {Projection::SSP, 1216, 7328, 7.56, 0.05},
        {Projection::OHP, 2880, 1248, 49.7, 1.0},  {Projection::OHP, 6176, 2672, 49.9, 1.0},
        {Projection::COHP, 2176, 2552, 1.25, 2.0}, {Projection::COHP, 2672, 3128, 1.02, 2.0},
        {Projection::CISP, 1416, 1816, 8.71, 2.0}, {Projection::CISP, 2496, 3320, 4.94, 2.0},
        {Projection::RSP, 2880, 1920, 5.33, 2.0},  {Projection::RSP, 3552, 2368, 5.48, 2.0},
    };
    std::string detail;
    bool ok = true;
    for (const auto& r : rows) {
        const double pct = 100.0 * generate_mask({r.p, 16}, r.w, r.h).inactive_fraction();
        const bool pass = r.tol == 0.0 ? pct == r.target : std::fabs(pct - r.target) <= r.tol;
        ok = ok && pass;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s%s %.3f%%", detail.empty() ? "" : ", ", std::string(to_string(r.p)).c_str(),
                      pct);
        detail += buf;
    }
    const double s = seconds_since(t0);
    return {ok && s < 5.0, detail + " (" + std::to_string(s) + " s)"};
}

double sweep_bd(const std::vector<Frame420>& frames, const ActivityMask& mask) {
    SequenceInput seq;
    seq.name = "orbit";
    seq.format = {Projection::OHP, 16};
    seq.frames = frames;
    seq.mask = mask;
    SweepSpec spec;
    const SweepResult r = run_sweep({seq}, spec);
    return r.rows.at(0).bd_rate.value();
}

const std::vector<Frame420>& orbit33() {
    static const auto frames = synthesize(SynthKind::Orbit, 192, 96, 33, 1);
    return frames;
}

double g_diag_bd = 0.0;

Outcome criterion4() {
    const auto t0 = Clock::now();
    const ActivityMask mask = diagonal_mask(192, 96);
    g_diag_bd = sweep_bd(orbit33(), mask);
    const double s = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "BD-rate %.3f%% with %.1f%% inactive (%.1f s)", g_diag_bd,
                  100.0 * mask.inactive_fraction(), s);
    return {g_diag_bd <= -1.0 && s < 300.0, buf};
}

Outcome criterion5() {
    const ActivityMask thin = test::strip_mask(192, 96, 82, 3);
    const double thin_bd = sweep_bd(orbit33(), thin);
    char buf[160];
    std::snprintf(buf, sizeof buf, "diagonal %.3f%% vs strip %.3f%% (%.2f%% inactive)", g_diag_bd, thin_bd,
                  100.0 * thin.inactive_fraction());
    return {-g_diag_bd > -thin_bd, buf};
}

Outcome criterion6() {
    std::mt19937 rng(6);
    const int sizes[] = {4, 8, 16, 32};
    int violations = 0;
    double max_err = 0.0;
    const int n_blocks = 10000;
    for (int i = 0; i < n_blocks; ++i) {
        const int n = sizes[rng() % 4U];
        ResidualBlock r(n);
        for (auto& v : r.values)
            v = static_cast<int>(rng() % 511U) - 255;
        const auto mbits = test::random_block_mask(n, rng);
        const MaskView m{mbits.data(), n, n, n};
        const CoeffBlock before = forward_dct(r);
        const CoeffBlock after = forward_dct(zero_inactive_residual(r, m));
        if (energy(after) > energy(before) * (1.0 + 1e-12))
            ++violations;
        const RealBlock back = inverse_dct(before);
        for (std::size_t k = 0; k < r.values.size(); ++k)
            max_err = std::max(max_err, std::fabs(back.values[k] - r.values[k]));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d blocks, %d energy violations, DCT round-trip max error %.3g", n_blocks, violations,
                  max_err);
    return {violations == 0 && max_err <= 1e-9, buf};
}

Outcome criterion7() {
    FramePlane a(64, 32, 100), b(64, 32, 116);
    const double p = psnr(a, b);
    const double ws = ws_psnr_erp(a, b);
    const std::vector<RdPoint> anchor{{1000, 34}, {2000, 36}, {4000, 38}, {8000, 40}};
    std::vector<RdPoint> test = anchor;
    for (auto& t : test)
        t.bitrate *= 1.1;
    const double bd = bd_rate(anchor, test).percent;
    char buf[160];
    std::snprintf(buf, sizeof buf, "psnr %.4f dB, ws-psnr delta %.2e dB, bd(x1.1) %.6f%%", p, std::fabs(ws - p), bd);
    return {std::fabs(p - 24.0486) <= 0.001 && std::fabs(ws - p) <= 1e-9 && std::fabs(bd - 10.0) <= 1e-4, buf};
}

Outcome criterion8() {
    std::mt19937 rng(8);
    const int sizes[] = {4, 8, 16, 32};
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = sizes[rng() % 4U];
        const PixelBlock a = test::random_block(n, rng);
        const PixelBlock b = i % 2 ? test::random_block(n, rng) : test::noisy_copy(a, 9, rng);
        const std::vector<std::uint8_t> ones(static_cast<std::size_t>(n) * n, 1);
        const MaskView m{ones.data(), n, n, n};
        if (masked_sad(a.view(), b.view(), m) != sad(a.view(), b.view()))
            ++mismatches;
        if (masked_ssd(a.view(), b.view(), m) != ssd(a.view(), b.view()))
            ++mismatches;
        if (std::fabs(masked_satd(a.view(), b.view(), m) - satd(a.view(), b.view())) > 1e-9)
            ++mismatches;
    }
    return {mismatches == 0, "1000 blocks x 3 metrics, " + std::to_string(mismatches) + " mismatches"};
}

// Independent statistics oracle: plain loops over the CTU.
SaoStats oracle_stats(const FramePlane& orig, const FramePlane& rec, Rect r, const ActivityMask& mask, int cls) {
    static const int dirs[4][4] = {{-1, 0, 1, 0}, {0, -1, 0, 1}, {-1, -1, 1, 1}, {1, -1, -1, 1}};
    SaoStats s;
    for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x) {
            if (!mask.active(x, y))
                continue;
            const int c = rec.at(x, y);
            int cat;
            if (cls < 0) {
                cat = c / 8;
            } else {
                const int* d = dirs[cls];
                const int ax = x + d[0], ay = y + d[1], bx = x + d[2], by = y + d[3];
                if (ax < 0 || bx < 0 || ay < 0 || by < 0 || ax >= rec.width() || bx >= rec.width() ||
                    ay >= rec.height() || by >= rec.height())
                    continue;
                const int n1 = rec.at(ax, ay), n2 = rec.at(bx, by);
                if (c < n1 && c < n2)
                    cat = 1;
                else if ((c < n1 && c == n2) || (c == n1 && c < n2))
                    cat = 2;
                else if ((c > n1 && c == n2) || (c == n1 && c > n2))
                    cat = 3;
                else if (c > n1 && c > n2)
                    cat = 4;
                else
                    cat = 0;
            }
            s.count[static_cast<std::size_t>(cat)] += 1;
            s.diff_sum[static_cast<std::size_t>(cat)] += int(orig.at(x, y)) - c;
        }
    return s;
}

Outcome criterion9() {
    std::mt19937 rng(9);
    // 64x64 plane, CTU at (16, 16); the right half of the plane is inactive.
    const int W = 64, H = 64;
    FramePlane orig = test::random_plane(W, H, rng);
    FramePlane rec = orig;
    for (auto& s : rec.samples())
        s = static_cast<std::uint8_t>(std::clamp(int(s) + int(rng() % 9U) - 4, 0, 255));
    const ActivityMask mask = test::strip_mask(W, H, 32, 32);
    const Rect ctu{16, 16, 32, 32};
    bool stats_ok = true;
    for (int cls = -1; cls < 4; ++cls) {
        const SaoClass sc = cls < 0 ? SaoClass::Band : static_cast<SaoClass>(cls + 1);
        const SaoStats got = collect_stats(orig.view(), rec.view(), ctu, mask.view(), sc, true);
        stats_ok = stats_ok && got == oracle_stats(orig, rec, ctu, mask, cls);
    }
    const SaoCandidateStats same = collect_all_stats(orig.view(), orig.view(), ctu, mask.view(), true);
    const bool off_ok = choose_params(same, lambdas_for_qp(32).ssd).params.mode == SaoMode::Off;

    const auto frames = synthesize(SynthKind::Orbit, 96, 96, 4, 3);
    EncoderConfig cfg = small_cfg(27, ToolFlags::all());
    const EncodeResult r = encode_sequence(frames, diagonal_mask(96, 96), cfg);
    int sao_on = 0;
    for (const auto& f : r.frames)
        sao_on += f.sao_on;
    const bool closure = decode_sequence(r.bitstream.serialize()) == r.reconstruction;
    return {stats_ok && off_ok && closure && sao_on > 0,
            std::string("oracle stats ") + (stats_ok ? "match" : "differ") + ", OFF on identity " +
                (off_ok ? "yes" : "no") + ", closure with " + std::to_string(sao_on) + " SAO-on plane-CTUs " +
                (closure ? "holds" : "broken")};
}

Outcome criterion10() {
    const int W = 768, H = 384;
    const Frame420 erp = test::smooth_erp(W, H);
    const ProjectionFormat erp_fmt{Projection::ERP, 0};
    const ProjectionFormat cmp{Projection::CMP, 16}, ssp{Projection::SSP, 16};
    const Frame420 via_cmp = convert(convert(erp, erp_fmt, cmp, 768, 576), cmp, erp_fmt, W, H);
    const Frame420 via_ssp = convert(convert(erp, erp_fmt, ssp, 192, 6 * 192 + 32), ssp, erp_fmt, W, H);
    const double p_cmp = psnr(erp.luma, via_cmp.luma), p_ssp = psnr(erp.luma, via_ssp.luma);
    char buf[128];
    std::snprintf(buf, sizeof buf, "ERP-CMP-ERP %.2f dB, ERP-SSP-ERP %.2f dB", p_cmp, p_ssp);
    return {p_cmp >= 40.0 && p_ssp >= 40.0, buf};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"codec closure", criterion1},
        {"null-mask equivalence", criterion2},
        {"mask fractions", criterion3},
        {"savings direction", criterion4},
        {"savings ordering", criterion5},
        {"energy monotonicity and DCT round trip", criterion6},
        {"metric closed forms", criterion7},
        {"masked metric degeneracy", criterion8},
        {"SAO correctness", criterion9},
        {"projection round trip", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
