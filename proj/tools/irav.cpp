#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "irav/codec.hpp"
#include "irav/error.hpp"
#include "irav/experiment.hpp"
#include "irav/frame_io.hpp"
#include "irav/geometry.hpp"
#include "irav/kernels.hpp"
#include "irav/metrics.hpp"
#include "irav/synth.hpp"

namespace fs = std::filesystem;
using namespace irav;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInvariant = 3 };

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes through a sibling temp file so a failed run leaves nothing behind.
void write_atomic(const fs::path& p, const std::string& data) {
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + tmp.string());
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out)
            throw DataError("write failed: " + tmp.string());
    }
    fs::rename(tmp, p);
}

ToolFlags parse_tools(const std::string& spec, bool sao) {
    ToolFlags t;
    if (spec == "all") {
        t = ToolFlags::all();
    } else if (spec != "none") {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "masked_rdo")
                t.masked_rdo = true;
            else if (item == "zero_residual")
                t.zero_inactive_residual = true;
            else if (item == "masked_sao")
                t.masked_sao = true;
            else
                throw UsageError("unknown tool '" + item + "' (expected none, all, or masked_rdo,zero_residual,masked_sao)");
        }
    }
    t.sao_enabled = sao;
    return t;
}

nlohmann::json tools_json(const ToolFlags& t) {
    return {{"masked_rdo", t.masked_rdo},
            {"zero_inactive_residual", t.zero_inactive_residual},
            {"masked_sao", t.masked_sao},
            {"sao_enabled", t.sao_enabled}};
}

ProjectionFormat make_format(const std::string& name, int guard) { return {parse_projection(name), guard}; }

struct Args {
    // shared
    std::string input, output, mask_path, format = "erp", stats_path, recon_path;
    int width = 0, height = 0, guard = 16;
    std::size_t frames = SIZE_MAX;
    // convert
    std::string from = "erp", to = "cmp", filter = "bilinear";
    int out_width = 0, out_height = 0;
    // encode
    int qp = 32, intra_period = 16, search_range = 8;
    std::string tools = "none";
    bool no_sao = false, no_half_pel = false, verify = false;
    // evaluate
    std::string other, metric = "psnr";
    // sweep
    std::string name = "seq", synth_kind, source = "native";
    std::vector<int> qps{22, 27, 32, 37};
    int coded_width = 0, coded_height = 0, jobs = 1;
    double fps = 30.0;
    std::string baseline_tools = "none", proposed_tools = "all";
    // synth
    std::string kind = "orbit";
    unsigned seed = 1;
};

int cmd_genmask(const Args& a) {
    const ProjectionFormat f = make_format(a.format, a.guard);
    const ActivityMask m = generate_mask(f, a.width, a.height);
    if (f.kind == Projection::ERP)
        std::cerr << "warning: ERP has no inactive region; mask is all active\n";
    write_mask_pgm(m, a.output);
    std::printf("%s %dx%d inactive %zu of %zu (%.4f%%)\n", std::string(to_string(f.kind)).c_str(), a.width, a.height,
                m.inactive_count(), static_cast<std::size_t>(a.width) * a.height, 100.0 * m.inactive_fraction());
    return kOk;
}

int cmd_convert(const Args& a) {
    const auto frames = read_yuv420(a.input, a.width, a.height, a.frames);
    const ProjectionFormat from = make_format(a.from, a.guard), to = make_format(a.to, a.guard);
    ResampleFilter filter;
    if (a.filter == "bilinear")
        filter = ResampleFilter::Bilinear;
    else if (a.filter == "nearest")
        filter = ResampleFilter::Nearest;
    else
        throw UsageError("filter must be bilinear or nearest");
    std::vector<Frame420> out;
    for (const auto& f : frames)
        out.push_back(convert(f, from, to, a.out_width, a.out_height, filter));
    write_yuv420(out, a.output);
    std::printf("converted %zu frames %s %dx%d -> %s %dx%d\n", out.size(), std::string(to_string(from.kind)).c_str(),
                a.width, a.height, std::string(to_string(to.kind)).c_str(), a.out_width, a.out_height);
    return kOk;
}

int cmd_encode(const Args& a) {
    // Validate every input before producing any output.
    EncoderConfig cfg;
    cfg.qp = a.qp;
    cfg.intra_period = a.intra_period;
    cfg.search_range = a.search_range;
    cfg.half_pel = !a.no_half_pel;
    cfg.tools = parse_tools(a.tools, !a.no_sao);
    cfg.validate();
    const ActivityMask mask = a.mask_path.empty() ? ActivityMask(a.width, a.height) : read_mask_pgm(a.mask_path);
    const auto frames = read_yuv420(a.input, a.width, a.height, a.frames);

    const EncodeResult res = encode_sequence(frames, mask, cfg);
    const auto bytes = res.bitstream.serialize();

    if (a.verify) {
        const auto decoded = decode_sequence(bytes);
        if (decoded != res.reconstruction) {
            std::cerr << "verify: decoder output differs from encoder reconstruction\n";
            return kInvariant;
        }
    }

    nlohmann::json js;
    js["schema"] = 1;
    js["qp"] = cfg.qp;
    js["intra_period"] = cfg.intra_period;
    js["frames"] = frames.size();
    js["total_bits"] = res.total_bits;
    js["tools"] = tools_json(cfg.tools);
    js["header_tool_flags"] = res.bitstream.header.tool_flags;
    js["inactive_fraction"] = mask.inactive_fraction();
    auto& per = js["per_frame"] = nlohmann::json::array();
    double psnr_sum = 0.0, mpsnr_sum = 0.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const double p = psnr(frames[i].luma, res.reconstruction[i].luma);
        const double mp = mask.inactive_count() == mask.bits().size()
                              ? 0.0
                              : masked_psnr(frames[i].luma, res.reconstruction[i].luma, mask);
        psnr_sum += p;
        mpsnr_sum += mp;
        const FrameStats& s = res.frames[i];
        per.push_back({{"type", std::string(1, s.type)},
                       {"bits", s.bits},
                       {"intra_cus", s.intra_cus},
                       {"inter_cus", s.inter_cus},
                       {"sao_on", s.sao_on},
                       {"psnr_y", p},
                       {"masked_psnr_y", mp}});
    }
    std::vector<std::uint64_t> per_bits;
    for (const auto& s : res.frames)
        per_bits.push_back(s.bits);
    js["per_frame_bits"] = per_bits;
    const double n = frames.empty() ? 1.0 : static_cast<double>(frames.size());
    js["psnr_y"] = psnr_sum / n;
    js["masked_psnr_y"] = mpsnr_sum / n;
    js["isa"] = std::string(kernels::to_string(kernels::active_isa()));

    write_atomic(a.output, std::string(bytes.begin(), bytes.end()));
    if (!a.recon_path.empty())
        write_yuv420(res.reconstruction, a.recon_path);
    if (!a.stats_path.empty())
        write_atomic(a.stats_path, js.dump(2) + "\n");
    std::printf("encoded %zu frames, %llu bits%s\n", frames.size(), static_cast<unsigned long long>(res.total_bits),
                a.verify ? ", verified" : "");
    return kOk;
}

int cmd_decode(const Args& a) {
    const auto bytes = read_bytes(a.input);
    const Bitstream bs = Bitstream::parse(bytes);
    const auto frames = decode_sequence(bs);
    write_yuv420(frames, a.output);
    std::printf("decoded %zu frames %ux%u\n", frames.size(), unsigned(bs.header.width), unsigned(bs.header.height));
    return kOk;
}

int cmd_evaluate(const Args& a) {
    const auto fa = read_yuv420(a.input, a.width, a.height, a.frames);
    const auto fb = read_yuv420(a.other, a.width, a.height, a.frames);
    if (fa.size() != fb.size())
        throw DataError("frame counts differ: " + std::to_string(fa.size()) + " vs " + std::to_string(fb.size()));
    std::optional<ActivityMask> mask;
    if (a.metric == "masked_psnr") {
        mask = a.mask_path.empty() ? generate_mask(make_format(a.format, a.guard), a.width, a.height)
                                   : read_mask_pgm(a.mask_path);
    } else if (a.metric != "psnr" && a.metric != "ws_psnr") {
        throw UsageError("metric must be psnr, masked_psnr or ws_psnr");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        double q;
        if (a.metric == "psnr")
            q = psnr(fa[i].luma, fb[i].luma);
        else if (a.metric == "ws_psnr")
            q = ws_psnr_erp(fa[i].luma, fb[i].luma);
        else
            q = masked_psnr(fa[i].luma, fb[i].luma, *mask);
        std::printf("frame %zu %s %.4f\n", i, a.metric.c_str(), q);
        sum += q;
    }
    if (!fa.empty())
        std::printf("mean %s %.4f\n", a.metric.c_str(), sum / static_cast<double>(fa.size()));
    return kOk;
}

int cmd_sweep(const Args& a) {
    SequenceInput seq;
    seq.name = a.name;
    seq.format = make_format(a.format, a.guard);
    const std::size_t nframes = a.frames == SIZE_MAX ? 33 : a.frames;
    if (!a.synth_kind.empty())
        seq.frames = synthesize(parse_synth_kind(a.synth_kind), a.width, a.height, static_cast<int>(nframes), a.seed);
    else
        seq.frames = read_yuv420(a.input, a.width, a.height, nframes);
    if (a.source == "erp") {
        seq.erp_source = true;
        seq.coded_width = a.coded_width;
        seq.coded_height = a.coded_height;
    } else if (a.source != "native") {
        throw UsageError("source must be native or erp");
    }
    if (!a.mask_path.empty())
        seq.mask = read_mask_pgm(a.mask_path);

    SweepSpec spec;
    spec.qps = a.qps;
    spec.fps = a.fps;
    spec.intra_period = a.intra_period;
    spec.search_range = a.search_range;
    spec.jobs = a.jobs;
    spec.configs = {{"baseline", parse_tools(a.baseline_tools, !a.no_sao)},
                    {"proposed", parse_tools(a.proposed_tools, !a.no_sao)}};

    const SweepResult r = run_sweep({seq}, spec);
    fs::create_directories(a.output);
    write_atomic(fs::path(a.output) / "points.csv", points_csv(r.points));
    const std::string report = format_report(r, spec);
    write_atomic(fs::path(a.output) / "report.txt", report);
    std::cout << report;
    return kOk;
}

int cmd_synth(const Args& a) {
    const auto frames = synthesize(parse_synth_kind(a.kind), a.width, a.height,
                                   static_cast<int>(a.frames == SIZE_MAX ? 1 : a.frames), a.seed);
    const auto n = write_yuv420(frames, a.output);
    std::printf("wrote %zu frames (%llu bytes)\n", frames.size(), static_cast<unsigned long long>(n));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"irav: block video codec with inactive-region encoder tools"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file; flags override it");
    Args a;

    auto dims = [&](CLI::App* s) {
        s->add_option("--width", a.width, "luma width")->required();
        s->add_option("--height", a.height, "luma height")->required();
    };

    auto* genmask = app.add_subcommand("genmask", "write the inactive-region mask of a projection format");
    genmask->add_option("--format", a.format, "erp|cmp|ohp|cohp|cisp|rsp|ssp")->required();
    dims(genmask);
    genmask->add_option("--guard", a.guard, "guard band width");
    genmask->add_option("--out", a.output, "PGM output")->required();

    auto* conv = app.add_subcommand("convert", "resample between ERP and CMP/SSP");
    conv->add_option("--input", a.input)->required();
    dims(conv);
    conv->add_option("--from", a.from);
    conv->add_option("--to", a.to);
    conv->add_option("--out-width", a.out_width)->required();
    conv->add_option("--out-height", a.out_height)->required();
    conv->add_option("--guard", a.guard);
    conv->add_option("--frames", a.frames);
    conv->add_option("--filter", a.filter, "bilinear|nearest");
    conv->add_option("--out", a.output)->required();

    auto* enc = app.add_subcommand("encode", "encode a YUV420 sequence");
    enc->add_option("--input", a.input)->required();
    dims(enc);
    enc->add_option("--mask", a.mask_path, "PGM activity mask (default: all active)");
    enc->add_option("--qp", a.qp);
    enc->add_option("--intra-period", a.intra_period);
    enc->add_option("--search-range", a.search_range);
    enc->add_option("--tools", a.tools, "none | all | comma list of masked_rdo,zero_residual,masked_sao");
    enc->add_flag("--no-sao", a.no_sao);
    enc->add_flag("--no-half-pel", a.no_half_pel);
    enc->add_option("--frames", a.frames);
    enc->add_option("--out", a.output, "bitstream output")->required();
    enc->add_option("--stats", a.stats_path, "stats JSON output");
    enc->add_option("--recon", a.recon_path, "reconstruction YUV output");
    enc->add_flag("--verify", a.verify, "decode the bitstream and compare with the reconstruction");

    auto* dec = app.add_subcommand("decode", "decode a bitstream to YUV420");
    dec->add_option("--input", a.input)->required();
    dec->add_option("--out", a.output)->required();

    auto* ev = app.add_subcommand("evaluate", "compare two YUV420 sequences");
    ev->add_option("--input", a.input, "reference")->required();
    ev->add_option("--other", a.other, "distorted")->required();
    dims(ev);
    ev->add_option("--metric", a.metric, "psnr|masked_psnr|ws_psnr");
    ev->add_option("--mask", a.mask_path);
    ev->add_option("--format", a.format, "mask source when --mask is absent");
    ev->add_option("--guard", a.guard);
    ev->add_option("--frames", a.frames);

    auto* sw = app.add_subcommand("sweep", "baseline vs proposed over a QP list, with BD-rate report");
    auto* sw_in = sw->add_option("--input", a.input);
    sw->add_option("--synth", a.synth_kind, "generate gradient|checker|orbit content instead of reading --input")
        ->excludes(sw_in);
    sw->add_option("--seed", a.seed);
    dims(sw);
    sw->add_option("--name", a.name, "sequence name");
    sw->add_option("--format", a.format, "projection format of the coded frames");
    sw->add_option("--guard", a.guard);
    sw->add_option("--source", a.source, "native (input already packed) or erp (convert to --format)");
    sw->add_option("--coded-width", a.coded_width);
    sw->add_option("--coded-height", a.coded_height);
    sw->add_option("--mask", a.mask_path, "override the generated mask (native source)");
    sw->add_option("--qps", a.qps)->delimiter(',');
    sw->add_option("--frames", a.frames, "frames to code (default 33)");
    sw->add_option("--fps", a.fps);
    sw->add_option("--intra-period", a.intra_period);
    sw->add_option("--search-range", a.search_range);
    sw->add_option("--baseline-tools", a.baseline_tools);
    sw->add_option("--proposed-tools", a.proposed_tools);
    sw->add_flag("--no-sao", a.no_sao);
    sw->add_option("--jobs", a.jobs, "concurrent encodes");
    sw->add_option("--out", a.output, "output directory")->required();

    auto* syn = app.add_subcommand("synth", "generate synthetic test content");
    syn->add_option("--kind", a.kind, "gradient|checker|orbit");
    dims(syn);
    syn->add_option("--frames", a.frames);
    syn->add_option("--seed", a.seed);
    syn->add_option("--out", a.output)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*genmask)
            return cmd_genmask(a);
        if (*conv)
            return cmd_convert(a);
        if (*enc)
            return cmd_encode(a);
        if (*dec)
            return cmd_decode(a);
        if (*ev)
            return cmd_evaluate(a);
        if (*sw)
            return cmd_sweep(a);
        if (*syn)
            return cmd_synth(a);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInvariant;
    }
    return kUsage;
}
