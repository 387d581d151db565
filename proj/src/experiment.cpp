#include "irav/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "irav/error.hpp"
#include "irav/frame_io.hpp"

namespace irav {

namespace {

Frame420 gray_fill(const Frame420& f, const ActivityMask& mask, const ActivityMask& cmask) {
    Frame420 out = f;
    for (int c = 0; c < 3; ++c) {
        const ActivityMask& m = c == 0 ? mask : cmask;
        auto& s = out.plane(c).samples();
        for (std::size_t i = 0; i < s.size(); ++i)
            if (!m.bits()[i])
                s[i] = 128;
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ToolConfig baseline_config() { return {"baseline", ToolFlags::none()}; }
ToolConfig proposed_config() { return {"proposed", ToolFlags::all()}; }

SweepPoint run_point(const SequenceInput& seq, const ToolConfig& tc, int qp, const SweepSpec& spec) {
    if (seq.frames.empty())
        throw DataError("sequence '" + seq.name + "' has no frames");
    EncoderConfig cfg;
    cfg.qp = qp;
    cfg.intra_period = spec.intra_period;
    cfg.search_range = spec.search_range;
    cfg.tools = tc.tools;

    SweepPoint p;
    p.sequence = seq.name;
    p.format = std::string(to_string(seq.format.kind));
    p.config = tc.name;
    p.qp = qp;

    double quality = 0.0;
    std::uint64_t bits = 0;
    if (seq.erp_source) {
        const ProjectionFormat erp{Projection::ERP, 0};
        const ActivityMask mask = generate_mask(seq.format, seq.coded_width, seq.coded_height);
        std::vector<Frame420> packed;
        packed.reserve(seq.frames.size());
        for (const auto& f : seq.frames)
            packed.push_back(convert(f, erp, seq.format, seq.coded_width, seq.coded_height));
        const EncodeResult enc = encode_sequence(packed, mask, cfg);
        bits = enc.total_bits;
        for (std::size_t i = 0; i < seq.frames.size(); ++i) {
            const Frame420 back = convert(enc.reconstruction[i], seq.format, erp, seq.frames[i].width(),
                                          seq.frames[i].height());
            quality += ws_psnr_erp(seq.frames[i].luma, back.luma);
        }
        p.metric_kind = "ws_psnr";
    } else {
        const int w = seq.frames.front().width(), h = seq.frames.front().height();
        const ActivityMask mask = seq.mask ? *seq.mask : generate_mask(seq.format, w, h);
        const ActivityMask cmask = subsample_mask_420(mask);
        std::vector<Frame420> input;
        input.reserve(seq.frames.size());
        for (const auto& f : seq.frames)
            input.push_back(gray_fill(f, mask, cmask));
        const EncodeResult enc = encode_sequence(input, mask, cfg);
        bits = enc.total_bits;
        for (std::size_t i = 0; i < input.size(); ++i)
            quality += masked_psnr(input[i].luma, enc.reconstruction[i].luma, mask);
        p.metric_kind = "masked_psnr";
    }
    p.bits = bits;
    p.kbps = bitrate_kbps(bits, spec.fps, seq.frames.size());
    p.quality_db = quality / static_cast<double>(seq.frames.size());
    return p;
}

SweepResult run_sweep(const std::vector<SequenceInput>& seqs, const SweepSpec& spec) {
    if (spec.configs.size() < 2)
        throw UsageError("a sweep needs at least two tool configurations");
    if (spec.qps.size() < 4)
        throw UsageError("a sweep needs at least four QPs for BD-rate");
    struct Task {
        std::size_t seq, cfg, qp;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < seqs.size(); ++s)
        for (std::size_t c = 0; c < spec.configs.size(); ++c)
            for (std::size_t q = 0; q < spec.qps.size(); ++q)
                tasks.push_back({s, c, q});

    SweepResult r;
    r.points.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::string error_ctx;
    std::mutex error_mu;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load())
                return;
            const Task& t = tasks[i];
            try {
                r.points[i] = run_point(seqs[t.seq], spec.configs[t.cfg], spec.qps[t.qp], spec);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!failed.exchange(true)) {
                    error = std::current_exception();
                    error_ctx = "sequence '" + seqs[t.seq].name + "', config '" + spec.configs[t.cfg].name +
                                "', qp " + std::to_string(spec.qps[t.qp]) + ": ";
                }
                return;
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const UsageError& e) {
            throw UsageError(error_ctx + e.what());
        } catch (const DataError& e) {
            throw DataError(error_ctx + e.what());
        } catch (const std::exception& e) {
            throw InvariantError(error_ctx + e.what());
        }
    }
    r.rows = bd_rows(r.points, spec.configs);
    return r;
}

std::vector<ReportRow> bd_rows(const std::vector<SweepPoint>& points, const std::vector<ToolConfig>& configs) {
    // (sequence, format) in first-appearance order.
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& p : points) {
        const auto k = std::make_pair(p.sequence, p.format);
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            keys.push_back(k);
    }
    auto curve = [&](const std::pair<std::string, std::string>& k, const std::string& cfg) {
        std::vector<RdPoint> c;
        for (const auto& p : points)
            if (p.sequence == k.first && p.format == k.second && p.config == cfg)
                c.push_back({p.kbps, p.quality_db});
        return c;
    };
    std::vector<ReportRow> rows;
    for (const auto& k : keys) {
        const auto anchor = curve(k, configs.front().name);
        for (std::size_t c = 1; c < configs.size(); ++c) {
            ReportRow row{k.first, k.second, configs[c].name, std::nullopt};
            const auto test = curve(k, configs[c].name);
            if (anchor.size() >= 4 && test.size() == anchor.size())
                row.bd_rate = bd_rate(anchor, test).percent;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string points_csv(const std::vector<SweepPoint>& points) {
    std::ostringstream os;
    os << "sequence,format,config,qp,bits,kbps,quality_db,metric_kind\n";
    for (const auto& p : points)
        os << p.sequence << ',' << p.format << ',' << p.config << ',' << p.qp << ',' << p.bits << ','
           << fmt_double(p.kbps) << ',' << fmt_double(p.quality_db) << ',' << p.metric_kind << '\n';
    return os.str();
}

std::vector<SweepPoint> parse_points_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "sequence,format,config,qp,bits,kbps,quality_db,metric_kind")
        throw DataError("points CSV: unexpected header");
    std::vector<SweepPoint> out;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            f.push_back(cell);
        if (f.size() != 8)
            throw DataError("points CSV line " + std::to_string(lineno) + ": expected 8 fields");
        try {
            out.push_back({f[0], f[1], f[2], std::stoi(f[3]), std::stoull(f[4]), std::stod(f[5]), std::stod(f[6]), f[7]});
        } catch (const std::logic_error&) {
            throw DataError("points CSV line " + std::to_string(lineno) + ": bad number");
        }
    }
    return out;
}

std::string format_report(const SweepResult& r, const SweepSpec& spec) {
    std::ostringstream os;
    char buf[256];
    os << "GOP: IPPP, intra period " << spec.intra_period << "\n";
    os << "QPs:";
    for (int q : spec.qps)
        os << ' ' << q;
    os << "\nanchor: " << spec.configs.front().name << "\n";
    os << "BD-rate variant: cubic-polyfit (log10 kbps over quality dB)\n\n";
    std::snprintf(buf, sizeof buf, "%-24s %-6s %-12s %12s\n", "sequence", "format", "config", "bd_rate_%");
    os << buf;
    std::map<std::string, std::pair<double, int>> avg;
    std::vector<std::string> order;
    for (const auto& row : r.rows) {
        if (row.bd_rate) {
            std::snprintf(buf, sizeof buf, "%-24s %-6s %-12s %12.6f\n", row.sequence.c_str(), row.format.c_str(),
                          row.config.c_str(), *row.bd_rate);
            if (!avg.count(row.config))
                order.push_back(row.config);
            avg[row.config].first += *row.bd_rate;
            avg[row.config].second += 1;
        } else {
            std::snprintf(buf, sizeof buf, "%-24s %-6s %-12s %12s\n", row.sequence.c_str(), row.format.c_str(),
                          row.config.c_str(), "n/a");
        }
        os << buf;
    }
    for (const auto& c : order) {
        std::snprintf(buf, sizeof buf, "%-24s %-6s %-12s %12.6f\n", "Average", "", c.c_str(),
                      avg[c].first / avg[c].second);
        os << buf;
    }
    return os.str();
}

}  // namespace irav
